// Command-line front end: simplex analysis, mesh audits, interpolation-error
// bounds, family studies, scaling-lemma sweeps and the quadratic
// counterexample check.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 property-check failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "aniso_rt/experiments.hpp"
#include "aniso_rt/parallel.hpp"
#include "aniso_rt/sampling.hpp"

using nlohmann::json;
using namespace aniso_rt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProperty = 3;

struct DataError : std::runtime_error {
    explicit DataError(const std::string& m) : std::runtime_error(m) {}
};

// --vertices accepts a file name or an inline list; separators are commas,
// semicolons and whitespace. 6 numbers mean a triangle, 12 a tetrahedron.
Simplex parse_simplex_arg(const std::string& arg) {
    std::string text = arg;
    std::ifstream in(arg);
    if (in.good()) {
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    for (char& c : text)
        if (c == ',' || c == ';') c = ' ';
    std::istringstream ss(text);
    std::vector<double> nums;
    double v;
    while (ss >> v) nums.push_back(v);
    if (!ss.eof()) throw DataError("could not parse vertex list '" + arg + "'");
    if (nums.size() == 6) {
        return Simplex(2, {VecD(nums[0], nums[1]), VecD(nums[2], nums[3]), VecD(nums[4], nums[5])});
    }
    if (nums.size() == 12) {
        return Simplex(3, {VecD(nums[0], nums[1], nums[2]), VecD(nums[3], nums[4], nums[5]),
                           VecD(nums[6], nums[7], nums[8]), VecD(nums[9], nums[10], nums[11])});
    }
    throw DataError("expected 6 (triangle) or 12 (tetrahedron) coordinates, got " +
                    std::to_string(nums.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw DataError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json report_json(const GeometricReport& g) {
    json j;
    j["dim"] = g.dim;
    j["h"] = g.h;
    j["volume"] = g.volume;
    j["H_T"] = g.H_T;
    j["H_T0"] = g.H_T0;
    j["ratio_H_h"] = g.ratio_H_h;
    j["max_angle"] = g.max_angle;
    if (g.dim == 3) j["max_dihedral"] = g.max_dihedral;
    j["inradius_diameter"] = g.inradius_diameter;
    std::vector<double> hs;
    for (int i = 0; i < g.dim; ++i) hs.push_back(g.mathscr_H[i]);
    j["mathscr_H"] = hs;
    j["good_element"] = g.good_element;
    j["gamma0"] = g.gamma0;
    return j;
}

json decomposition_json(const CanonicalDecomposition& d) {
    json j;
    switch (d.reference_id) {
    case ReferenceId::Tri: j["reference"] = "tri"; break;
    case ReferenceId::Tet1: j["reference"] = "tet1"; break;
    case ReferenceId::Tet2: j["reference"] = "tet2"; break;
    }
    j["case_type"] = d.case_type == TetType::None ? "none"
                     : d.case_type == TetType::TypeI ? "type_i"
                                                     : "type_ii";
    std::vector<double> alphas;
    for (int i = 0; i < d.dim; ++i) alphas.push_back(d.alphas[i]);
    j["alphas"] = alphas;
    if (d.dim == 2) {
        j["params"] = {{"s", d.tp2.s}, {"t", d.tp2.t}};
    } else {
        j["params"] = {{"s1", d.tp3.s1}, {"t1", d.tp3.t1}, {"s21", d.tp3.s21},
                       {"s22", d.tp3.s22}, {"t2", d.tp3.t2}};
        j["assumption1_min_M"] = assumption1_min_M(d);
    }
    std::vector<std::vector<double>> rot;
    for (int i = 0; i < d.dim; ++i) {
        std::vector<double> row;
        for (int c = 0; c < d.dim; ++c) row.push_back(d.rotation(i, c));
        rot.push_back(row);
    }
    j["rotation"] = rot;
    std::vector<double> tr;
    for (int i = 0; i < d.dim; ++i) tr.push_back(d.translation[i]);
    j["translation"] = tr;
    std::vector<int> perm;
    for (int i = 0; i <= d.dim; ++i) perm.push_back(d.vertex_permutation[static_cast<size_t>(i)]);
    j["vertex_permutation"] = perm;
    j["det_A_T"] = d.det_map();
    return j;
}

double nan_to_null_helper(double v) { return v; }

void put_opt(json& j, const char* key, double v) {
    if (std::isnan(v))
        j[key] = nullptr;
    else
        j[key] = nan_to_null_helper(v);
}

json breakdown_json(const BoundBreakdown& b) {
    json j;
    j["k"] = b.k;
    j["ell"] = b.ell;
    j["p"] = b.p;
    j["lhs"] = b.lhs;
    j["interp_norm"] = b.interp_norm;
    put_opt(j, "classical_rhs", b.classical_rhs);
    put_opt(j, "rhs_61", b.rhs_61);
    put_opt(j, "rhs_62", b.rhs_62);
    put_opt(j, "rhs_616", b.rhs_616);
    if (!std::isnan(b.rhs_616))
        j["rhs_616_note"] =
            "as printed: only the h-weighted first-derivative sum; possibly missing the "
            "order ell+1 term present in the assumption-1 variant";
    put_opt(j, "rhs_616b", b.rhs_616b);
    put_opt(j, "rhs_51", b.rhs_51);
    put_opt(j, "rhs_58", b.rhs_58);
    put_opt(j, "ratio_classical", b.ratio_classical);
    put_opt(j, "ratio_61", b.ratio_61);
    put_opt(j, "ratio_62", b.ratio_62);
    put_opt(j, "ratio_616", b.ratio_616);
    put_opt(j, "ratio_616b", b.ratio_616b);
    put_opt(j, "ratio_51", b.ratio_51);
    put_opt(j, "ratio_58", b.ratio_58);
    put_opt(j, "assumption1_min_M", b.assumption1_min_M);
    return j;
}

int cmd_analyze(const std::string& vertices, double gamma0) {
    Simplex s = parse_simplex_arg(vertices);
    GeometricReport g = angle_report(s, gamma0);
    CanonicalDecomposition d = canonical_decompose(s);
    json out;
    out["schema"] = 1;
    out["report"] = report_json(g);
    out["decomposition"] = decomposition_json(d);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_audit(const std::string& mesh_path, double gamma0, const std::string& csv_path) {
    Mesh mesh = parse_mesh(read_file(mesh_path));
    const int n = mesh.num_elements();
    std::vector<GeometricReport> reports(static_cast<size_t>(n));
    parallel_for(n, [&](int e) { reports[static_cast<size_t>(e)] = angle_report(mesh.element_simplex(e), gamma0); });

    int good = 0;
    double max_ratio = 0.0, max_angle = 0.0, max_dih = 0.0;
    for (const auto& g : reports) {
        if (g.good_element) ++good;
        max_ratio = std::max(max_ratio, g.ratio_H_h);
        max_angle = std::max(max_angle, g.max_angle);
        max_dih = std::max(max_dih, g.max_dihedral);
    }

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv.good()) throw DataError("cannot write '" + csv_path + "'");
        csv << "element,h,volume,H_T,H_T0,ratio_H_h,max_angle,max_dihedral,"
               "inradius_diameter,good\n";
        char buf[64];
        auto put = [&](double v, bool last = false) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            csv << buf << (last ? "\n" : ",");
        };
        for (int e = 0; e < n; ++e) {
            const auto& g = reports[static_cast<size_t>(e)];
            csv << e << ",";
            put(g.h);
            put(g.volume);
            put(g.H_T);
            put(g.H_T0);
            put(g.ratio_H_h);
            put(g.max_angle);
            put(g.max_dihedral);
            put(g.inradius_diameter);
            csv << (g.good_element ? 1 : 0) << "\n";
        }
    }

    json out;
    out["schema"] = 1;
    out["elements"] = n;
    out["gamma0"] = gamma0;
    out["good"] = good;
    out["bad"] = n - good;
    out["max_ratio_H_h"] = max_ratio;
    out["max_angle"] = max_angle;
    if (mesh.dim == 3) out["max_dihedral"] = max_dih;
    out["conforming"] = mesh.is_conforming();
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

BoundVariant variant_from_name(const std::string& name) {
    if (name == "classical") return BoundVariant::Classical;
    if (name == "rt61") return BoundVariant::RT61;
    if (name == "rt62") return BoundVariant::RT62;
    if (name == "rt616") return BoundVariant::RT616;
    if (name == "rt616b") return BoundVariant::RT616b;
    if (name == "stability51") return BoundVariant::Stability51;
    if (name == "stability58") return BoundVariant::Stability58;
    throw CLI::ValidationError("--variant", "unknown variant '" + name + "'");
}

int cmd_interp_error(int k, int ell, const std::string& field_name, double p,
                     const std::string& simplex_arg, const std::string& variant, double m1) {
    Simplex s = parse_simplex_arg(simplex_arg);
    VectorField field = field_by_name(s.dim, field_name);
    BoundBreakdown b = (variant == "all") ? bound_all(k, ell, s, field, p, m1)
                                          : bound_rhs(k, ell, s, field, p,
                                                      variant_from_name(variant), m1);
    json out;
    out["schema"] = 1;
    out["field"] = field_name;
    out["variant"] = variant;
    out["breakdown"] = breakdown_json(b);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

json study_json(const FamilySpec& spec, int k, const std::string& field_name, double p,
                const std::vector<StudyRow>& rows) {
    json out;
    out["schema"] = 1;
    out["family"] = spec.family;
    out["levels"] = spec.levels;
    out["k"] = k;
    out["field"] = field_name;
    out["p"] = p;
    json jrows = json::array();
    for (const auto& r : rows) {
        json jr;
        jr["level"] = r.level;
        jr["num_elements"] = r.num_elements;
        jr["h"] = r.h;
        jr["H_T0"] = r.H_T0;
        jr["H_over_h"] = r.H_over_h;
        jr["max_angle"] = r.max_angle;
        if (r.max_dihedral > 0.0) jr["max_dihedral"] = r.max_dihedral;
        jr["breakdown"] = breakdown_json(r.agg);
        put_opt(jr, "order", r.order);
        jrows.push_back(jr);
    }
    out["rows"] = jrows;

    auto settled = [&](auto pick) {
        double early = 0.0, late = 0.0;
        for (size_t i = 0; i < rows.size(); ++i) {
            double v = pick(rows[i]);
            if (std::isnan(v)) return json(nullptr);
            (i < 3 ? early : late) = std::max(i < 3 ? early : late, v);
        }
        if (rows.size() <= 3) return json(true);
        return json(late <= 1.1 * early);
    };
    json verdicts;
    verdicts["ratio_61_settled"] = settled([](const StudyRow& r) { return r.agg.ratio_61; });
    verdicts["ratio_62_settled"] = settled([](const StudyRow& r) { return r.agg.ratio_62; });
    verdicts["ratio_51_settled"] = settled([](const StudyRow& r) { return r.agg.ratio_51; });
    double sup61 = 0.0, sup62 = 0.0, sup51 = 0.0;
    for (const auto& r : rows) {
        if (!std::isnan(r.agg.ratio_61)) sup61 = std::max(sup61, r.agg.ratio_61);
        if (!std::isnan(r.agg.ratio_62)) sup62 = std::max(sup62, r.agg.ratio_62);
        if (!std::isnan(r.agg.ratio_51)) sup51 = std::max(sup51, r.agg.ratio_51);
    }
    verdicts["sup_ratio_61"] = sup61;
    verdicts["sup_ratio_62"] = sup62;
    verdicts["sup_ratio_51"] = sup51;
    out["verdicts"] = verdicts;
    return out;
}

int cmd_study(const std::string& family, int levels, int k, const std::string& field_name,
              double p, double base_scale, double gamma, double eps0, double eps_ratio,
              const std::string& csv_path) {
    FamilySpec spec;
    spec.family = family;
    spec.levels = levels;
    spec.base_scale = base_scale;
    spec.gamma = gamma;
    spec.eps0 = eps0;
    spec.eps_ratio = eps_ratio;
    Mesh probe = generate_family(spec, 0);
    VectorField field = field_by_name(probe.dim, field_name);
    auto rows = run_family_study(spec, k, field, p);
    std::string csv = study_csv(rows);
    if (csv_path == "-") {
        std::cout << csv;
        return kExitOk;
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out.good()) throw DataError("cannot write '" + csv_path + "'");
        out << csv;
    }
    std::cout << study_json(spec, k, field_name, p, rows).dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& lemma_name, int dim, int samples, uint64_t seed,
              const std::string& field_name, double p) {
    ScalingLemma lemma;
    if (lemma_name == "rt41") lemma = ScalingLemma::RT41;
    else if (lemma_name == "rt42") lemma = ScalingLemma::RT42;
    else if (lemma_name == "rt43") lemma = ScalingLemma::RT43;
    else if (lemma_name == "rt12") lemma = ScalingLemma::RT12;
    else if (lemma_name == "rt13") lemma = ScalingLemma::RT13;
    else if (lemma_name == "rt14") lemma = ScalingLemma::RT14;
    else if (lemma_name == "rt14b") lemma = ScalingLemma::RT14b;
    else throw CLI::ValidationError("--lemma", "unknown lemma '" + lemma_name + "'");

    bool type_ii_only = lemma == ScalingLemma::RT14 || lemma == ScalingLemma::RT14b;
    if (type_ii_only && dim != 3) throw DataError("this lemma needs --dim 3");

    VectorField field = field_by_name(dim, field_name);
    Rng rng(seed);
    double sup = 0.0;
    int used = 0;
    for (int it = 0; it < samples; ++it) {
        Simplex s = random_simplex(rng, dim);
        if (type_ii_only && canonical_decompose(s).case_type != TetType::TypeII) continue;
        ScalingRatio r;
        try {
            r = check_scaling_lemma(s, field, p, lemma, 1e12);
        } catch (const Assumption1Violated&) {
            continue;
        }
        sup = std::max(sup, r.ratio);
        ++used;
    }
    json out;
    out["schema"] = 1;
    out["lemma"] = lemma_name;
    out["dim"] = dim;
    out["field"] = field_name;
    out["p"] = p;
    out["seed"] = seed;
    out["samples_requested"] = samples;
    out["samples_used"] = used;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", sup);
    out["sup_ratio"] = sup;
    out["sup_ratio_text"] = buf;
    std::cout << out.dump(2) << "\n";
    return std::isfinite(sup) ? kExitOk : kExitProperty;
}

int cmd_counterexample(int k) {
    Simplex ref = reference_simplex(ReferenceId::Tri);
    InstantiatedRule q = instantiate(simplex_rule(2, 10), ref);
    if (k == 0) {
        const RTSpace& sp = build_space(0, 2, ReferenceId::Tri);
        VectorField ce = field_by_name(2, "counterexample");
        RTInterpolant I = interpolate_reference(sp, ce);

        // Exact interpolant is x/3; check the generator expansion directly.
        bool coeffs_ok = std::abs(I.gen_coeffs[0]) < 1e-12 && std::abs(I.gen_coeffs[1]) < 1e-12 &&
                         std::abs(I.gen_coeffs[2] - 1.0 / 3.0) < 1e-12;
        double e1 = lp_norm_scalar(q, 2.0,
                                   [&](const VecD& x) { return I.evaluate(x)[0] - ce.value(x)[0]; });
        double exact_e1 = std::sqrt(1.0 / 108.0);
        bool norm_ok = std::abs(e1 - exact_e1) < 1e-12;
        // v1 = 0 identically: |v1|_{H1} = 0, yet the first-component error is
        // bounded away from zero: the componentwise H1 bound cannot hold.
        bool nonzero_ok = e1 > 0.09;

        std::printf("interpolating vhat = (0, x2^2) with RT^0 on the reference triangle\n");
        std::printf("I vhat = (x1/3, x2/3)   [generator coefficients %.3e %.3e %.17g]\n",
                    I.gen_coeffs[0], I.gen_coeffs[1], I.gen_coeffs[2]);
        std::printf("|(I vhat)_1 - vhat_1|_L2 = %.17g (exact 1/sqrt(108) = %.17g)\n", e1, exact_e1);
        std::printf("|vhat_1|_H1 = 0\n");
        bool pass = coeffs_ok && norm_ok && nonzero_ok;
        std::printf("%s: componentwise stability in H1 seminorm alone fails\n",
                    pass ? "PASS" : "FAIL");
        return pass ? kExitOk : kExitProperty;
    }
    // k = 1 analogue with a cubic second component.
    const RTSpace& sp = build_space(1, 2, ReferenceId::Tri);
    VectorField cubic = make_polynomial_field(2, "cubic", {{}, {{1.0, {0, 3, 0}}}});
    RTInterpolant I = interpolate_reference(sp, cubic);
    double e1 = lp_norm_scalar(q, 2.0,
                               [&](const VecD& x) { return I.evaluate(x)[0] - cubic.value(x)[0]; });
    std::printf("interpolating vhat = (0, x2^3) with RT^1 on the reference triangle\n");
    std::printf("|(I vhat)_1 - vhat_1|_L2 = %.17g\n", e1);
    std::printf("|vhat_1|_H1 = 0\n");
    bool pass = e1 > 0.01;
    std::printf("%s: first-component error persists at k = 1\n", pass ? "PASS" : "FAIL");
    return pass ? kExitOk : kExitProperty;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic simplex geometry and Raviart-Thomas interpolation toolkit"};
    app.require_subcommand(1);

    std::string vertices, mesh_path, csv_path, field_name = "trig", variant = "all";
    std::string family = "shape_regular", lemma = "rt41", simplex_arg;
    double gamma0 = 10.0, p = 2.0, base_scale = 1.0, gamma = 2.0, eps0 = 0.1, eps_ratio = 0.1;
    double m1 = 10.0;
    int k = 0, ell = -1, levels = 5, dim = 2, samples = 500;
    uint64_t seed = 20240817;

    auto* analyze = app.add_subcommand("analyze-simplex",
                                       "geometric report and canonical decomposition (JSON)");
    analyze->add_option("--vertices", vertices,
                        "file or inline list: 'x1,y1;x2,y2;x3,y3' (6 or 12 numbers)")
        ->required();
    analyze->add_option("--gamma0", gamma0, "good-element threshold for H_T0/h (default 10)");

    auto* audit = app.add_subcommand("audit-mesh", "per-element quality audit of a mesh file");
    audit->add_option("--mesh", mesh_path, "mesh file (see README for the format)")->required();
    audit->add_option("--gamma0", gamma0, "good-element threshold");
    audit->add_option("--csv", csv_path, "write the per-element table to this file");
    audit->footer("CSV columns: element,h,volume,H_T,H_T0,ratio_H_h,max_angle,max_dihedral,\n"
                  "inradius_diameter,good");

    auto* ie = app.add_subcommand("interp-error",
                                  "interpolation error and bound quantities on one element");
    ie->add_option("--k", k, "RT order (0 or 1)")->check(CLI::Range(0, 1));
    ie->add_option("--ell", ell, "derivative order in the bounds (default k)");
    ie->add_option("--field", field_name, "field name from the catalog");
    ie->add_option("--p", p, "Lebesgue exponent (1 or 2)")
        ->check(CLI::IsMember({1.0, 2.0}));
    ie->add_option("--simplex", simplex_arg, "element vertices, file or inline")->required();
    ie->add_option("--variant", variant,
                   "classical|rt61|rt62|rt616|rt616b|stability51|stability58|all");
    ie->add_option("--assumption1-M", m1, "constant M for the H-script variants");

    auto* study = app.add_subcommand("study", "family study: CSV rows plus JSON verdicts");
    study->add_option("--family", family,
                      "shape_regular|needle_2d|cap_2d|cap_graded_2d|tet_type_i|tet_type_ii|sliver");
    study->add_option("--levels", levels, "number of levels (>= 3)")->check(CLI::Range(3, 16));
    study->add_option("--k", k, "RT order")->check(CLI::Range(0, 1));
    study->add_option("--field", field_name, "field name");
    study->add_option("--p", p, "Lebesgue exponent")->check(CLI::IsMember({1.0, 2.0}));
    study->add_option("--base-scale", base_scale, "family base scale h0");
    study->add_option("--gamma", gamma, "needle/cap exponent");
    study->add_option("--eps0", eps0, "cap/sliver initial flatness");
    study->add_option("--eps-ratio", eps_ratio, "cap/sliver flatness ratio per level");
    study->add_option("--csv", csv_path, "CSV output path ('-' prints CSV instead of JSON)");
    study->footer("CSV columns: level,num_elements,h,H_T0,H_over_h,max_angle,max_dihedral,\n"
                  "lhs,interp_norm,classical_rhs,rhs_61,rhs_62,rhs_616,rhs_616b,rhs_51,rhs_58,\n"
                  "ratio_classical,ratio_61,ratio_62,ratio_616,ratio_616b,ratio_51,ratio_58,\n"
                  "assumption1_min_M,order  (17 significant digits; nan = not applicable)");

    auto* sweep = app.add_subcommand("sweep", "seeded random sweep of one scaling inequality");
    sweep->add_option("--lemma", lemma, "rt41|rt42|rt43|rt12|rt13|rt14|rt14b");
    sweep->add_option("--dim", dim, "element dimension")->check(CLI::Range(2, 3));
    sweep->add_option("--samples", samples, "number of random elements");
    sweep->add_option("--seed", seed, "PRNG seed (printed in the output)");
    sweep->add_option("--field", field_name, "reference-side field name");
    sweep->add_option("--p", p, "Lebesgue exponent")->check(CLI::IsMember({1.0, 2.0}));

    auto* ce = app.add_subcommand("counterexample",
                                  "componentwise-stability counterexample check");
    ce->add_option("--k", k, "0 (quadratic, exact) or 1 (cubic analogue)")->check(CLI::Range(0, 1));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(vertices, gamma0);
        if (audit->parsed()) return cmd_audit(mesh_path, gamma0, csv_path);
        if (ie->parsed())
            return cmd_interp_error(k, ell < 0 ? k : ell, field_name, p, simplex_arg, variant, m1);
        if (study->parsed())
            return cmd_study(family, levels, k, field_name, p, base_scale, gamma, eps0, eps_ratio,
                             csv_path);
        if (sweep->parsed()) return cmd_sweep(lemma, dim, samples, seed, field_name, p);
        if (ce->parsed()) return cmd_counterexample(k);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
