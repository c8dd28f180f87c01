#include "aniso_rt/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace aniso_rt {

namespace {

const int kNormDegree = kMaxQuadratureDegree;

std::array<VecD, 3> coordinate_axes(int dim) {
    std::array<VecD, 3> dirs;
    for (int i = 0; i < dim; ++i) dirs[static_cast<size_t>(i)] = VecD::unit(dim, i);
    return dirs;
}

// Everything bound_rhs needs about one element, computed once.
struct ElementContext {
    CanonicalDecomposition decomp;
    DirectionFrame frame;
    InstantiatedRule quad_phys;  // on T0
    InstantiatedRule quad_canon; // on T = Phi_T0^{-1}(T0)
    VectorField pulled;          // Psi_T0^{-1} v
    double h = 0.0, ratio_H_h = 0.0;
    VecD hscr;

    ElementContext(const Simplex& s, const VectorField& field)
        : decomp(canonical_decompose(s)), frame(direction_frame(decomp)) {
        QuadratureRule vol = simplex_rule(s.dim, kNormDegree);
        quad_phys = instantiate(vol, s);
        quad_canon = instantiate(vol, decomp.canonical_element());
        pulled = pullback_field(field, PiolaMap::from_affine(rigid_map(decomp)));
        h = decomp.h;
        ratio_H_h = param_H_T0(s) / h;
        hscr = mathscr_H(decomp);
    }
};

double norm_dir_deriv(const VectorField& f, const std::array<VecD, 3>& dirs, const MultiIndex& eps,
                      const InstantiatedRule& q, double p) {
    return lp_norm_vec(q, p, [&](const VecD& x) { return directional_derivative(f, dirs, eps, x); });
}

double norm_dir_div(const VectorField& f, const std::array<VecD, 3>& dirs, const MultiIndex& eps,
                    const InstantiatedRule& q, double p) {
    return lp_norm_scalar(q, p,
                          [&](const VecD& x) { return directional_div_derivative(f, dirs, eps, x); });
}

// || d^eps_x (dv/d r) ||, coordinate multi-index |eps| <= 1 mixed with one
// directional derivative.
double norm_coord_then_dir(const VectorField& f, const VecD& r, const MultiIndex& eps,
                           const InstantiatedRule& q, double p) {
    if (eps.order() == 0)
        return lp_norm_vec(q, p, [&](const VecD& x) { return f.gradient(x) * r; });
    int j = 0;
    for (int i = 0; i < eps.dim; ++i)
        if (eps.e[static_cast<size_t>(i)] > 0) j = i;
    return lp_norm_vec(q, p, [&](const VecD& x) {
        auto h = f.hessian(x);
        VecD out = VecD::zero(f.dim);
        for (int m = 0; m < f.dim; ++m) {
            double s = 0.0;
            for (int n = 0; n < f.dim; ++n) s += h[static_cast<size_t>(m)](n, j) * r[n];
            out[m] = s;
        }
        return out;
    });
}

double sum_weighted_dir_norms(const VectorField& f, const ElementContext& ctx, int order,
                              const VecD& weights_base, bool rotated, bool canonical_domain,
                              double p) {
    const auto& dirs = rotated ? ctx.frame.rotated : coordinate_axes(f.dim);
    const auto& q = canonical_domain ? ctx.quad_canon : ctx.quad_phys;
    double s = 0.0;
    for (const auto& eps : multi_indices(f.dim, order))
        s += multi_power(weights_base, eps) * norm_dir_deriv(f, dirs, eps, q, p);
    return s;
}

double sum_weighted_div_norms(const VectorField& f, const ElementContext& ctx, int order,
                              const VecD& weights_base, bool rotated, bool canonical_domain,
                              double p) {
    const auto& dirs = rotated ? ctx.frame.rotated : coordinate_axes(f.dim);
    const auto& q = canonical_domain ? ctx.quad_canon : ctx.quad_phys;
    double s = 0.0;
    for (const auto& eps : multi_indices(f.dim, order))
        s += multi_power(weights_base, eps) * norm_dir_div(f, dirs, eps, q, p);
    return s;
}

double classical_bound(const Simplex& s, const VectorField& field, const ElementContext& ctx,
                       double p) {
    double face_sum = 0.0;
    for (int f = 0; f <= s.dim; ++f) face_sum += face_measure(s, f);
    double rho = 2.0 * s.dim * s.measure() / face_sum;
    auto axes = coordinate_axes(s.dim);
    double semi = 0.0;
    for (const auto& eps : multi_indices(s.dim, 1))
        semi += std::pow(norm_dir_deriv(field, axes, eps, ctx.quad_phys, p), p);
    semi = std::pow(semi, 1.0 / p);
    return ctx.h / rho * ctx.h * semi;
}

double rhs_61_value(int ell, const VectorField& field, const ElementContext& ctx, double p) {
    double t1 = sum_weighted_dir_norms(field, ctx, ell + 1, ctx.decomp.alphas, true, false, p);
    double t2 = sum_weighted_div_norms(field, ctx, ell, ctx.decomp.alphas, true, false, p);
    return ctx.ratio_H_h * t1 + ctx.h * t2;
}

double rhs_62_value(int ell, const ElementContext& ctx, double p) {
    double t1 = sum_weighted_dir_norms(ctx.pulled, ctx, ell + 1, ctx.hscr, false, true, p);
    double t2 = sum_weighted_div_norms(ctx.pulled, ctx, ell, ctx.hscr, false, true, p);
    return ctx.ratio_H_h * t1 + ctx.h * t2;
}

double rhs_616_value(int ell, const VectorField& field, const ElementContext& ctx, double p) {
    // As printed: only the h-weighted derivative sum (no order ell+1 term).
    double sum = 0.0;
    for (int kdir = 0; kdir < 3; ++kdir)
        for (const auto& eps : multi_indices(3, ell)) {
            MultiIndex mixed = eps;
            mixed.e[static_cast<size_t>(kdir)] += 1;
            sum += multi_power(ctx.decomp.alphas, eps) *
                   norm_dir_deriv(field, ctx.frame.rotated, mixed, ctx.quad_phys, p);
        }
    return ctx.ratio_H_h * ctx.h * sum;
}

double rhs_616b_value(int ell, const ElementContext& ctx, double p) {
    double t1 = sum_weighted_dir_norms(ctx.pulled, ctx, ell + 1, ctx.hscr, false, true, p);
    double t2 = 0.0;
    for (int kdir = 0; kdir < 3; ++kdir)
        for (const auto& eps : multi_indices(3, ell))
            t2 += multi_power(ctx.hscr, eps) *
                  norm_coord_then_dir(ctx.pulled, ctx.frame.r[static_cast<size_t>(kdir)], eps,
                                      ctx.quad_canon, p);
    return ctx.ratio_H_h * (t1 + ctx.h * t2);
}

double rhs_51_value(const VectorField& field, const ElementContext& ctx, double p) {
    double v0 = lp_norm_vec(ctx.quad_phys, p, field.value);
    double t1 = sum_weighted_dir_norms(field, ctx, 1, ctx.decomp.alphas, true, false, p);
    double dv = lp_norm_scalar(ctx.quad_phys, p, field.divergence);
    return ctx.ratio_H_h * (v0 + t1) + ctx.h * dv;
}

double rhs_58_value(const VectorField& field, const ElementContext& ctx, double p) {
    double v0 = lp_norm_vec(ctx.quad_phys, p, field.value);
    double sum = 0.0;
    for (int kdir = 0; kdir < 3; ++kdir) {
        MultiIndex one{3, {0, 0, 0}};
        one.e[static_cast<size_t>(kdir)] = 1;
        sum += norm_dir_deriv(field, ctx.frame.rotated, one, ctx.quad_phys, p);
    }
    return ctx.ratio_H_h * (v0 + ctx.h * sum);
}

// 0/0 counts as a trivially satisfied bound; positive lhs over zero rhs
// would be a genuine violation and surfaces as +inf.
double ratio_of(double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

BoundBreakdown bound_impl(int k, int ell, const Simplex& s, const VectorField& field, double p,
                          const std::vector<BoundVariant>& variants, double assumption1_M,
                          bool throw_on_assumption) {
    BoundBreakdown out;
    out.k = k;
    out.ell = ell;
    out.p = p;

    ElementContext ctx(s, field);
    out.assumption1_min_M = assumption1_min_M(ctx.decomp);

    RTInterpolant interp = interpolate_physical(k, s, field);
    out.lhs = lp_norm_vec(ctx.quad_phys, p,
                          [&](const VecD& x) { return interp.evaluate(x) - field.value(x); });
    out.interp_norm = lp_norm_vec(ctx.quad_phys, p,
                                  [&](const VecD& x) { return interp.evaluate(x); });

    bool type_ii = ctx.decomp.case_type == TetType::TypeII;
    bool a1_ok = check_assumption1(ctx.decomp, assumption1_M);

    for (BoundVariant v : variants) {
        switch (v) {
        case BoundVariant::Classical:
            out.classical_rhs = classical_bound(s, field, ctx, p);
            out.ratio_classical = ratio_of(out.lhs, out.classical_rhs);
            break;
        case BoundVariant::RT61:
            out.rhs_61 = rhs_61_value(ell, field, ctx, p);
            out.ratio_61 = ratio_of(out.lhs, out.rhs_61);
            break;
        case BoundVariant::RT62:
            if (!a1_ok) {
                if (throw_on_assumption)
                    throw Assumption1Violated("minimal M " + std::to_string(out.assumption1_min_M));
                break;
            }
            out.rhs_62 = rhs_62_value(ell, ctx, p);
            out.ratio_62 = ratio_of(out.lhs, out.rhs_62);
            break;
        case BoundVariant::RT616:
            if (!type_ii) {
                if (throw_on_assumption) throw WrongElementType("RT616 needs a Type-ii tetrahedron");
                break;
            }
            out.rhs_616 = rhs_616_value(ell, field, ctx, p);
            out.ratio_616 = ratio_of(out.lhs, out.rhs_616);
            break;
        case BoundVariant::RT616b:
            if (!type_ii || !a1_ok) {
                if (throw_on_assumption) {
                    if (!type_ii) throw WrongElementType("RT616b needs a Type-ii tetrahedron");
                    throw Assumption1Violated("minimal M " + std::to_string(out.assumption1_min_M));
                }
                break;
            }
            out.rhs_616b = rhs_616b_value(ell, ctx, p);
            out.ratio_616b = ratio_of(out.lhs, out.rhs_616b);
            break;
        case BoundVariant::Stability51:
            out.rhs_51 = rhs_51_value(field, ctx, p);
            out.ratio_51 = ratio_of(out.interp_norm, out.rhs_51);
            break;
        case BoundVariant::Stability58:
            if (!type_ii) {
                if (throw_on_assumption) throw WrongElementType("RT58 needs a Type-ii tetrahedron");
                break;
            }
            out.rhs_58 = rhs_58_value(field, ctx, p);
            out.ratio_58 = ratio_of(out.interp_norm, out.rhs_58);
            break;
        }
    }
    return out;
}

} // namespace

double error_lhs(int k, const Simplex& s, const VectorField& field, double p) {
    s.require_nondegenerate();
    RTInterpolant interp = interpolate_physical(k, s, field);
    InstantiatedRule q = instantiate(simplex_rule(s.dim, kNormDegree), s);
    return lp_norm_vec(q, p, [&](const VecD& x) { return interp.evaluate(x) - field.value(x); });
}

BoundBreakdown bound_rhs(int k, int ell, const Simplex& s, const VectorField& field, double p,
                         BoundVariant variant, double assumption1_M) {
    return bound_impl(k, ell, s, field, p, {variant}, assumption1_M, true);
}

BoundBreakdown bound_all(int k, int ell, const Simplex& s, const VectorField& field, double p,
                         double assumption1_M) {
    std::vector<BoundVariant> vs = {BoundVariant::Classical, BoundVariant::RT61, BoundVariant::RT62,
                                    BoundVariant::Stability51};
    if (s.dim == 3) {
        vs.push_back(BoundVariant::RT616);
        vs.push_back(BoundVariant::RT616b);
        vs.push_back(BoundVariant::Stability58);
    }
    return bound_impl(k, ell, s, field, p, vs, assumption1_M, false);
}

namespace {

// || d^{beta+gamma} vhat_comp ||_{L^p(T_hat)} for RT42/RT43 left sides.
double lhs_component_deriv(const VectorField& ref_field, const MultiIndex& delta, int comp,
                           const InstantiatedRule& q_ref, double p) {
    auto axes = coordinate_axes(ref_field.dim);
    return lp_norm_scalar(q_ref, p, [&](const VecD& x) {
        return directional_derivative(ref_field, axes, delta, x)[comp];
    });
}

} // namespace

ScalingRatio check_scaling_lemma(const Simplex& s, const VectorField& ref_field, double p,
                                 ScalingLemma which, double assumption1_M) {
    s.require_nondegenerate();
    const int d = s.dim;
    CanonicalDecomposition decomp = canonical_decompose(s);
    PiolaMap piola = PiolaMap::from_affine(element_map(decomp));
    VectorField v0 = piola_transform_field(ref_field, piola.affine);
    ElementContext ctx(s, v0);
    Simplex ref = reference_simplex(decomp.reference_id);
    InstantiatedRule q_ref = instantiate(simplex_rule(d, kNormDegree), ref);
    auto axes = coordinate_axes(d);

    const double abs_det = std::abs(piola.det_matrix); // = |det A_T|, rigid part has |det| 1
    ConditionReport cn = condition_numbers(decomp);
    const double tilde_norm = cn.norm_Atilde;
    const double tilde_inv_norm = spectral_norm(inverse(decomp.tilde()));

    bool needs_a1 = which == ScalingLemma::RT43 || which == ScalingLemma::RT13 ||
                    which == ScalingLemma::RT14b;
    if (needs_a1 && !check_assumption1(decomp, assumption1_M))
        throw Assumption1Violated("minimal M " + std::to_string(assumption1_min_M(decomp)));
    bool needs_type_ii = which == ScalingLemma::RT14 || which == ScalingLemma::RT14b;
    if (needs_type_ii && decomp.case_type != TetType::TypeII)
        throw WrongElementType("lemma requires a Type-ii tetrahedron");

    ScalingRatio best;

    auto consider = [&](double lhs, double rhs) {
        double r = ratio_of(lhs, rhs);
        if (r >= best.ratio) best = {lhs, rhs, r};
    };

    switch (which) {
    case ScalingLemma::RT41: {
        double lhs = lp_norm_vec(ctx.quad_phys, p, v0.value);
        double sum = 0.0;
        for (int j = 0; j < d; ++j) {
            double nj = lp_norm_scalar(q_ref, p, [&](const VecD& x) { return ref_field.value(x)[j]; });
            sum += std::pow(decomp.alphas[j] * nj, p);
        }
        double rhs = std::pow(abs_det, (1.0 - p) / p) * tilde_norm * std::pow(sum, 1.0 / p);
        consider(lhs, rhs);
        break;
    }
    case ScalingLemma::RT42:
    case ScalingLemma::RT43: {
        for (int total = 0; total <= 2; ++total) {
            double rhs_sum = (which == ScalingLemma::RT42)
                                 ? sum_weighted_dir_norms(v0, ctx, total, decomp.alphas, true,
                                                          false, p)
                                 : sum_weighted_dir_norms(ctx.pulled, ctx, total, ctx.hscr, false,
                                                          true, p);
            for (int comp = 0; comp < d; ++comp) {
                double rhs = std::pow(abs_det, (p - 1.0) / p) / decomp.alphas[comp] *
                             tilde_inv_norm * rhs_sum;
                for (const auto& delta : multi_indices(d, total))
                    consider(lhs_component_deriv(ref_field, delta, comp, q_ref, p), rhs);
            }
        }
        break;
    }
    case ScalingLemma::RT12:
    case ScalingLemma::RT13: {
        for (int ell = 0; ell <= 1; ++ell) {
            double rhs_sum = (which == ScalingLemma::RT12)
                                 ? sum_weighted_div_norms(v0, ctx, ell, decomp.alphas, true, false,
                                                          p)
                                 : sum_weighted_div_norms(ctx.pulled, ctx, ell, ctx.hscr, false,
                                                          true, p);
            double rhs = std::pow(abs_det, (p - 1.0) / p) * rhs_sum;
            for (const auto& beta : multi_indices(d, ell)) {
                double lhs = lp_norm_scalar(q_ref, p, [&](const VecD& x) {
                    return directional_div_derivative(ref_field, axes, beta, x);
                });
                consider(lhs, rhs);
            }
        }
        break;
    }
    case ScalingLemma::RT14:
    case ScalingLemma::RT14b: {
        for (int ell = 0; ell <= 1; ++ell) {
            for (int comp = 0; comp < 3; ++comp) {
                double rhs_sum = 0.0;
                for (const auto& eps : multi_indices(3, ell)) {
                    if (which == ScalingLemma::RT14) {
                        MultiIndex mixed = eps;
                        mixed.e[static_cast<size_t>(comp)] += 1;
                        rhs_sum += multi_power(decomp.alphas, eps) *
                                   norm_dir_deriv(v0, ctx.frame.rotated, mixed, ctx.quad_phys, p);
                    } else {
                        rhs_sum += multi_power(ctx.hscr, eps) *
                                   norm_coord_then_dir(ctx.pulled,
                                                       ctx.frame.r[static_cast<size_t>(comp)], eps,
                                                       ctx.quad_canon, p);
                    }
                }
                double rhs = std::pow(abs_det, (p - 1.0) / p) * tilde_inv_norm * rhs_sum;
                for (const auto& beta : multi_indices(3, ell)) {
                    MultiIndex mixed = beta;
                    mixed.e[static_cast<size_t>(comp)] += 1;
                    double lhs = lp_norm_scalar(q_ref, p, [&](const VecD& x) {
                        return directional_derivative(ref_field, axes, mixed, x)[comp];
                    });
                    consider(lhs, rhs);
                }
            }
        }
        break;
    }
    }
    return best;
}

std::vector<StudyRow> run_family_study(const FamilySpec& spec, int k, const VectorField& field,
                                       double p, double assumption1_M) {
    if (spec.levels < 3) throw BadSpec("a family study needs at least 3 levels");
    std::vector<StudyRow> rows;
    for (int level = 0; level < spec.levels; ++level) {
        Mesh mesh = generate_family(spec, level);
        StudyRow row;
        row.level = level;
        row.num_elements = mesh.num_elements();

        // p-aggregation of norms over elements; max for the geometry columns.
        double lhs_p = 0.0, interp_p = 0.0;
        double cls_p = 0.0, r61_p = 0.0, r62_p = 0.0, r616_p = 0.0, r616b_p = 0.0, r51_p = 0.0,
               r58_p = 0.0;
        bool any62 = true, any616 = mesh.dim == 3, any616b = mesh.dim == 3, any58 = mesh.dim == 3;
        double min_m = 0.0;
        for (int e = 0; e < mesh.num_elements(); ++e) {
            Simplex s = mesh.element_simplex(e);
            GeometricReport g = angle_report(s);
            row.h = std::max(row.h, g.h);
            row.H_T0 = std::max(row.H_T0, g.H_T0);
            row.H_over_h = std::max(row.H_over_h, g.ratio_H_h);
            row.max_angle = std::max(row.max_angle, g.max_angle);
            row.max_dihedral = std::max(row.max_dihedral, g.max_dihedral);

            BoundBreakdown b = bound_all(k, k, s, field, p, assumption1_M);
            min_m = std::max(min_m, b.assumption1_min_M);
            lhs_p += std::pow(b.lhs, p);
            interp_p += std::pow(b.interp_norm, p);
            cls_p += std::pow(b.classical_rhs, p);
            r61_p += std::pow(b.rhs_61, p);
            if (std::isnan(b.rhs_62)) any62 = false; else r62_p += std::pow(b.rhs_62, p);
            if (mesh.dim == 3) {
                if (std::isnan(b.rhs_616)) any616 = false; else r616_p += std::pow(b.rhs_616, p);
                if (std::isnan(b.rhs_616b)) any616b = false; else r616b_p += std::pow(b.rhs_616b, p);
                if (std::isnan(b.rhs_58)) any58 = false; else r58_p += std::pow(b.rhs_58, p);
            }
            r51_p += std::pow(b.rhs_51, p);
        }
        auto root = [&](double acc) { return std::pow(acc, 1.0 / p); };
        row.agg.k = k;
        row.agg.ell = k;
        row.agg.p = p;
        row.agg.lhs = root(lhs_p);
        row.agg.interp_norm = root(interp_p);
        row.agg.classical_rhs = root(cls_p);
        row.agg.rhs_61 = root(r61_p);
        row.agg.rhs_62 = any62 ? root(r62_p) : NAN;
        row.agg.rhs_616 = any616 ? root(r616_p) : NAN;
        row.agg.rhs_616b = any616b ? root(r616b_p) : NAN;
        row.agg.rhs_51 = root(r51_p);
        row.agg.rhs_58 = any58 ? root(r58_p) : NAN;
        row.agg.assumption1_min_M = min_m;
        row.agg.ratio_classical = row.agg.lhs / row.agg.classical_rhs;
        row.agg.ratio_61 = row.agg.lhs / row.agg.rhs_61;
        row.agg.ratio_62 = row.agg.lhs / row.agg.rhs_62;
        row.agg.ratio_616 = row.agg.lhs / row.agg.rhs_616;
        row.agg.ratio_616b = row.agg.lhs / row.agg.rhs_616b;
        row.agg.ratio_51 = row.agg.interp_norm / row.agg.rhs_51;
        row.agg.ratio_58 = row.agg.interp_norm / row.agg.rhs_58;

        if (!rows.empty()) {
            const StudyRow& prev = rows.back();
            if (prev.h > row.h && row.agg.lhs > 0.0 && prev.agg.lhs > 0.0)
                row.order = std::log(prev.agg.lhs / row.agg.lhs) / std::log(prev.h / row.h);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
    std::string out =
        "level,num_elements,h,H_T0,H_over_h,max_angle,max_dihedral,lhs,interp_norm,"
        "classical_rhs,rhs_61,rhs_62,rhs_616,rhs_616b,rhs_51,rhs_58,"
        "ratio_classical,ratio_61,ratio_62,ratio_616,ratio_616b,ratio_51,ratio_58,"
        "assumption1_min_M,order\n";
    char buf[64];
    auto add = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        out += last ? "\n" : ",";
    };
    for (const auto& r : rows) {
        out += std::to_string(r.level) + "," + std::to_string(r.num_elements) + ",";
        add(r.h);
        add(r.H_T0);
        add(r.H_over_h);
        add(r.max_angle);
        add(r.max_dihedral);
        add(r.agg.lhs);
        add(r.agg.interp_norm);
        add(r.agg.classical_rhs);
        add(r.agg.rhs_61);
        add(r.agg.rhs_62);
        add(r.agg.rhs_616);
        add(r.agg.rhs_616b);
        add(r.agg.rhs_51);
        add(r.agg.rhs_58);
        add(r.agg.ratio_classical);
        add(r.agg.ratio_61);
        add(r.agg.ratio_62);
        add(r.agg.ratio_616);
        add(r.agg.ratio_616b);
        add(r.agg.ratio_51);
        add(r.agg.ratio_58);
        add(r.agg.assumption1_min_M);
        add(r.order, true);
    }
    return out;
}

} // namespace aniso_rt
