#include "aniso_rt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace aniso_rt {

namespace {

double clamp_unit(double x) { return std::max(-1.0, std::min(1.0, x)); }

double edge_length(const Simplex& s, int i, int j) {
    return norm2(s.v[static_cast<size_t>(i)] - s.v[static_cast<size_t>(j)]);
}

} // namespace

double Simplex::diameter() const {
    double best = 0.0;
    for (auto [i, j] : edges()) best = std::max(best, edge_length(*this, i, j));
    return best;
}

double Simplex::measure() const {
    if (dim == 2) {
        VecD a = v[1] - v[0], b = v[2] - v[0];
        return 0.5 * std::abs(cross2(a, b));
    }
    VecD a = v[1] - v[0], b = v[2] - v[0], c = v[3] - v[0];
    return std::abs(dot(a, cross3(b, c))) / 6.0;
}

VecD Simplex::centroid() const {
    VecD c = VecD::zero(dim);
    for (const auto& p : v) c = c + p;
    return (1.0 / static_cast<double>(num_vertices())) * c;
}

std::vector<std::pair<int, int>> Simplex::edges() const {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i <= dim; ++i)
        for (int j = i + 1; j <= dim; ++j) e.emplace_back(i, j);
    return e;
}

void Simplex::require_nondegenerate() const {
    if ((dim != 2 && dim != 3) || static_cast<int>(v.size()) != dim + 1)
        throw Error("simplex must have dim 2 or 3 with dim+1 vertices");
    double h = diameter();
    double floor = 1e-14 * std::pow(h, dim);
    if (!(measure() >= floor) || !(h > 0.0))
        throw DegenerateSimplex("simplex volume below 1e-14 * h^d");
}

Simplex reference_simplex(ReferenceId id) {
    switch (id) {
    case ReferenceId::Tri:
        return Simplex(2, {VecD(0, 0), VecD(1, 0), VecD(0, 1)});
    case ReferenceId::Tet1:
        return Simplex(3, {VecD(0, 0, 0), VecD(1, 0, 0), VecD(0, 1, 0), VecD(0, 0, 1)});
    case ReferenceId::Tet2:
    default:
        return Simplex(3, {VecD(0, 0, 0), VecD(1, 0, 0), VecD(1, 1, 0), VecD(0, 0, 1)});
    }
}

MatD CanonicalDecomposition::hat() const { return MatD::diag(alphas); }

MatD CanonicalDecomposition::tilde() const {
    MatD m = MatD::identity(dim);
    if (dim == 2) {
        m(0, 1) = tp2.s;
        m(1, 1) = tp2.t;
    } else {
        m(0, 1) = (case_type == TetType::TypeII) ? -tp3.s1 : tp3.s1;
        m(1, 1) = tp3.t1;
        m(0, 2) = tp3.s21;
        m(1, 2) = tp3.s22;
        m(2, 2) = tp3.t2;
    }
    return m;
}

MatD CanonicalDecomposition::map_matrix() const { return tilde() * hat(); }

double CanonicalDecomposition::det_map() const { return det(map_matrix()); }

Simplex CanonicalDecomposition::canonical_element() const {
    Simplex ref = reference_simplex(reference_id);
    MatD a = map_matrix();
    Simplex out = ref;
    for (auto& p : out.v) p = a * p;
    return out;
}

namespace {

// Smallest / largest edge by length with lexicographic tie-break.
template <typename Better>
std::pair<int, int> select_edge(const Simplex& s, const std::vector<std::pair<int, int>>& cand,
                                Better better) {
    std::pair<int, int> best = cand.front();
    double best_len = edge_length(s, best.first, best.second);
    for (size_t k = 1; k < cand.size(); ++k) {
        double len = edge_length(s, cand[k].first, cand[k].second);
        if (better(len, best_len)) {
            best = cand[k];
            best_len = len;
        }
    }
    return best;
}

CanonicalDecomposition decompose_2d(const Simplex& s) {
    auto all = s.edges();
    auto longest = select_edge(s, all, [](double a, double b) { return a > b; });

    int opp = 3 - longest.first - longest.second; // vertex not on the longest edge
    int p = longest.first, q = longest.second;
    double dp = edge_length(s, opp, p);
    double dq = edge_length(s, opp, q);
    // x2 is the farther endpoint so alpha_2 <= alpha_1; tie -> smaller index.
    int i2 = (dp > dq || (dp == dq && p < q)) ? p : q;
    int i3 = (i2 == p) ? q : p;

    CanonicalDecomposition d;
    d.dim = 2;
    d.reference_id = ReferenceId::Tri;
    d.case_type = TetType::None;
    d.vertex_permutation = {opp, i2, i3, -1};
    d.h = s.diameter();
    d.volume = s.measure();

    const VecD& x1 = s.v[static_cast<size_t>(opp)];
    VecD w2 = s.v[static_cast<size_t>(i2)] - x1;
    VecD w3 = s.v[static_cast<size_t>(i3)] - x1;
    double a1 = norm2(w2);
    double a2 = norm2(w3);
    d.alphas = VecD(a1, a2);

    VecD u = (1.0 / a1) * w2;
    double proj = dot(w3, u);
    VecD perp = w3 - proj * u;
    double perp_len = norm2(perp);
    d.tp2.s = clamp_unit(proj / a2);
    d.tp2.t = perp_len / a2;
    VecD n = (1.0 / perp_len) * perp;

    d.rotation = MatD::from_columns({u, n});
    d.translation = x1;
    return d;
}

struct TetLabeling {
    int i1, i2, i3, i4;
    TetType type;
};

// Condition 2: L_min -> longest edge sharing an endpoint -> half-space test.
TetLabeling label_tet(const Simplex& s) {
    auto all = s.edges();
    auto lmin = select_edge(s, all, [](double a, double b) { return a < b; });

    std::vector<std::pair<int, int>> sharing;
    for (auto e : all) {
        if (e == lmin) continue;
        if (e.first == lmin.first || e.first == lmin.second || e.second == lmin.first ||
            e.second == lmin.second)
            sharing.push_back(e);
    }
    auto lmax = select_edge(s, sharing, [](double a, double b) { return a > b; });

    // a: endpoint shared with L_min; c: the other endpoint of L_max^(min);
    // b: the L_min endpoint off L_max^(min); d: the remaining vertex.
    int a = (lmax.first == lmin.first || lmax.first == lmin.second) ? lmax.first : lmax.second;
    int c = (a == lmax.first) ? lmax.second : lmax.first;
    int b = (a == lmin.first) ? lmin.second : lmin.first;
    int dd = 6 - a - b - c;

    // Perpendicular bisector plane of segment a-c: side(x) < 0 means x is
    // nearer a. The L_min endpoint b is always on a's side (|b-a| is the
    // global minimum); the type is decided by d alone.
    const VecD& va = s.v[static_cast<size_t>(a)];
    const VecD& vc = s.v[static_cast<size_t>(c)];
    VecD axis = vc - va;
    VecD mid = 0.5 * (va + vc);
    double side_d = dot(s.v[static_cast<size_t>(dd)] - mid, axis);

    if (side_d > 0.0) return TetLabeling{c, a, b, dd, TetType::TypeII};
    return TetLabeling{a, c, b, dd, TetType::TypeI};
}

std::optional<CanonicalDecomposition> build_tet(const Simplex& s, const TetLabeling& lab) {
    CanonicalDecomposition d;
    d.dim = 3;
    d.case_type = lab.type;
    d.reference_id = (lab.type == TetType::TypeI) ? ReferenceId::Tet1 : ReferenceId::Tet2;
    d.vertex_permutation = {lab.i1, lab.i2, lab.i3, lab.i4};
    d.h = s.diameter();
    d.volume = s.measure();

    const VecD& x1 = s.v[static_cast<size_t>(lab.i1)];
    VecD w2 = s.v[static_cast<size_t>(lab.i2)] - x1;
    VecD w3 = s.v[static_cast<size_t>(lab.i3)] - x1;
    VecD w4 = s.v[static_cast<size_t>(lab.i4)] - x1;

    double a1 = norm2(w2);
    double a2 = (lab.type == TetType::TypeI)
                    ? norm2(w3)
                    : norm2(s.v[static_cast<size_t>(lab.i3)] - s.v[static_cast<size_t>(lab.i2)]);
    double a3 = norm2(w4);
    d.alphas = VecD(a1, a2, a3);

    VecD u = (1.0 / a1) * w2;
    VecD in_plane = w3 - dot(w3, u) * u;
    double in_plane_len = norm2(in_plane);
    if (!(in_plane_len > 0.0)) return std::nullopt;
    VecD v = (1.0 / in_plane_len) * in_plane;

    // Canonical x3 = (a2 s1, a2 t1, 0) for Type i, (a1 - a2 s1, a2 t1, 0) for
    // Type ii; both give t1 from the in-plane perpendicular component.
    d.tp3.t1 = in_plane_len / a2;
    d.tp3.s1 = (lab.type == TetType::TypeI) ? dot(w3, u) / a2 : (a1 - dot(w3, u)) / a2;

    VecD n = cross3(u, v);
    double height = dot(w4, n);
    if (height < 0.0) { // mirror image is permitted
        n = -1.0 * n;
        height = -height;
    }
    if (!(height > 0.0)) return std::nullopt;

    d.tp3.s21 = dot(w4, u) / a3;
    d.tp3.s22 = dot(w4, v) / a3;
    d.tp3.t2 = height / a3;

    d.rotation = MatD::from_columns({u, v, n});
    d.translation = x1;

    // Condition 2 admissibility (ties get 1e-12 relative slack).
    double tol = 1e-12 * d.h;
    if (!(d.tp3.s1 > 0.0 && d.tp3.t1 > 0.0 && d.tp3.t2 > 0.0)) return std::nullopt;
    if (a2 * d.tp3.s1 > a1 / 2.0 + tol) return std::nullopt;
    if (a3 * d.tp3.s21 > a1 / 2.0 + tol) return std::nullopt;
    if (a2 > a3 + tol || a3 > a1 + tol) return std::nullopt;

    // L_min must be {x1,x3} (Type i) or {x2,x3} (Type ii) and alpha_1 the
    // longest edge sharing an endpoint with it.
    double min_len = std::numeric_limits<double>::infinity();
    for (auto [i, j] : s.edges()) min_len = std::min(min_len, edge_length(s, i, j));
    if (a2 > min_len + tol) return std::nullopt;
    int lmin_a = (lab.type == TetType::TypeI) ? lab.i1 : lab.i2;
    double max_sharing = 0.0;
    for (auto [i, j] : s.edges()) {
        if (i == lmin_a || j == lmin_a || i == lab.i3 || j == lab.i3)
            if (!((i == lmin_a && j == lab.i3) || (i == lab.i3 && j == lmin_a)))
                max_sharing = std::max(max_sharing, edge_length(s, i, j));
    }
    if (a1 + tol < max_sharing) return std::nullopt;

    return d;
}

void verify_reconstruction(const Simplex& s, const CanonicalDecomposition& d) {
    Simplex canon = d.canonical_element();
    double tol = 1e-10 * d.h;
    for (int i = 0; i <= s.dim; ++i) {
        VecD rebuilt = d.rotation * canon.v[static_cast<size_t>(i)] + d.translation;
        VecD target = s.v[static_cast<size_t>(d.vertex_permutation[static_cast<size_t>(i)])];
        if (norm2(rebuilt - target) > tol)
            throw NoAdmissibleLabeling("canonical decomposition failed to reconstruct input");
    }
}

} // namespace

CanonicalDecomposition canonical_decompose(const Simplex& s) {
    s.require_nondegenerate();
    if (s.dim == 2) {
        CanonicalDecomposition d = decompose_2d(s);
        verify_reconstruction(s, d);
        return d;
    }

    if (auto d = build_tet(s, label_tet(s))) {
        verify_reconstruction(s, *d);
        return *d;
    }
    // The constructive labeling satisfies Condition 2 for every nondegenerate
    // tetrahedron; searching the remaining labelings is a guard only.
    static const std::array<int, 4> base{0, 1, 2, 3};
    std::array<int, 4> perm = base;
    std::sort(perm.begin(), perm.end());
    do {
        for (TetType type : {TetType::TypeI, TetType::TypeII}) {
            if (auto d = build_tet(s, TetLabeling{perm[0], perm[1], perm[2], perm[3], type})) {
                verify_reconstruction(s, *d);
                return *d;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    throw NoAdmissibleLabeling("no vertex labeling satisfies the decomposition conditions");
}

double param_H_T(const CanonicalDecomposition& decomp, double volume, double h) {
    double prod = 1.0;
    for (int i = 0; i < decomp.dim; ++i) prod *= decomp.alphas[i];
    return prod / volume * h;
}

double param_H_T0(const Simplex& s) {
    s.require_nondegenerate();
    double h = s.diameter();
    std::vector<double> lens;
    for (auto [i, j] : s.edges()) lens.push_back(edge_length(s, i, j));
    std::sort(lens.begin(), lens.end());
    double factor = (s.dim == 2) ? lens[0] : lens[0] * lens[1];
    return h * h / s.measure() * factor;
}

std::vector<int> face_vertices(const Simplex& s, int face_index) {
    if (face_index < 0 || face_index > s.dim)
        throw BadFaceIndex("face index " + std::to_string(face_index));
    std::vector<int> f;
    for (int i = 0; i <= s.dim; ++i)
        if (i != face_index) f.push_back(i);
    return f;
}

double face_measure(const Simplex& s, int face_index) {
    auto f = face_vertices(s, face_index);
    if (s.dim == 2)
        return norm2(s.v[static_cast<size_t>(f[1])] - s.v[static_cast<size_t>(f[0])]);
    VecD e1 = s.v[static_cast<size_t>(f[1])] - s.v[static_cast<size_t>(f[0])];
    VecD e2 = s.v[static_cast<size_t>(f[2])] - s.v[static_cast<size_t>(f[0])];
    return 0.5 * norm2(cross3(e1, e2));
}

VecD face_outward_normal(const Simplex& s, int face_index) {
    auto f = face_vertices(s, face_index);
    VecD n;
    if (s.dim == 2) {
        VecD e = s.v[static_cast<size_t>(f[1])] - s.v[static_cast<size_t>(f[0])];
        n = VecD(e[1], -e[0]);
    } else {
        VecD e1 = s.v[static_cast<size_t>(f[1])] - s.v[static_cast<size_t>(f[0])];
        VecD e2 = s.v[static_cast<size_t>(f[2])] - s.v[static_cast<size_t>(f[0])];
        n = cross3(e1, e2);
    }
    n = normalized(n);
    VecD mid = s.v[static_cast<size_t>(f[0])];
    for (size_t k = 1; k < f.size(); ++k) mid = mid + s.v[static_cast<size_t>(f[k])];
    mid = (1.0 / static_cast<double>(f.size())) * mid;
    if (dot(n, mid - s.v[static_cast<size_t>(face_index)]) < 0.0) n = -1.0 * n;
    return n;
}

namespace {

double vertex_angle(const VecD& apex, const VecD& p, const VecD& q) {
    VecD a = p - apex, b = q - apex;
    double c = dot(a, b) / (norm2(a) * norm2(b));
    return std::acos(clamp_unit(c));
}

} // namespace

GeometricReport angle_report(const Simplex& s, double gamma0) {
    s.require_nondegenerate();
    GeometricReport r;
    r.dim = s.dim;
    r.h = s.diameter();
    r.volume = s.measure();
    r.gamma0 = gamma0;

    if (s.dim == 2) {
        for (int i = 0; i < 3; ++i)
            r.max_angle = std::max(
                r.max_angle, vertex_angle(s.v[static_cast<size_t>(i)],
                                          s.v[static_cast<size_t>((i + 1) % 3)],
                                          s.v[static_cast<size_t>((i + 2) % 3)]));
    } else {
        // 12 face angles: per face (opposite vertex o), per apex on the face.
        for (int o = 0; o < 4; ++o) {
            std::vector<int> f;
            for (int i = 0; i < 4; ++i)
                if (i != o) f.push_back(i);
            for (int k = 0; k < 3; ++k)
                r.max_angle = std::max(
                    r.max_angle,
                    vertex_angle(s.v[static_cast<size_t>(f[static_cast<size_t>(k)])],
                                 s.v[static_cast<size_t>(f[static_cast<size_t>((k + 1) % 3)])],
                                 s.v[static_cast<size_t>(f[static_cast<size_t>((k + 2) % 3)])]));
        }
        // 6 dihedral angles: pair of faces adjacent to each edge, interior
        // angle from outward normals.
        for (auto [i, j] : s.edges()) {
            std::vector<int> others;
            for (int k = 0; k < 4; ++k)
                if (k != i && k != j) others.push_back(k);
            VecD n1 = face_outward_normal(s, others[0]);
            VecD n2 = face_outward_normal(s, others[1]);
            r.max_dihedral = std::max(r.max_dihedral, std::acos(clamp_unit(-dot(n1, n2))));
        }
    }

    double face_sum = 0.0;
    for (int o = 0; o <= s.dim; ++o) face_sum += face_measure(s, o);
    r.inradius_diameter = 2.0 * s.dim * r.volume / face_sum;

    CanonicalDecomposition d = canonical_decompose(s);
    r.H_T = param_H_T(d, r.volume, r.h);
    r.H_T0 = param_H_T0(s);
    r.ratio_H_h = r.H_T0 / r.h;
    r.mathscr_H = mathscr_H(d);
    r.good_element = r.ratio_H_h <= gamma0;
    return r;
}

VecD mathscr_H(const CanonicalDecomposition& decomp) {
    if (decomp.dim == 2)
        return VecD(decomp.alphas[0], decomp.alphas[1] * decomp.tp2.t);
    return VecD(decomp.alphas[0], decomp.alphas[1] * decomp.tp3.t1,
                decomp.alphas[2] * decomp.tp3.t2);
}

bool check_assumption1(const CanonicalDecomposition& decomp, double M) {
    if (decomp.dim == 2) return true;
    return std::abs(decomp.tp3.s22) <= M * decomp.alphas[1] * decomp.tp3.t1 / decomp.alphas[2];
}

double assumption1_min_M(const CanonicalDecomposition& decomp) {
    if (decomp.dim == 2) return 0.0;
    return std::abs(decomp.tp3.s22) * decomp.alphas[2] / (decomp.alphas[1] * decomp.tp3.t1);
}

ConditionReport condition_numbers(const CanonicalDecomposition& decomp) {
    ConditionReport r;
    MatD ahat = decomp.hat();
    MatD atil = decomp.tilde();
    r.norm_Ahat = spectral_norm(ahat);
    r.cond_Ahat = spectral_cond(ahat);
    r.norm_Atilde = spectral_norm(atil);
    r.cond_Atilde = spectral_cond(atil);
    r.det_AT = det(decomp.map_matrix());

    // These identities are guaranteed; a violation means the decomposition
    // or the singular values are broken. Parameter-only decompositions
    // (without element context) skip the checks.
    if (decomp.h > 0.0 && decomp.volume > 0.0) {
        double amax = 0.0, amin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < decomp.dim; ++i) {
            amax = std::max(amax, decomp.alphas[i]);
            amin = std::min(amin, decomp.alphas[i]);
        }
        double tilde_cap = (decomp.dim == 2) ? std::sqrt(2.0) : 2.0;
        double cond_cap = (decomp.dim == 2 ? 1.0 : 2.0 / 3.0) *
                          param_H_T(decomp, decomp.volume, decomp.h) / decomp.h;
        if (!(r.norm_Ahat <= decomp.h * (1.0 + 1e-10)) ||
            !(std::abs(r.cond_Ahat - amax / amin) <= 1e-10 * r.cond_Ahat) ||
            !(r.norm_Atilde <= tilde_cap * (1.0 + 1e-10)) ||
            !(r.cond_Atilde <= cond_cap * (1.0 + 1e-8)) ||
            !(std::abs(std::abs(r.det_AT) - (decomp.dim == 2 ? 2.0 : 6.0) * decomp.volume) <=
              1e-10 * std::abs(r.det_AT)))
            throw Error("condition-number identities violated (internal inconsistency)");
    }
    return r;
}

double circumradius_2d(const Simplex& s) {
    double a = norm2(s.v[1] - s.v[0]);
    double b = norm2(s.v[2] - s.v[1]);
    double c = norm2(s.v[0] - s.v[2]);
    return a * b * c / (4.0 * s.measure());
}

} // namespace aniso_rt
