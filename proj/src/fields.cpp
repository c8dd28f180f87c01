#include "aniso_rt/fields.hpp"

#include <cmath>
#include <memory>

#include "aniso_rt/errors.hpp"

namespace aniso_rt {

namespace {

double eval_term(const MonomialTerm& t, const VecD& x, int dim) {
    double v = t.coeff;
    for (int k = 0; k < dim; ++k)
        for (int e = 0; e < t.expo[static_cast<size_t>(k)]; ++e) v *= x[k];
    return v;
}

// d/dx_j of a monomial term (exact).
MonomialTerm diff_term(const MonomialTerm& t, int j) {
    MonomialTerm d = t;
    int e = t.expo[static_cast<size_t>(j)];
    d.coeff *= e;
    d.expo[static_cast<size_t>(j)] = std::max(0, e - 1);
    return d;
}

} // namespace

VectorField make_polynomial_field(int dim, std::string name,
                                  std::vector<std::vector<MonomialTerm>> components) {
    auto comps = std::make_shared<std::vector<std::vector<MonomialTerm>>>(std::move(components));
    VectorField f;
    f.dim = dim;
    f.name = std::move(name);
    f.smoothness = 2;
    f.value = [comps, dim](const VecD& x) {
        VecD v = VecD::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (const auto& t : (*comps)[static_cast<size_t>(i)]) v[i] += eval_term(t, x, dim);
        return v;
    };
    f.gradient = [comps, dim](const VecD& x) {
        MatD g = MatD::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (const auto& t : (*comps)[static_cast<size_t>(i)])
                for (int j = 0; j < dim; ++j) g(i, j) += eval_term(diff_term(t, j), x, dim);
        return g;
    };
    f.hessian = [comps, dim](const VecD& x) {
        std::array<MatD, 3> h;
        for (int i = 0; i < dim; ++i) {
            h[static_cast<size_t>(i)] = MatD::zero(dim);
            for (const auto& t : (*comps)[static_cast<size_t>(i)])
                for (int j = 0; j < dim; ++j)
                    for (int k = 0; k < dim; ++k)
                        h[static_cast<size_t>(i)](j, k) +=
                            eval_term(diff_term(diff_term(t, j), k), x, dim);
        }
        return h;
    };
    f.divergence = [comps, dim](const VecD& x) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
            for (const auto& t : (*comps)[static_cast<size_t>(i)])
                s += eval_term(diff_term(t, i), x, dim);
        return s;
    };
    f.div_gradient = [comps, dim](const VecD& x) {
        VecD g = VecD::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (const auto& t : (*comps)[static_cast<size_t>(i)])
                for (int j = 0; j < dim; ++j)
                    g[j] += eval_term(diff_term(diff_term(t, i), j), x, dim);
        return g;
    };
    return f;
}

namespace {

VectorField trig_field_2d() {
    VectorField f;
    f.dim = 2;
    f.name = "trig";
    const double pi = M_PI;
    f.value = [pi](const VecD& x) {
        return VecD(std::sin(pi * x[0]) * std::sin(pi * x[1]),
                    std::cos(pi * x[0]) * std::cos(pi * x[1]));
    };
    f.gradient = [pi](const VecD& x) {
        MatD g = MatD::zero(2);
        g(0, 0) = pi * std::cos(pi * x[0]) * std::sin(pi * x[1]);
        g(0, 1) = pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
        g(1, 0) = -pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
        g(1, 1) = -pi * std::cos(pi * x[0]) * std::sin(pi * x[1]);
        return g;
    };
    f.hessian = [pi](const VecD& x) {
        std::array<MatD, 3> h;
        double p2 = pi * pi;
        h[0] = MatD::zero(2);
        h[0](0, 0) = -p2 * std::sin(pi * x[0]) * std::sin(pi * x[1]);
        h[0](0, 1) = p2 * std::cos(pi * x[0]) * std::cos(pi * x[1]);
        h[0](1, 0) = h[0](0, 1);
        h[0](1, 1) = -p2 * std::sin(pi * x[0]) * std::sin(pi * x[1]);
        h[1] = MatD::zero(2);
        h[1](0, 0) = -p2 * std::cos(pi * x[0]) * std::cos(pi * x[1]);
        h[1](0, 1) = p2 * std::sin(pi * x[0]) * std::sin(pi * x[1]);
        h[1](1, 0) = h[1](0, 1);
        h[1](1, 1) = -p2 * std::cos(pi * x[0]) * std::cos(pi * x[1]);
        return h;
    };
    // divergence-free: d1(sin sin) and d2(cos cos) cancel
    f.divergence = [](const VecD&) { return 0.0; };
    f.div_gradient = [](const VecD&) { return VecD(0.0, 0.0); };
    return f;
}

VectorField trig_field_3d() {
    VectorField f;
    f.dim = 3;
    f.name = "trig";
    const double pi = M_PI;
    auto s = [pi](double u) { return std::sin(pi * u); };
    auto c = [pi](double u) { return std::cos(pi * u); };
    // v = (sin sin sin, cos cos sin, sin cos cos); not divergence-free.
    f.value = [s, c](const VecD& x) {
        return VecD(s(x[0]) * s(x[1]) * s(x[2]), c(x[0]) * c(x[1]) * s(x[2]),
                    s(x[0]) * c(x[1]) * c(x[2]));
    };
    f.gradient = [s, c, pi](const VecD& x) {
        MatD g = MatD::zero(3);
        g(0, 0) = pi * c(x[0]) * s(x[1]) * s(x[2]);
        g(0, 1) = pi * s(x[0]) * c(x[1]) * s(x[2]);
        g(0, 2) = pi * s(x[0]) * s(x[1]) * c(x[2]);
        g(1, 0) = -pi * s(x[0]) * c(x[1]) * s(x[2]);
        g(1, 1) = -pi * c(x[0]) * s(x[1]) * s(x[2]);
        g(1, 2) = pi * c(x[0]) * c(x[1]) * c(x[2]);
        g(2, 0) = pi * c(x[0]) * c(x[1]) * c(x[2]);
        g(2, 1) = -pi * s(x[0]) * s(x[1]) * c(x[2]);
        g(2, 2) = -pi * s(x[0]) * c(x[1]) * s(x[2]);
        return g;
    };
    f.hessian = [s, c, pi](const VecD& x) {
        std::array<MatD, 3> h;
        double p2 = pi * pi;
        double s0 = s(x[0]), s1 = s(x[1]), s2 = s(x[2]);
        double c0 = c(x[0]), c1 = c(x[1]), c2 = c(x[2]);
        h[0] = MatD::zero(3);
        h[0](0, 0) = -p2 * s0 * s1 * s2;
        h[0](0, 1) = p2 * c0 * c1 * s2;
        h[0](0, 2) = p2 * c0 * s1 * c2;
        h[0](1, 1) = -p2 * s0 * s1 * s2;
        h[0](1, 2) = p2 * s0 * c1 * c2;
        h[0](2, 2) = -p2 * s0 * s1 * s2;
        h[0](1, 0) = h[0](0, 1);
        h[0](2, 0) = h[0](0, 2);
        h[0](2, 1) = h[0](1, 2);
        h[1] = MatD::zero(3);
        h[1](0, 0) = -p2 * c0 * c1 * s2;
        h[1](0, 1) = p2 * s0 * s1 * s2;
        h[1](0, 2) = -p2 * s0 * c1 * c2;
        h[1](1, 1) = -p2 * c0 * c1 * s2;
        h[1](1, 2) = -p2 * c0 * s1 * c2;
        h[1](2, 2) = -p2 * c0 * c1 * s2;
        h[1](1, 0) = h[1](0, 1);
        h[1](2, 0) = h[1](0, 2);
        h[1](2, 1) = h[1](1, 2);
        h[2] = MatD::zero(3);
        h[2](0, 0) = -p2 * s0 * c1 * c2;
        h[2](0, 1) = -p2 * c0 * s1 * c2;
        h[2](0, 2) = -p2 * c0 * c1 * s2;
        h[2](1, 1) = -p2 * s0 * c1 * c2;
        h[2](1, 2) = p2 * s0 * s1 * s2;
        h[2](2, 2) = -p2 * s0 * c1 * c2;
        h[2](1, 0) = h[2](0, 1);
        h[2](2, 0) = h[2](0, 2);
        h[2](2, 1) = h[2](1, 2);
        return h;
    };
    f.divergence = [s, c, pi](const VecD& x) {
        return pi * c(x[0]) * s(x[1]) * s(x[2]) - pi * c(x[0]) * s(x[1]) * s(x[2]) -
               pi * s(x[0]) * c(x[1]) * s(x[2]);
    };
    f.div_gradient = [s, c, pi](const VecD& x) {
        double p2 = pi * pi;
        return VecD(-p2 * c(x[0]) * c(x[1]) * s(x[2]), p2 * s(x[0]) * s(x[1]) * s(x[2]),
                    -p2 * s(x[0]) * c(x[1]) * c(x[2]));
    };
    return f;
}

// (sin x1, sin(40 x2)/40): unit-size first derivatives in both directions but
// |d2^2 v| = 40 |d1^2 v| scale in the second.
VectorField aniso_field(int dim) {
    VectorField f;
    f.dim = dim;
    f.name = "aniso";
    const double w = 40.0;
    f.value = [dim, w](const VecD& x) {
        VecD v = VecD::zero(dim);
        v[0] = std::sin(x[0]);
        v[1] = std::sin(w * x[1]) / w;
        if (dim == 3) v[2] = std::sin(x[2]);
        return v;
    };
    f.gradient = [dim, w](const VecD& x) {
        MatD g = MatD::zero(dim);
        g(0, 0) = std::cos(x[0]);
        g(1, 1) = std::cos(w * x[1]);
        if (dim == 3) g(2, 2) = std::cos(x[2]);
        return g;
    };
    f.hessian = [dim, w](const VecD& x) {
        std::array<MatD, 3> h;
        for (int i = 0; i < dim; ++i) h[static_cast<size_t>(i)] = MatD::zero(dim);
        h[0](0, 0) = -std::sin(x[0]);
        h[1](1, 1) = -w * std::sin(w * x[1]);
        if (dim == 3) h[2](2, 2) = -std::sin(x[2]);
        return h;
    };
    f.divergence = [dim, w](const VecD& x) {
        double s = std::cos(x[0]) + std::cos(w * x[1]);
        if (dim == 3) s += std::cos(x[2]);
        return s;
    };
    f.div_gradient = [dim, w](const VecD& x) {
        VecD g = VecD::zero(dim);
        g[0] = -std::sin(x[0]);
        g[1] = -w * std::sin(w * x[1]);
        if (dim == 3) g[2] = -std::sin(x[2]);
        return g;
    };
    return f;
}

std::vector<VectorField> catalog_2d() {
    std::vector<VectorField> fs;
    fs.push_back(make_polynomial_field(2, "poly0", {{{1.0, {0, 0, 0}}}, {{-2.0, {0, 0, 0}}}}));
    fs.push_back(make_polynomial_field(
        2, "poly1",
        {{{2.0, {1, 0, 0}}, {1.0, {0, 1, 0}}, {1.0, {0, 0, 0}}},
         {{1.0, {1, 0, 0}}, {-1.0, {0, 1, 0}}, {2.0, {0, 0, 0}}}}));
    fs.push_back(make_polynomial_field(
        2, "poly2",
        {{{1.0, {2, 0, 0}}, {1.0, {1, 1, 0}}, {1.0, {0, 1, 0}}},
         {{1.0, {0, 2, 0}}, {-1.0, {1, 1, 0}}, {1.0, {1, 0, 0}}}}));
    fs.push_back(make_polynomial_field(
        2, "poly3",
        {{{1.0, {3, 0, 0}}, {1.0, {0, 3, 0}}, {1.0, {1, 1, 0}}},
         {{1.0, {2, 1, 0}}, {1.0, {0, 2, 0}}, {1.0, {0, 0, 0}}}}));
    fs.push_back(make_polynomial_field(2, "counterexample", {{}, {{1.0, {0, 2, 0}}}}));
    fs.push_back(trig_field_2d());
    fs.push_back(aniso_field(2));
    return fs;
}

std::vector<VectorField> catalog_3d() {
    std::vector<VectorField> fs;
    fs.push_back(make_polynomial_field(
        3, "poly0", {{{1.0, {0, 0, 0}}}, {{-2.0, {0, 0, 0}}}, {{0.5, {0, 0, 0}}}}));
    fs.push_back(make_polynomial_field(
        3, "poly1",
        {{{2.0, {1, 0, 0}}, {1.0, {0, 1, 0}}, {-1.0, {0, 0, 1}}, {1.0, {0, 0, 0}}},
         {{1.0, {1, 0, 0}}, {-1.0, {0, 1, 0}}, {2.0, {0, 0, 1}}},
         {{1.0, {0, 1, 0}}, {1.0, {0, 0, 1}}, {-1.0, {0, 0, 0}}}}));
    fs.push_back(make_polynomial_field(
        3, "poly2",
        {{{1.0, {2, 0, 0}}, {1.0, {0, 1, 1}}},
         {{1.0, {0, 2, 0}}, {-1.0, {1, 0, 1}}, {1.0, {1, 0, 0}}},
         {{1.0, {0, 0, 2}}, {1.0, {1, 1, 0}}, {-1.0, {0, 1, 0}}}}));
    fs.push_back(make_polynomial_field(
        3, "poly3",
        {{{1.0, {3, 0, 0}}, {1.0, {0, 2, 1}}},
         {{1.0, {0, 3, 0}}, {1.0, {1, 0, 2}}},
         {{1.0, {0, 0, 3}}, {1.0, {2, 1, 0}}, {1.0, {0, 0, 0}}}}));
    fs.push_back(trig_field_3d());
    fs.push_back(aniso_field(3));
    return fs;
}

} // namespace

std::vector<VectorField> catalog(int dim) { return dim == 2 ? catalog_2d() : catalog_3d(); }

VectorField field_by_name(int dim, const std::string& name) {
    for (auto& f : catalog(dim))
        if (f.name == name) return f;
    throw BadSpec("unknown field '" + name + "' for dim " + std::to_string(dim));
}

} // namespace aniso_rt
