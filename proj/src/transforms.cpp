#include "aniso_rt/transforms.hpp"

#include <memory>

#include "aniso_rt/errors.hpp"

namespace aniso_rt {

AffineMap rigid_map(const CanonicalDecomposition& d) { return {d.rotation, d.translation}; }

AffineMap element_map(const CanonicalDecomposition& d) {
    return rigid_map(d).compose(AffineMap{d.map_matrix(), VecD::zero(d.dim)});
}

DirectionFrame direction_frame(const CanonicalDecomposition& d) {
    DirectionFrame f;
    f.dim = d.dim;
    if (d.dim == 2) {
        f.r[0] = VecD(1.0, 0.0);
        f.r[1] = VecD(d.tp2.s, d.tp2.t);
    } else {
        f.r[0] = VecD(1.0, 0.0, 0.0);
        double s1 = (d.case_type == TetType::TypeII) ? -d.tp3.s1 : d.tp3.s1;
        f.r[1] = VecD(s1, d.tp3.t1, 0.0);
        f.r[2] = VecD(d.tp3.s21, d.tp3.s22, d.tp3.t2);
    }
    for (int i = 0; i < d.dim; ++i)
        f.rotated[static_cast<size_t>(i)] = d.rotation * f.r[static_cast<size_t>(i)];
    return f;
}

std::vector<MultiIndex> multi_indices(int dim, int total) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        out.push_back({dim, {total, 0, 0}});
    } else if (dim == 2) {
        for (int e0 = total; e0 >= 0; --e0)
            out.push_back({dim, {e0, total - e0, 0}});
    } else {
        for (int e0 = total; e0 >= 0; --e0)
            for (int e1 = total - e0; e1 >= 0; --e1)
                out.push_back({dim, {e0, e1, total - e0 - e1}});
    }
    return out;
}

double multi_power(const VecD& base, const MultiIndex& mi) {
    double p = 1.0;
    for (int i = 0; i < mi.dim; ++i)
        for (int k = 0; k < mi.e[static_cast<size_t>(i)]; ++k) p *= base[i];
    return p;
}

namespace {

// Direction pair (i, j) for |eps| = 2, or (i, -1) for |eps| = 1.
std::pair<int, int> direction_pair(const MultiIndex& eps) {
    int first = -1, second = -1;
    for (int i = 0; i < eps.dim; ++i)
        for (int k = 0; k < eps.e[static_cast<size_t>(i)]; ++k) {
            if (first < 0)
                first = i;
            else
                second = i;
        }
    return {first, second};
}

} // namespace

double directional_derivative(const ScalarField& f, const std::array<VecD, 3>& dirs,
                              const MultiIndex& eps, const VecD& x) {
    int order = eps.order();
    if (order > f.smoothness || order > 2)
        throw UnsupportedOrder("directional derivative of order " + std::to_string(order));
    if (order == 0) return f.value(x);
    auto [i, j] = direction_pair(eps);
    if (order == 1) return dot(dirs[static_cast<size_t>(i)], f.gradient(x));
    MatD h = f.hessian(x);
    return dot(dirs[static_cast<size_t>(i)], h * dirs[static_cast<size_t>(j)]);
}

VecD directional_derivative(const VectorField& f, const std::array<VecD, 3>& dirs,
                            const MultiIndex& eps, const VecD& x) {
    int order = eps.order();
    if (order > f.smoothness || order > 2)
        throw UnsupportedOrder("directional derivative of order " + std::to_string(order));
    if (order == 0) return f.value(x);
    auto [i, j] = direction_pair(eps);
    if (order == 1) return f.gradient(x) * dirs[static_cast<size_t>(i)];
    auto h = f.hessian(x);
    VecD out = VecD::zero(f.dim);
    for (int m = 0; m < f.dim; ++m)
        out[m] = dot(dirs[static_cast<size_t>(i)],
                     h[static_cast<size_t>(m)] * dirs[static_cast<size_t>(j)]);
    return out;
}

double directional_div_derivative(const VectorField& f, const std::array<VecD, 3>& dirs,
                                  const MultiIndex& eps, const VecD& x) {
    int order = eps.order();
    if (order > 1)
        throw UnsupportedOrder("divergence derivative of order " + std::to_string(order));
    if (order == 0) return f.divergence(x);
    auto [i, j] = direction_pair(eps);
    (void)j;
    return dot(dirs[static_cast<size_t>(i)], f.div_gradient(x));
}

double directional_derivative(const ScalarField& f, const DirectionFrame& frame,
                              const MultiIndex& eps, const VecD& x, bool rotated) {
    return directional_derivative(f, rotated ? frame.rotated : frame.r, eps, x);
}

VecD directional_derivative(const VectorField& f, const DirectionFrame& frame,
                            const MultiIndex& eps, const VecD& x, bool rotated) {
    return directional_derivative(f, rotated ? frame.rotated : frame.r, eps, x);
}

VectorField piola_transform_field(const VectorField& ref_field, const AffineMap& phi) {
    auto base = std::make_shared<VectorField>(ref_field);
    auto inv_phi = std::make_shared<AffineMap>(phi.inverted());
    const MatD a = phi.matrix;
    const MatD ainv = inv_phi->matrix;
    const double deta = det(a);
    const int dim = ref_field.dim;

    VectorField out;
    out.dim = dim;
    out.name = ref_field.name + "~piola";
    out.smoothness = ref_field.smoothness;
    out.value = [base, inv_phi, a, deta](const VecD& x) {
        return (1.0 / deta) * (a * base->value(inv_phi->apply(x)));
    };
    // grad_x v = (1/det A) A Ghat(xhat) A^{-1}
    out.gradient = [base, inv_phi, a, ainv, deta](const VecD& x) {
        MatD g = base->gradient(inv_phi->apply(x));
        MatD r = a * g * ainv;
        for (int i = 0; i < r.d; ++i)
            for (int j = 0; j < r.d; ++j) r(i, j) /= deta;
        return r;
    };
    out.hessian = [base, inv_phi, a, ainv, deta, dim](const VecD& x) {
        auto h = base->hessian(inv_phi->apply(x));
        std::array<MatD, 3> r;
        for (int i = 0; i < dim; ++i) {
            r[static_cast<size_t>(i)] = MatD::zero(dim);
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < dim; ++m)
                        for (int n = 0; n < dim; ++n)
                            for (int p = 0; p < dim; ++p)
                                s += a(i, m) * h[static_cast<size_t>(m)](n, p) * ainv(n, j) *
                                     ainv(p, k);
                    r[static_cast<size_t>(i)](j, k) = s / deta;
                }
        }
        return r;
    };
    // Piola identity: div_x v = (1/det A) divhat vhat(xhat).
    out.divergence = [base, inv_phi, deta](const VecD& x) {
        return base->divergence(inv_phi->apply(x)) / deta;
    };
    out.div_gradient = [base, inv_phi, ainv, deta](const VecD& x) {
        VecD g = base->div_gradient(inv_phi->apply(x));
        return (1.0 / deta) * (transpose(ainv) * g);
    };
    return out;
}

VectorField pullback_field(const VectorField& phys_field, const PiolaMap& map) {
    return piola_transform_field(phys_field, map.affine.inverted());
}

} // namespace aniso_rt
