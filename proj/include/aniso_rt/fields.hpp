#ifndef ANISO_RT_FIELDS_HPP
#define ANISO_RT_FIELDS_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "aniso_rt/linalg.hpp"

namespace aniso_rt {

struct ScalarField {
    int dim = 0;
    std::string name;
    int smoothness = 2;
    std::function<double(const VecD&)> value;
    std::function<VecD(const VecD&)> gradient;
    std::function<MatD(const VecD&)> hessian;
};

// Analytic vector field with closed-form derivatives to order 2.
// gradient(x)(i,j) = d v_i / d x_j; hessian(x)[i](j,k) = d2 v_i / dx_j dx_k.
struct VectorField {
    int dim = 0;
    std::string name;
    int smoothness = 2;
    std::function<VecD(const VecD&)> value;
    std::function<MatD(const VecD&)> gradient;
    std::function<std::array<MatD, 3>(const VecD&)> hessian;
    std::function<double(const VecD&)> divergence;
    std::function<VecD(const VecD&)> div_gradient;
};

// Monomial term of one vector component.
struct MonomialTerm {
    double coeff;
    std::array<int, 3> expo;
};

// Polynomial field with derivatives evaluated exactly from the terms.
VectorField make_polynomial_field(int dim, std::string name,
                                  std::vector<std::vector<MonomialTerm>> components);

// Built-in targets: polynomial degrees 0..3, the quadratic counterexample
// field (0, x2^2) in 2D, a trigonometric field, and a strongly anisotropic
// field (|d2 v| >> |d1 v|).
std::vector<VectorField> catalog(int dim);
VectorField field_by_name(int dim, const std::string& name);

} // namespace aniso_rt

#endif
