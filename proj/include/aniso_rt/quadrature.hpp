#ifndef ANISO_RT_QUADRATURE_HPP
#define ANISO_RT_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "aniso_rt/geometry.hpp"

namespace aniso_rt {

// Rule on the unit simplex of intrinsic dimension domain_dim, stored in
// barycentric coordinates. Weights sum to 1/domain_dim! and are positive.
struct QuadratureRule {
    int domain_dim = 0;
    int exact_degree = 0;
    std::vector<std::array<double, 4>> bary;
    std::vector<double> weights;
};

constexpr int kMaxQuadratureDegree = 10;

// Conical-product rule exact for all polynomials of total degree <= degree.
// d in {1,2,3}; throws UnsupportedDegree outside [0, 10].
QuadratureRule simplex_rule(int d, int degree);

// Rule mapped onto a (possibly lower-dimensional) simplex given by vertices;
// weights scale to the simplex measure.
struct InstantiatedRule {
    std::vector<VecD> points;
    std::vector<double> weights;
};

InstantiatedRule instantiate(const QuadratureRule& rule, const std::vector<VecD>& verts);
InstantiatedRule instantiate(const QuadratureRule& rule, const Simplex& s);

// Quadrature on the face opposite `face_index`, with the face measure and
// outward unit normal.
struct FaceRule {
    int face_index = 0;
    int exact_degree = 0;
    double measure = 0.0;
    VecD normal;
    std::vector<VecD> points;    // ambient coordinates
    std::vector<double> weights; // sum to the face measure
};

FaceRule face_rule(const Simplex& s, int face_index, int degree);
// Reference-element convenience: T_hat for d=2, T_hat_1 for d=3.
FaceRule face_rule(int d, int face_index, int degree);

// (sum w |f|^p)^(1/p); |.| is the Euclidean norm of the returned VecD.
double lp_norm_vec(const InstantiatedRule& q, double p, const std::function<VecD(const VecD&)>& f);
double lp_norm_scalar(const InstantiatedRule& q, double p,
                      const std::function<double(const VecD&)>& f);
// max over quadrature points (the L^inf diagnostic).
double max_norm_vec(const InstantiatedRule& q, const std::function<VecD(const VecD&)>& f);

} // namespace aniso_rt

#endif
