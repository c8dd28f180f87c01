#ifndef ANISO_RT_TRANSFORMS_HPP
#define ANISO_RT_TRANSFORMS_HPP

#include <array>
#include <vector>

#include "aniso_rt/fields.hpp"
#include "aniso_rt/geometry.hpp"

namespace aniso_rt {

struct AffineMap {
    MatD matrix;
    VecD offset;

    static AffineMap identity(int dim) { return {MatD::identity(dim), VecD::zero(dim)}; }

    VecD apply(const VecD& p) const { return matrix * p + offset; }
    VecD apply_inverse(const VecD& p) const { return inverse(matrix) * (p - offset); }
    AffineMap inverted() const {
        MatD inv = inverse(matrix);
        return {inv, -1.0 * (inv * offset)};
    }
    // this after other: x -> this(other(x)).
    AffineMap compose(const AffineMap& other) const {
        return {matrix * other.matrix, matrix * other.offset + offset};
    }
};

// Contravariant (divergence-preserving) transformation attached to an affine
// map: v(x) = (1/det A) A vhat(Ahat x).
struct PiolaMap {
    AffineMap affine;
    double det_matrix = 1.0;
    MatD inv_matrix;

    static PiolaMap from_affine(const AffineMap& phi) {
        return {phi, det(phi.matrix), inverse(phi.matrix)};
    }
    static PiolaMap identity(int dim) { return from_affine(AffineMap::identity(dim)); }

    // Value-level push/pull (the point transform is handled by the caller).
    VecD push(const VecD& ref_value) const { return (1.0 / det_matrix) * (affine.matrix * ref_value); }
    VecD pull(const VecD& phys_value) const { return det_matrix * (inv_matrix * phys_value); }
};

// Phi_T0 (rigid part) and Phi = Phi_T0 o Phi_T of a decomposition.
AffineMap rigid_map(const CanonicalDecomposition& d);
AffineMap element_map(const CanonicalDecomposition& d);

// Unit direction vectors r_i of the decomposition and their rotated images
// A_T0 r_i.
struct DirectionFrame {
    int dim = 0;
    std::array<VecD, 3> r;
    std::array<VecD, 3> rotated;
};

DirectionFrame direction_frame(const CanonicalDecomposition& d);

struct MultiIndex {
    int dim = 0;
    std::array<int, 3> e{0, 0, 0};

    int order() const { return e[0] + e[1] + e[2]; }
};

// All multi-indices of the given total order, graded-lexicographic.
std::vector<MultiIndex> multi_indices(int dim, int total);

// prod_i base_i^{e_i}.
double multi_power(const VecD& base, const MultiIndex& mi);

// Iterated directional derivative along the given directions:
// (d1 . grad)^{e_1} ... (dd . grad)^{e_d} applied to the field at x.
// Supports |eps| <= 2; throws UnsupportedOrder beyond the field's order.
double directional_derivative(const ScalarField& f, const std::array<VecD, 3>& dirs,
                              const MultiIndex& eps, const VecD& x);
VecD directional_derivative(const VectorField& f, const std::array<VecD, 3>& dirs,
                            const MultiIndex& eps, const VecD& x);
// Same applied to the divergence of the field (|eps| <= 1).
double directional_div_derivative(const VectorField& f, const std::array<VecD, 3>& dirs,
                                  const MultiIndex& eps, const VecD& x);

// Frame conveniences: rotated directions A_T0 r_i flow along the physical
// element, plain r_i along the canonical one.
double directional_derivative(const ScalarField& f, const DirectionFrame& frame,
                              const MultiIndex& eps, const VecD& x, bool rotated = true);
VecD directional_derivative(const VectorField& f, const DirectionFrame& frame,
                            const MultiIndex& eps, const VecD& x, bool rotated = true);

// Piola pushforward of a reference field through phi, with exact chain-ruled
// derivatives (the Jacobian is constant).
VectorField piola_transform_field(const VectorField& ref_field, const AffineMap& phi);

// Inverse direction: the field on the reference side of the map.
VectorField pullback_field(const VectorField& phys_field, const PiolaMap& map);

} // namespace aniso_rt

#endif
