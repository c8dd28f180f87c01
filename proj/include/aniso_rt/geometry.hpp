#ifndef ANISO_RT_GEOMETRY_HPP
#define ANISO_RT_GEOMETRY_HPP

#include <array>
#include <utility>
#include <vector>

#include "aniso_rt/errors.hpp"
#include "aniso_rt/linalg.hpp"

namespace aniso_rt {

// Reference elements: the unit triangle, and the two reference tetrahedra
// conv{0,e1,e2,e3} and conv{0,e1,e1+e2,e3}.
enum class ReferenceId { Tri, Tet1, Tet2 };

struct Simplex {
    int dim = 0;
    std::vector<VecD> v; // dim+1 vertices

    Simplex() = default;
    Simplex(int d, std::vector<VecD> verts) : dim(d), v(std::move(verts)) {}

    int num_vertices() const { return dim + 1; }
    double diameter() const;       // longest edge
    double measure() const;        // area / volume
    VecD centroid() const;
    std::vector<std::pair<int, int>> edges() const; // index pairs, i < j

    // Throws DegenerateSimplex if measure < 1e-14 * h^dim.
    void require_nondegenerate() const;
};

Simplex reference_simplex(ReferenceId id);

// Labeling case for d=3 (Condition 2 half-space test); None for d=2.
enum class TetType { None, TypeI, TypeII };

struct TildeParams2 {
    double s = 0.0, t = 1.0; // s^2 + t^2 = 1, t > 0
};
struct TildeParams3 {
    double s1 = 0.0, t1 = 1.0;            // s1^2 + t1^2 = 1, s1 > 0, t1 > 0
    double s21 = 0.0, s22 = 0.0, t2 = 1.0; // s21^2 + s22^2 + t2^2 = 1, t2 > 0
};

// Factorization T0 = Phi_T0(Phi_T(T_ref)) with Phi_T = (tilde * hat) and
// Phi_T0 a rotation/mirror plus translation.
struct CanonicalDecomposition {
    int dim = 0;
    ReferenceId reference_id = ReferenceId::Tri;
    TetType case_type = TetType::None;
    VecD alphas;                 // alpha_1..alpha_d
    TildeParams2 tp2;            // dim == 2
    TildeParams3 tp3;            // dim == 3
    MatD rotation;               // A_T0, orthogonal (mirror allowed)
    VecD translation;            // b_T0
    std::array<int, 4> vertex_permutation{0, 1, 2, 3}; // canonical label -> input index
    double h = 0.0;              // diameter (shared by T and T0)
    double volume = 0.0;         // |T| = |T0|

    MatD hat() const;        // diag(alphas)
    MatD tilde() const;      // unit upper-triangular shear
    MatD map_matrix() const; // A_T = tilde * hat (det > 0)
    double det_map() const;
    Simplex canonical_element() const; // T = A_T(T_ref)
};

struct GeometricReport {
    int dim = 0;
    double h = 0.0;
    double volume = 0.0;
    double H_T = 0.0;
    double H_T0 = 0.0;
    double ratio_H_h = 0.0;           // H_T0 / h_T0
    double max_angle = 0.0;           // radians; d=3: max over face angles
    double max_dihedral = 0.0;        // radians; d=3 only (0 for d=2)
    double inradius_diameter = 0.0;   // rho = 2 * inradius
    VecD mathscr_H;                   // (alpha_1, alpha_2 t, ...) per dimension
    bool good_element = false;        // ratio_H_h <= gamma0
    double gamma0 = 10.0;
};

struct ConditionReport {
    double norm_Ahat = 0.0;
    double cond_Ahat = 0.0;
    double norm_Atilde = 0.0;
    double cond_Atilde = 0.0;
    double det_AT = 0.0;
};

// Condition 1 (d=2) / Condition 2 (d=3) canonical decomposition.
// Ties are broken by the lexicographically smallest vertex-index pair.
CanonicalDecomposition canonical_decompose(const Simplex& s);

// H_T = (prod alpha_i / |T|) * h_T.
double param_H_T(const CanonicalDecomposition& decomp, double volume, double h);

// H_T0 = h^2/|T0| * min|L_i| (d=2), h^2/|T0| * min_{i != j} |L_i||L_j| (d=3).
double param_H_T0(const Simplex& s);

// All geometric parameters of a simplex in one pass.
GeometricReport angle_report(const Simplex& s, double gamma0 = 10.0);

// (alpha_1, alpha_2 t) for d=2; (alpha_1, alpha_2 t1, alpha_3 t2) for d=3.
VecD mathscr_H(const CanonicalDecomposition& decomp);

// |s22| <= M * alpha_2 t1 / alpha_3 (always true for d=2).
bool check_assumption1(const CanonicalDecomposition& decomp, double M);

// Smallest M for which check_assumption1 holds (0 for d=2 or s22 == 0).
double assumption1_min_M(const CanonicalDecomposition& decomp);

ConditionReport condition_numbers(const CanonicalDecomposition& decomp);

// Circumradius of a triangle (d=2 only).
double circumradius_2d(const Simplex& s);

// Faces are indexed by the opposite vertex.
std::vector<int> face_vertices(const Simplex& s, int face_index); // ascending
double face_measure(const Simplex& s, int face_index);
VecD face_outward_normal(const Simplex& s, int face_index);

} // namespace aniso_rt

#endif
