#ifndef ANISO_RT_RT_SPACE_HPP
#define ANISO_RT_RT_SPACE_HPP

#include <functional>
#include <vector>

#include "aniso_rt/quadrature.hpp"
#include "aniso_rt/transforms.hpp"

namespace aniso_rt {

// dim RT^k: (k+1)(k+3) for d=2, (k+1)(k+2)(k+4)/2 for d=3.
int rt_dim(int k, int d);

// Member of the generating set P_k^d + x P_k (optionally shifted/scaled for
// physical elements: y = (x - shift)/scale).
struct RTGenerator {
    bool radial = false;
    int component = 0; // non-radial only
    MultiIndex mono;
    VecD shift;
    double scale = 1.0;

    VecD value(const VecD& x) const;
    double divergence(const VecD& x) const;
};

struct DofDescriptor {
    enum class Kind { Face, Interior };
    Kind kind = Kind::Face;
    int face = 0;      // Face: which face (opposite-vertex index)
    int index = 0;     // Face: face-poly index; Interior: monomial index
    int component = 0; // Interior only
};

// RT^k finite element on a reference element: moment degrees of freedom
// (face normal moments against P_k(F), interior moments against P_{k-1}^d)
// and the dual basis obtained by inverting the moment matrix.
class RTSpace {
  public:
    int k = 0;
    int dim = 0;
    ReferenceId reference_id = ReferenceId::Tri;
    int N = 0;
    std::vector<RTGenerator> generators;
    std::vector<DofDescriptor> dofs;
    Matrix dual_coeffs;             // basis_j = sum_m dual_coeffs(m,j) generators[m]
    double moment_condition = 0.0;  // 1-norm condition estimate of the moment matrix

    std::vector<double> apply_dofs(const std::function<VecD(const VecD&)>& value) const;

    VecD basis_value(int j, const VecD& x) const;
    double basis_divergence(int j, const VecD& x) const;

    struct FaceDofCache {
        VecD normal;
        double measure = 0.0;
        std::vector<VecD> points;
        std::vector<double> weights;
        std::vector<std::vector<double>> poly_vals; // [poly][point]
    };
    struct InteriorDofCache {
        std::vector<VecD> points;
        std::vector<double> weights;
        std::vector<MultiIndex> monos;
        std::vector<std::vector<double>> mono_vals; // [mono][point]
    };
    std::vector<FaceDofCache> face_cache;
    InteriorDofCache interior_cache;
};

// Built once per (k, d, reference) and shared; throws UnisolvenceFailure if
// the moment matrix condition exceeds 1e12. k limited to {0,1,2}.
const RTSpace& build_space(int k, int d, ReferenceId ref);

struct RTInterpolant {
    const RTSpace* space = nullptr;
    std::vector<double> coeffs;     // DOF values
    std::vector<double> gen_coeffs; // expansion over the generating set
    PiolaMap map;                   // identity for reference interpolants

    VecD evaluate(const VecD& x) const;      // physical coordinates
    double divergence(const VecD& x) const;
};

RTInterpolant interpolate_reference(const RTSpace& space, const VectorField& field);
RTInterpolant interpolate_reference_values(const RTSpace& space,
                                           const std::function<VecD(const VecD&)>& value);

// Pullback path: canonical decomposition, Piola pull, reference moments,
// Piola push.
RTInterpolant interpolate_physical(int k, const Simplex& s, const VectorField& field);

// Independent path: moment problem assembled directly on the physical
// element (shifted/scaled generators, per-face orthonormalized moments).
struct DirectInterpolant {
    std::function<VecD(const VecD&)> value;
    std::function<double(const VecD&)> divergence;
};
DirectInterpolant interpolate_physical_direct(int k, const Simplex& s, const VectorField& field);

} // namespace aniso_rt

#endif
