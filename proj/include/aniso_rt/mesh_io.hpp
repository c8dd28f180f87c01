#ifndef ANISO_RT_MESH_IO_HPP
#define ANISO_RT_MESH_IO_HPP

#include <array>
#include <string>
#include <vector>

#include "aniso_rt/geometry.hpp"

namespace aniso_rt {

struct Mesh {
    int dim = 0;
    std::vector<VecD> nodes;
    std::vector<std::array<int, 4>> elements; // dim+1 entries used

    int num_elements() const { return static_cast<int>(elements.size()); }
    Simplex element_simplex(int e) const;

    // Every face is shared by at most two elements.
    bool is_conforming() const;
};

// Text format:
//   # comment
//   dim 2
//   nodes 3
//   0 0
//   1 0
//   0 1
//   elements 1
//   0 1 2
// Indices are 0-based; floats are written with 17 significant digits.
Mesh parse_mesh(const std::string& text);
std::string write_mesh(const Mesh& m);

// Structured element families for the studies. Levels refine the degeneracy
// or the mesh width, depending on the family:
//   shape_regular  - unit square split into triangles, uniformly refined
//   needle_2d      - single right triangle, legs alpha1 = h0 2^-level,
//                    alpha2 = alpha1^gamma (bounded maximum angle)
//   cap_2d         - single cap of fixed width, height eps0 * eps_ratio^level
//   cap_graded_2d  - shrinking cap (h, h^gamma): height coupled to h
//   tet_type_i     - needle tetrahedron labeled Type i
//   tet_type_ii    - needle tetrahedron labeled Type ii
//   sliver         - four near-coplanar vertices, flatness eps0 * eps_ratio^level
struct FamilySpec {
    std::string family = "shape_regular";
    int levels = 5;
    double base_scale = 1.0; // h0
    double gamma = 2.0;      // needle/cap exponent
    double eps0 = 0.1;
    double eps_ratio = 0.1;
    double s22 = 0.0;        // tet families: out-of-plane shear parameter
};

Mesh generate_family(const FamilySpec& spec, int level);

} // namespace aniso_rt

#endif
