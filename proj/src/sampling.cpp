#include "aniso_rt/sampling.hpp"

#include <cmath>

namespace aniso_rt {

Simplex random_simplex(Rng& rng, int dim) {
    for (;;) {
        std::vector<VecD> verts;
        for (int i = 0; i <= dim; ++i) {
            VecD p = VecD::zero(dim);
            for (int c = 0; c < dim; ++c) p[c] = rng.uniform();
            verts.push_back(p);
        }
        Simplex s(dim, std::move(verts));
        double h = s.diameter();
        if (h > 0.0 && s.measure() >= 1e-8 * std::pow(h, dim)) return s;
    }
}

} // namespace aniso_rt
