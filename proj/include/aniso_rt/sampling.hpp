#ifndef ANISO_RT_SAMPLING_HPP
#define ANISO_RT_SAMPLING_HPP

#include <cstdint>

#include "aniso_rt/geometry.hpp"

namespace aniso_rt {

// xoshiro256** seeded through splitmix64. Self-contained so that seeded
// sweeps reproduce byte-identically across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t z = seed;
        for (auto& w : s_) {
            z += 0x9e3779b97f4a7c15ULL;
            uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
            w = t ^ (t >> 31);
        }
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    uint64_t s_[4];
};

// Uniform vertices in the unit cube, rejecting near-degenerate shapes
// (volume < 1e-8 * h^d) so downstream tolerances stay meaningful.
Simplex random_simplex(Rng& rng, int dim);

} // namespace aniso_rt

#endif
