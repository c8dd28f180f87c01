#include "doctest.h"

#include <cmath>

#include "aniso_rt/quadrature.hpp"
#include "aniso_rt/transforms.hpp"
#include "oracles.hpp"

using namespace aniso_rt;

TEST_CASE("weights are positive and sum to the reference measure") {
    for (int d : {1, 2, 3})
        for (int deg = 0; deg <= kMaxQuadratureDegree; ++deg) {
            QuadratureRule r = simplex_rule(d, deg);
            double sum = 0.0;
            for (double w : r.weights) {
                CHECK(w > 0.0);
                sum += w;
            }
            double fact = 1.0;
            for (int i = 2; i <= d; ++i) fact *= i;
            CHECK(sum == doctest::Approx(1.0 / fact).epsilon(1e-14));
        }
}

TEST_CASE("volume rules integrate monomials exactly on both reference tets") {
    for (ReferenceId ref : {ReferenceId::Tri, ReferenceId::Tet1, ReferenceId::Tet2}) {
        Simplex s = reference_simplex(ref);
        for (int deg = 0; deg <= kMaxQuadratureDegree; ++deg) {
            QuadratureRule r = simplex_rule(s.dim, deg);
            InstantiatedRule q = instantiate(r, s);
            for (int total = 0; total <= deg; ++total)
                for (auto& m : multi_indices(s.dim, total)) {
                    oracle::Poly mono = oracle::Poly::monomial(s.dim, {m.e[0], m.e[1], m.e[2]});
                    double exact = oracle::integrate_over_simplex(mono, s.v);
                    double approx = 0.0;
                    for (size_t i = 0; i < q.points.size(); ++i)
                        approx += q.weights[i] * mono.eval(q.points[i]);
                    CHECK(std::abs(approx - exact) < 1e-12);
                }
        }
    }
}

TEST_CASE("hand-checked reference integrals") {
    // int_T x1 x2 = 1/24 on the unit triangle; int_T x1 = 1/24 on the tet.
    Simplex tri = reference_simplex(ReferenceId::Tri);
    InstantiatedRule q2 = instantiate(simplex_rule(2, 2), tri);
    double v = 0.0;
    for (size_t i = 0; i < q2.points.size(); ++i)
        v += q2.weights[i] * q2.points[i][0] * q2.points[i][1];
    CHECK(v == doctest::Approx(1.0 / 24.0).epsilon(1e-14));

    Simplex tet = reference_simplex(ReferenceId::Tet1);
    InstantiatedRule q3 = instantiate(simplex_rule(3, 1), tet);
    v = 0.0;
    for (size_t i = 0; i < q3.points.size(); ++i) v += q3.weights[i] * q3.points[i][0];
    CHECK(v == doctest::Approx(1.0 / 24.0).epsilon(1e-14));

    // Degree-1 rule on the triangle integrates constants to the area.
    InstantiatedRule q1 = instantiate(simplex_rule(2, 1), tri);
    v = 0.0;
    for (double w : q1.weights) v += w;
    CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("face rules: measures, normals, exactness") {
    Simplex tri = reference_simplex(ReferenceId::Tri);
    FaceRule hyp = face_rule(2, 0, 3);
    CHECK(hyp.measure == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    double len = 0.0;
    for (double w : hyp.weights) len += w;
    CHECK(len == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(hyp.normal[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(hyp.normal[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    FaceRule bottom = face_rule(2, 2, 1);
    CHECK(bottom.normal[0] == doctest::Approx(0.0));
    CHECK(bottom.normal[1] == doctest::Approx(-1.0));

    FaceRule big = face_rule(3, 0, 2);
    CHECK(big.measure == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));

    // Ambient monomials restricted to faces, against the oracle.
    for (ReferenceId ref : {ReferenceId::Tri, ReferenceId::Tet1, ReferenceId::Tet2}) {
        Simplex s = reference_simplex(ref);
        for (int f = 0; f <= s.dim; ++f)
            for (int deg : {2, 5}) {
                FaceRule fr = face_rule(s, f, deg);
                auto fv = face_vertices(s, f);
                std::vector<VecD> verts;
                for (int i : fv) verts.push_back(s.v[static_cast<size_t>(i)]);
                for (int total = 0; total <= deg; ++total)
                    for (auto& m : multi_indices(s.dim, total)) {
                        oracle::Poly mono =
                            oracle::Poly::monomial(s.dim, {m.e[0], m.e[1], m.e[2]});
                        double exact = oracle::integrate_over_simplex(mono, verts);
                        double approx = 0.0;
                        for (size_t i = 0; i < fr.points.size(); ++i)
                            approx += fr.weights[i] * mono.eval(fr.points[i]);
                        CHECK(std::abs(approx - exact) < 1e-12);
                    }
            }
    }

    CHECK_THROWS_AS(face_rule(2, 5, 2), BadFaceIndex);
    CHECK_THROWS_AS(simplex_rule(2, 11), UnsupportedDegree);
    CHECK_THROWS_AS(simplex_rule(2, -1), UnsupportedDegree);
}

TEST_CASE("norm convergence: +2 degrees changes a smooth norm below 1e-8") {
    // |f| stays away from zero on the triangle, so |f| itself is smooth and
    // the L1 norm converges spectrally too.
    Simplex tri = reference_simplex(ReferenceId::Tri);
    auto f = [](const VecD& x) { return VecD(std::sin(x[0] + 0.3), std::cos(x[1])); };
    InstantiatedRule q8 = instantiate(simplex_rule(2, 8), tri);
    InstantiatedRule q10 = instantiate(simplex_rule(2, 10), tri);
    for (double p : {1.0, 2.0}) {
        double n8 = lp_norm_vec(q8, p, f);
        double n10 = lp_norm_vec(q10, p, f);
        CHECK(std::abs(n8 - n10) < 1e-8);
    }

    // Max-over-points diagnostic dominates every Lp mean.
    double mx = max_norm_vec(q10, f);
    CHECK(mx >= lp_norm_vec(q10, 2.0, f) / std::sqrt(0.5));
    CHECK(mx <= std::sqrt(2.0));
}
