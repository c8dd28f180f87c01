#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "aniso_rt/experiments.hpp"
#include "aniso_rt/sampling.hpp"
#include "oracles.hpp"

using namespace aniso_rt;

namespace {

Simplex tri(double x1, double y1, double x2, double y2, double x3, double y3) {
    return Simplex(2, {VecD(x1, y1), VecD(x2, y2), VecD(x3, y3)});
}

} // namespace

TEST_CASE("error_lhs: reproduction, exact counterexample value, h^2 scaling") {
    // Members of RT^k have zero interpolation error.
    Rng rng(41);
    for (int d : {2, 3})
        for (int k : {0, 1}) {
            Simplex s = random_simplex(rng, d);
            VectorField member = field_by_name(d, k == 0 ? "poly0" : "poly1");
            if (k == 1) // poly1 is linear, contained in RT^1
                CHECK(error_lhs(1, s, member, 2.0) < 1e-10);
            CHECK(error_lhs(0, s, field_by_name(d, "poly0"), 2.0) < 1e-10);
        }

    // Counterexample on the reference triangle: sqrt(2/108) in L2.
    Simplex ref = reference_simplex(ReferenceId::Tri);
    double lhs = error_lhs(0, ref, field_by_name(2, "counterexample"), 2.0);
    CHECK(lhs == doctest::Approx(std::sqrt(2.0 / 108.0)).epsilon(1e-10));

    // Linear field, k=0, similar triangles: lhs / h^2 constant within 2%.
    VectorField lin = field_by_name(2, "poly1");
    double base = 0.0;
    for (int l = 0; l <= 3; ++l) {
        double h = std::pow(0.5, l);
        double v = error_lhs(0, tri(0, 0, h, 0, 0, h), lin, 2.0) / (h * h);
        if (l == 0)
            base = v;
        else
            CHECK(v == doctest::Approx(base).epsilon(0.02));
    }
}

TEST_CASE("bound_rhs: zero field, canonical coincidence, enumeration oracle") {
    // Constant field: derivative terms vanish, lhs = 0.
    Simplex ref = reference_simplex(ReferenceId::Tri);
    BoundBreakdown b = bound_all(0, 0, ref, field_by_name(2, "poly0"), 2.0);
    CHECK(b.lhs < 1e-12);
    CHECK(b.rhs_61 < 1e-12);
    CHECK(b.rhs_62 < 1e-12);

    // Identity decomposition: the alpha- and H-script sums coincide.
    BoundBreakdown bt = bound_all(0, 0, ref, field_by_name(2, "trig"), 2.0);
    CHECK(bt.rhs_61 == doctest::Approx(bt.rhs_62).epsilon(1e-12));

    // Needle triangle with linear-plus-quadratic field: recompute RT61 by
    // independent multi-index enumeration.
    double h = 0.25;
    Simplex needle = tri(0, 0, h, 0, 0, h * h);
    VectorField f = field_by_name(2, "poly2");
    BoundBreakdown bn = bound_rhs(0, 0, needle, f, 2.0, BoundVariant::RT61);

    CanonicalDecomposition dec = canonical_decompose(needle);
    DirectionFrame frame = direction_frame(dec);
    InstantiatedRule q = instantiate(simplex_rule(2, 10), needle);
    double sum1 = 0.0;
    for (auto& eps : multi_indices(2, 1)) {
        double alpha_pow = std::pow(dec.alphas[0], eps.e[0]) * std::pow(dec.alphas[1], eps.e[1]);
        // first-order directional derivative along the rotated frame
        int dir = eps.e[0] == 1 ? 0 : 1;
        double nrm = lp_norm_vec(q, 2.0, [&](const VecD& x) {
            return f.gradient(x) * frame.rotated[static_cast<size_t>(dir)];
        });
        sum1 += alpha_pow * nrm;
    }
    double div_norm = lp_norm_scalar(q, 2.0, f.divergence);
    double expected = param_H_T0(needle) / needle.diameter() * sum1 + needle.diameter() * div_norm;
    CHECK(bn.rhs_61 == doctest::Approx(expected).epsilon(1e-10));

    // Error paths.
    Simplex tet = generate_family(FamilySpec{"tet_type_i"}, 0).element_simplex(0);
    CHECK_THROWS_AS(bound_rhs(0, 0, tet, field_by_name(3, "poly1"), 2.0, BoundVariant::RT616),
                    WrongElementType);
    FamilySpec shear;
    shear.family = "tet_type_ii";
    shear.s22 = 0.3;
    Simplex tet2 = generate_family(shear, 3).element_simplex(0);
    CanonicalDecomposition d2 = canonical_decompose(tet2);
    REQUIRE(d2.case_type == TetType::TypeII);
    double min_m = assumption1_min_M(d2);
    REQUIRE(min_m > 1.0); // the sheared needle family violates Assumption 1 eventually
    CHECK_THROWS_AS(bound_rhs(0, 0, tet2, field_by_name(3, "poly1"), 2.0, BoundVariant::RT62,
                              min_m * 0.5),
                    Assumption1Violated);
    CHECK_NOTHROW(bound_rhs(0, 0, tet2, field_by_name(3, "poly1"), 2.0, BoundVariant::RT62,
                            min_m * 2.0));
}

TEST_CASE("scaling lemmas: canonical case, zero case, random sweeps") {
    // Identity decomposition: RT41 collapses to the same norm, ratio <= 1.
    Simplex ref = reference_simplex(ReferenceId::Tri);
    ScalingRatio r = check_scaling_lemma(ref, field_by_name(2, "poly2"), 2.0, ScalingLemma::RT41);
    CHECK(r.ratio <= 1.0 + 1e-12);
    CHECK(r.ratio > 0.0);

    // Divergence-free field: RT12 is 0/0 across the board.
    ScalingRatio rz = check_scaling_lemma(ref, field_by_name(2, "trig"), 2.0, ScalingLemma::RT12);
    // trig is divergence-free; the ell=0 and ell=1 cases all vanish
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs == 0.0);
    CHECK(rz.ratio == 0.0);

    // Monte-Carlo sweep over thin triangles: finite sup ratio.
    Rng rng(43);
    double sup41 = 0.0, sup42 = 0.0, sup12 = 0.0;
    for (int it = 0; it < 100; ++it) {
        // squashed random triangles
        Simplex s = random_simplex(rng, 2);
        for (auto& v : s.v) v[1] *= 1e-2;
        if (s.measure() < 1e-14 * std::pow(s.diameter(), 2)) continue;
        VectorField f = field_by_name(2, "poly2");
        sup41 = std::max(sup41, check_scaling_lemma(s, f, 2.0, ScalingLemma::RT41).ratio);
        sup42 = std::max(sup42, check_scaling_lemma(s, f, 2.0, ScalingLemma::RT42).ratio);
        sup12 = std::max(sup12, check_scaling_lemma(s, f, 2.0, ScalingLemma::RT12).ratio);
    }
    CHECK(std::isfinite(sup41));
    CHECK(std::isfinite(sup42));
    CHECK(std::isfinite(sup12));
    MESSAGE("thin-triangle sup ratios: RT41 " << sup41 << ", RT42 " << sup42 << ", RT12 "
                                              << sup12);

    // Type-ii-only lemmas reject other elements.
    CHECK_THROWS_AS(
        check_scaling_lemma(generate_family(FamilySpec{"tet_type_i"}, 0).element_simplex(0),
                            field_by_name(3, "poly2"), 2.0, ScalingLemma::RT14),
        WrongElementType);
    Simplex tet2 = generate_family(FamilySpec{"tet_type_ii"}, 0).element_simplex(0);
    CHECK_NOTHROW(check_scaling_lemma(tet2, field_by_name(3, "poly2"), 2.0, ScalingLemma::RT14));
    CHECK_NOTHROW(check_scaling_lemma(tet2, field_by_name(3, "poly2"), 2.0, ScalingLemma::RT14b));
}

TEST_CASE("family studies: convergence, ratio stability, classical pessimism") {
    // Shape-regular convergence at k=0: observed order about 1 once the mesh
    // resolves the field (start at two refinements).
    FamilySpec reg;
    reg.family = "shape_regular";
    reg.base_scale = 0.25;
    reg.levels = 4;
    auto rows = run_family_study(reg, 0, field_by_name(2, "trig"), 2.0);
    REQUIRE(rows.size() == 4);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].order >= 0.9);

    // Needle family: RT62 ratio settles (level-independent constant). The
    // window starts at alpha1 = 1/4 where the ratio has reached its plateau.
    FamilySpec needle;
    needle.family = "needle_2d";
    needle.gamma = 2.0;
    needle.base_scale = 0.25;
    needle.levels = 5;
    auto nrows = run_family_study(needle, 0, field_by_name(2, "trig"), 2.0);
    double early = 0.0;
    for (size_t i = 0; i < 3; ++i) early = std::max(early, nrows[i].agg.ratio_62);
    for (size_t i = 3; i < nrows.size(); ++i) CHECK(nrows[i].agg.ratio_62 <= 1.1 * early);
    for (const auto& row : nrows) CHECK(row.max_angle < 0.6 * M_PI);

    // Stability ratios settle as well on both families.
    double s_early = 0.0;
    for (size_t i = 0; i < 3; ++i) s_early = std::max(s_early, nrows[i].agg.ratio_51);
    for (size_t i = 3; i < nrows.size(); ++i) CHECK(nrows[i].agg.ratio_51 <= 1.1 * s_early);

    // Graded cap (eps = h^3): H/h diverges, the anisotropic lhs stays below
    // the classical bound while the classical bound grows hopeless. The
    // quadratic field makes the pessimism visible (the error collapses while
    // the W^{1,p} bound does not).
    FamilySpec cap;
    cap.family = "cap_graded_2d";
    cap.gamma = 3.0;
    cap.levels = 5;
    auto crows = run_family_study(cap, 0, field_by_name(2, "counterexample"), 2.0);
    CHECK(crows.back().H_over_h > 10.0 * crows.front().H_over_h);
    for (const auto& row : crows) CHECK(row.agg.ratio_classical <= 1.0);
    CHECK(crows.back().agg.ratio_classical < 0.2 * crows.front().agg.ratio_classical);

    // Type-ii tetrahedra: stability 58 ratio settles.
    FamilySpec t2;
    t2.family = "tet_type_ii";
    t2.levels = 4;
    auto trows = run_family_study(t2, 0, field_by_name(3, "trig"), 2.0);
    double t_early = std::max(trows[0].agg.ratio_58, trows[1].agg.ratio_58);
    for (size_t i = 2; i < trows.size(); ++i) CHECK(trows[i].agg.ratio_58 <= 1.1 * t_early);

    // CSV has one line per level plus a header.
    std::string csv = study_csv(nrows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(nrows.size()) + 1);
}

TEST_CASE("pulled-back derivative norms equal rotated-axis derivative norms") {
    // For the rigid pullback w = Psi_T0^{-1} v, |d^eps_x w| at x equals
    // |d^eps along the rotated axes of v| at Phi_T0(x) pointwise, so the
    // H-script sums of the pullback route must match a direct route that
    // never leaves the physical element.
    Rng rng(47);
    for (int dim : {2, 3}) {
        VectorField f = field_by_name(dim, "poly2");
        for (int it = 0; it < 20; ++it) {
            Simplex s = random_simplex(rng, dim);
            CanonicalDecomposition dec = canonical_decompose(s);
            AffineMap rigid = rigid_map(dec);
            VectorField pulled = pullback_field(f, PiolaMap::from_affine(rigid));
            Simplex canon = dec.canonical_element();
            InstantiatedRule q_canon = instantiate(simplex_rule(dim, 8), canon);
            InstantiatedRule q_phys = instantiate(simplex_rule(dim, 8), s);

            std::array<VecD, 3> axes;
            for (int i = 0; i < dim; ++i) axes[static_cast<size_t>(i)] = VecD::unit(dim, i);
            std::array<VecD, 3> rotated_axes;
            for (int i = 0; i < dim; ++i)
                rotated_axes[static_cast<size_t>(i)] = dec.rotation.column(i);

            for (int order : {1, 2})
                for (const auto& eps : multi_indices(dim, order)) {
                    double via_pullback = lp_norm_vec(q_canon, 2.0, [&](const VecD& x) {
                        return directional_derivative(pulled, axes, eps, x);
                    });
                    double via_rotated = lp_norm_vec(q_phys, 2.0, [&](const VecD& x) {
                        return directional_derivative(f, rotated_axes, eps, x);
                    });
                    CHECK(via_pullback ==
                          doctest::Approx(via_rotated).epsilon(1e-12).scale(1.0 + via_rotated));
                }

            // Divergence route: |det A_T0| = 1 makes the norms equal too.
            double div_pullback =
                lp_norm_scalar(q_canon, 2.0, [&](const VecD& x) { return pulled.divergence(x); });
            double div_phys =
                lp_norm_scalar(q_phys, 2.0, [&](const VecD& x) { return f.divergence(x); });
            CHECK(div_pullback == doctest::Approx(div_phys).epsilon(1e-12));
        }
    }
}

TEST_CASE("bound breakdown is invariant under rigid motions") {
    // Rotating and translating the element (and pushing the field through
    // the same rigid Piola map) must leave every quantity unchanged.
    Rng rng(45);
    for (int it = 0; it < 10; ++it) {
        Simplex s = random_simplex(rng, 2);
        VectorField f = field_by_name(2, "poly2");
        BoundBreakdown base = bound_all(0, 0, s, f, 2.0);

        double th = rng.uniform(0.0, 2.0 * M_PI);
        MatD rot = MatD::zero(2);
        rot(0, 0) = std::cos(th);
        rot(0, 1) = -std::sin(th);
        rot(1, 0) = std::sin(th);
        rot(1, 1) = std::cos(th);
        AffineMap motion{rot, VecD(rng.uniform(), rng.uniform())};
        Simplex moved = s;
        for (auto& v : moved.v) v = motion.apply(v);
        VectorField fmoved = piola_transform_field(f, motion);
        BoundBreakdown rotated = bound_all(0, 0, moved, fmoved, 2.0);

        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a) + std::abs(b));
        };
        CHECK(close(base.lhs, rotated.lhs));
        CHECK(close(base.interp_norm, rotated.interp_norm));
        CHECK(close(base.rhs_61, rotated.rhs_61));
        CHECK(close(base.rhs_62, rotated.rhs_62));
        CHECK(close(base.rhs_51, rotated.rhs_51));
        CHECK(close(base.classical_rhs, rotated.classical_rhs));
    }
}

TEST_CASE("p = 1 norms work through the bound machinery") {
    Rng rng(46);
    for (int dim : {2, 3}) {
        Simplex s = random_simplex(rng, dim);
        BoundBreakdown b = bound_all(0, 0, s, field_by_name(dim, "poly2"), 1.0);
        CHECK(std::isfinite(b.lhs));
        CHECK(std::isfinite(b.rhs_61));
        CHECK(b.lhs >= 0.0);
        CHECK(b.rhs_61 > 0.0);
        ScalingRatio r =
            check_scaling_lemma(s, field_by_name(dim, "poly2"), 1.0, ScalingLemma::RT41);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
    }
}

TEST_CASE("axis-aligned elements: H-script weights never exceed the alpha weights") {
    // With the identity rotation the pulled-back field is the field itself,
    // so rhs_62 <= rhs_61 follows from H_i <= alpha_i.
    for (int level = 0; level < 4; ++level) {
        FamilySpec needle;
        needle.family = "needle_2d";
        Simplex s = generate_family(needle, level).element_simplex(0);
        for (const char* fname : {"trig", "aniso", "poly2"}) {
            BoundBreakdown b = bound_all(0, 0, s, field_by_name(2, fname), 2.0);
            CHECK(b.rhs_62 <= b.rhs_61 * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("zero error for RT members through the whole pipeline") {
    Rng rng(44);
    for (int d : {2, 3}) {
        Simplex s = random_simplex(rng, d);
        BoundBreakdown b = bound_all(0, 0, s, field_by_name(d, "poly0"), 2.0);
        CHECK(b.lhs < 1e-10);
    }
}

TEST_CASE("concurrent element evaluation matches the serial results") {
    Rng rng(48);
    std::vector<Simplex> elems;
    for (int i = 0; i < 40; ++i) elems.push_back(random_simplex(rng, 3));
    VectorField f = field_by_name(3, "poly2");

    std::vector<double> serial(elems.size());
    for (size_t i = 0; i < elems.size(); ++i)
        serial[i] = bound_all(0, 0, elems[i], f, 2.0).rhs_61;

    std::vector<double> parallel(elems.size());
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t]() {
            for (size_t i = static_cast<size_t>(t); i < elems.size(); i += 4)
                parallel[i] = bound_all(0, 0, elems[i], f, 2.0).rhs_61;
        });
    for (auto& th : pool) th.join();
    for (size_t i = 0; i < elems.size(); ++i) CHECK(serial[i] == parallel[i]);
}
