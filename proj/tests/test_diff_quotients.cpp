#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "hypick/hypick.hpp"

using namespace hypick;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<UnitPoint> upoints(std::initializer_list<complex> zs) {
    std::vector<UnitPoint> out;
    for (complex z : zs)
        out.emplace_back(z);
    return out;
}

std::vector<UnitPoint> image_of(const SelfMap& f, const std::vector<UnitPoint>& zs) {
    std::vector<UnitPoint> out;
    for (const auto& z : zs)
        out.emplace_back(f.value(z.value()));
    return out;
}

} // namespace

TEST_CASE("triangle of halved real data, frozen", "[triangle]") {
    const auto Z = upoints({{0.0, 0.0}, {0.3, 0.0}, {0.6, 0.0}});
    const auto W = upoints({{0.0, 0.0}, {0.15, 0.0}, {0.3, 0.0}});
    const DQTriangle t = triangle_from_data(Z, W);

    // level 0 is the target row
    CHECK(t.entry(0, 1).value() == complex(0.0, 0.0));
    CHECK(t.entry(0, 2).value() == complex(0.15, 0.0));
    CHECK(t.entry(0, 3).value() == complex(0.3, 0.0));
    // level 1: [w_j, w_1]/[z_j, z_1] = (w_j/z_j)(1)/(1) for real data through 0
    CHECK_THAT(std::abs(t.entry(1, 2).value() - complex(0.5, 0.0)),
               WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(t.entry(1, 3).value() - complex(0.5, 0.0)),
               WithinAbs(0.0, 1e-15));
    // level 2 vanishes: both operands equal
    CHECK_THAT(std::abs(t.entry(2, 3).value()), WithinAbs(0.0, 1e-15));
    CHECK_FALSE(t.degenerate_at().has_value());
    // lookups outside the triangular index domain are errors, while absent
    // entries inside it read back as empty
    CHECK_THROWS_AS(t.entry(0, 4), ShapeError);
    CHECK_THROWS_AS(t.entry(3, 3), ShapeError);
    CHECK_THROWS_AS(t.entry(0, 0), ShapeError);
}

TEST_CASE("automorphism data degenerates past the unimodular row", "[triangle]") {
    const MobiusAutomorphism f(UnitPoint(complex(0.3, -0.2)), 0.0);
    const auto Z = upoints({{0.1, 0.2}, {-0.3, 0.1}, {0.4, -0.25}, {-0.1, -0.35}});
    const DQTriangle t = triangle_from_data(Z, image_of(SelfMap(f), Z));

    // level-1 row: constant unimodular
    const complex d12 = t.entry(1, 2).value();
    for (std::size_t j = 2; j <= 4; ++j) {
        const complex e = t.entry(1, j).value();
        CHECK_THAT(std::abs(e), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::abs(e - d12), WithinAbs(0.0, 1e-12));
    }
    // first 0/0 appears at (2, 3); nothing is defined from there on
    REQUIRE(t.degenerate_at().has_value());
    CHECK(t.degenerate_at()->level == 2);
    CHECK(t.degenerate_at()->row == 3);
    CHECK_FALSE(t.entry(2, 3).has_value());
    CHECK_FALSE(t.entry(2, 4).has_value());
    CHECK_FALSE(t.entry(3, 4).has_value());
}

TEST_CASE("triangle input validation", "[triangle]") {
    const auto Z = upoints({{0.1, 0.0}, {0.2, 0.0}});
    const auto W1 = upoints({{0.0, 0.0}});
    CHECK_THROWS_AS(triangle_from_data(Z, W1), ShapeError);
    CHECK_THROWS_AS(triangle_from_data(std::vector<UnitPoint>{},
                                       std::vector<UnitPoint>{}),
                    ShapeError);
    const auto Zdup = upoints({{0.1, 0.0}, {0.1, 0.0}});
    const auto W2 = upoints({{0.0, 0.0}, {0.0, 0.0}});
    CHECK_THROWS_AS(triangle_from_data(Zdup, W2), DistinctnessError);
}

TEST_CASE("quotient map limit matches the hyperbolic derivative", "[triangle]") {
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        const SelfMap f(random_blaschke(rng, 2 + rng.index(3), 0.7));
        const UnitPoint node = random_point(rng, 0.8);
        const std::vector<UnitPoint> pres{node};
        // at the node itself the quotient takes its limit value
        const complex at_node = dq_of_map(f, pres, node.value());
        CHECK_THAT(std::abs(at_node),
                   WithinAbs(std::abs(hyperbolic_derivative(f, node.value())), 1e-10));
        // continuity across the direct/limit switch at beta ~ 1e-6
        const complex just_off = node.value() + complex(3e-7, 0.0);
        const complex further = node.value() + complex(3e-4, 0.0);
        CHECK_THAT(std::abs(dq_of_map(f, pres, just_off) - at_node),
                   WithinAbs(0.0, 1e-4));
        CHECK_THAT(std::abs(dq_of_map(f, pres, further) - at_node),
                   WithinAbs(0.0, 1e-2));
    }
}

TEST_CASE("quotient maps contract the metric", "[triangle]") {
    // multi-point Schwarz-Pick: each level of quotients is again a self map
    Rng rng(22);
    for (int t = 0; t < 12; ++t) {
        const std::size_t k = 1 + rng.index(3);
        const SelfMap f(random_blaschke(rng, k + 2, 0.7));
        const auto pres = random_distinct_points(rng, k, 0.7, 0.1);
        const complex v = random_point(rng, 0.9).value();
        const complex w = random_point(rng, 0.9).value();
        const complex dv = dq_of_map(f, pres, v);
        const complex dw = dq_of_map(f, pres, w);
        CHECK(beta(dv, dw) <= beta(v, w) + 1e-8);
    }
}

TEST_CASE("phase-modulus conformal invariance", "[triangle]") {
    // |Δ^j(σ∘f∘τ)(z; p)| = |Δ^j f(τ z; τ p)|
    Rng rng(23);
    for (int t = 0; t < 8; ++t) {
        const MobiusAutomorphism sig = random_automorphism(rng, 0.6);
        const MobiusAutomorphism tau = random_automorphism(rng, 0.6);
        const SelfMap f(random_blaschke(rng, 3, 0.65));
        const SelfMap conj_f =
            composed(SelfMap(sig), composed(f, SelfMap(tau)));
        const auto pres = random_distinct_points(rng, 2, 0.6, 0.15);
        std::vector<UnitPoint> mapped;
        for (const auto& p : pres)
            mapped.push_back(tau.apply(p));
        const UnitPoint z = random_point(rng, 0.85);
        const double lhs = std::abs(dq_of_map(conj_f, pres, z.value()));
        const double rhs = std::abs(dq_of_map(f, mapped, tau.value(z.value())));
        CHECK_THAT(lhs, WithinAbs(rhs, 1e-10));
    }
}

TEST_CASE("triangle agrees with the function path", "[triangle]") {
    Rng rng(24);
    for (int t = 0; t < 10; ++t) {
        const SelfMap f(random_blaschke(rng, 1 + rng.index(4), 0.7));
        const auto Z = random_distinct_points(rng, 2 + rng.index(4), 0.75, 0.1);
        CHECK(consistency_check(f, Z, image_of(f, Z)) <= 1e-8);
    }
    // constant zero and identity-on-two-points cases
    const SelfMap zero(ConstantMap(complex(0.0, 0.0)));
    const auto Z = upoints({{0.2, 0.1}, {-0.4, 0.3}, {0.1, -0.5}});
    std::vector<UnitPoint> W0(Z.size(), UnitPoint(complex(0.0, 0.0)));
    CHECK(consistency_check(zero, Z, W0) == 0.0);
    const auto Z2 = upoints({{0.25, 0.0}, {-0.3, 0.2}});
    CHECK(consistency_check(identity_map(), Z2, Z2) <= 1e-14);
}

TEST_CASE("consistency check rejects mismatched data", "[triangle]") {
    const SelfMap half(ScalarMap(complex(0.5, 0.0)));
    const SelfMap wrong(ScalarMap(complex(0.6, 0.0)));
    const auto Z = upoints({{0.2, 0.0}, {0.5, 0.0}});
    CHECK_THROWS_AS(consistency_check(wrong, Z, image_of(half, Z)), DomainError);
}

TEST_CASE("compatibility of all-zero targets", "[triangle]") {
    Rng rng(25);
    const auto Z = random_distinct_points(rng, 6, 0.8, 0.1);
    std::vector<UnitPoint> W(Z.size(), UnitPoint(complex(0.0, 0.0)));
    const auto rep = check_compatibility(Z, W, 0.05, 2, CompatibilityOptions{});
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == 0.0);
    CHECK(rep.shortcut_pass);
    CHECK(rep.degenerate_cases == 0);
}

TEST_CASE("compatibility of the single-target construction", "[triangle]") {
    // points in a small hyperbolic disc, all targets 0 except the last:
    // w_last = eps * C * prod of [z_last, z_j] over the interior nodes
    Rng rng(26);
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
        const std::size_t n = 4 + rng.index(3); // total points n, order n-1
        std::vector<UnitPoint> Z;
        while (true) {
            try {
                Z = random_distinct_points(rng, n, 0.15, 0.02);
                break;
            } catch (const DistinctnessError&) {
            }
        }
        const double eps = 0.1, C = 0.5;
        complex x(C, 0.0);
        for (std::size_t j = 0; j + 1 < n; ++j)
            x *= cp_distance(Z[n - 1].value(), Z[j].value());
        std::vector<UnitPoint> W(n, UnitPoint(complex(0.0, 0.0)));
        W[n - 1] = UnitPoint(eps * x);
        CompatibilityOptions opts;
        opts.all_permutations = true;
        const auto rep = check_compatibility(Z, W, eps, n - 1, opts);
        INFO("n=" << n << " worst=" << rep.worst_ratio);
        CHECK(rep.pass);
    }
}

TEST_CASE("compatibility fails on automorphism data", "[triangle]") {
    const MobiusAutomorphism f(UnitPoint(complex(0.25, 0.15)), 0.7);
    const auto Z = upoints({{0.1, 0.2}, {-0.3, 0.1}, {0.4, -0.25}, {-0.1, -0.35}});
    const auto W = image_of(SelfMap(f), Z);
    CompatibilityOptions opts;
    opts.all_permutations = true;
    const auto rep = check_compatibility(Z, W, 0.9, 2, opts);
    CHECK_FALSE(rep.pass);
    CHECK(std::isinf(rep.worst_ratio));
    CHECK(rep.degenerate_cases > 0);
    CHECK_FALSE(rep.shortcut_pass);
}

TEST_CASE("compatibility order hierarchy", "[triangle]") {
    Rng rng(27);
    const SelfMap f(random_blaschke(rng, 5, 0.7));
    const auto Z = random_distinct_points(rng, 6, 0.6, 0.2);
    const auto W = image_of(f, Z);
    CompatibilityOptions opts;
    opts.all_permutations = true;
    const auto rep3 = check_compatibility(Z, W, 1.0, 3, opts);
    REQUIRE(std::isfinite(rep3.worst_ratio));
    const double eps = rep3.worst_ratio * (1.0 + 1e-12) + 1e-15;
    for (std::size_t order : {1u, 2u, 3u}) {
        const auto rep = check_compatibility(Z, W, eps, order, opts);
        INFO("order=" << order);
        CHECK(rep.pass);
    }
}

TEST_CASE("compatibility tuple sampling kicks in over budget", "[triangle]") {
    Rng rng(28);
    const auto Z = random_distinct_points(rng, 12, 0.7, 0.05);
    std::vector<UnitPoint> W(Z.size(), UnitPoint(complex(0.0, 0.0)));
    CompatibilityOptions opts;
    opts.tuple_budget = 100; // C(12,3) = 220 exceeds it
    const auto rep = check_compatibility(Z, W, 0.1, 2, opts);
    CHECK(rep.tuples_sampled);
    CHECK(rep.tuples_checked == 100);
    // identical options reproduce the sampled result
    const auto rep2 = check_compatibility(Z, W, 0.1, 2, opts);
    CHECK(rep.worst_ratio == rep2.worst_ratio);
    CHECK(rep.permutations_checked == rep2.permutations_checked);
}

TEST_CASE("compatibility rejects oversized exhaustive permutations", "[triangle]") {
    Rng rng(29);
    const auto Z = random_distinct_points(rng, 10, 0.7, 0.05);
    std::vector<UnitPoint> W(Z.size(), UnitPoint(complex(0.0, 0.0)));
    CompatibilityOptions opts;
    opts.all_permutations = true; // tuple size 10 > 8
    CHECK_THROWS_AS(check_compatibility(Z, W, 0.1, 9, opts), DomainError);
}

TEST_CASE("closed-form last row matches the triangle", "[triangle]") {
    Rng rng(30);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 3 + rng.index(4);
        std::vector<UnitPoint> Z;
        while (true) {
            try {
                Z = random_distinct_points(rng, n, 0.2, 0.02);
                break;
            } catch (const DistinctnessError&) {
            }
        }
        complex x(0.5, 0.0);
        for (std::size_t j = 0; j + 1 < n; ++j)
            x *= cp_distance(Z[n - 1].value(), Z[j].value());
        const complex eps_x = 0.1 * x;

        const auto closed = last_row_closed_form(Z, eps_x);
        std::vector<UnitPoint> W(n, UnitPoint(complex(0.0, 0.0)));
        W[n - 1] = UnitPoint(eps_x);
        const DQTriangle tri = triangle_from_data(Z, W);
        REQUIRE(closed.size() == n - 1);
        for (std::size_t k = 1; k < n; ++k) {
            const complex got = tri.entry(k, n).value();
            CHECK_THAT(std::abs(got - closed[k - 1]), WithinAbs(0.0, 1e-12));
        }
    }
}
