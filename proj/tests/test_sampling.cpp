#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hypick/hypick.hpp"

using namespace hypick;
using Catch::Matchers::WithinAbs;

TEST_CASE("deterministic disc grid", "[sampling]") {
    const auto g = disc_grid(256);
    CHECK(g.size() == 256);
    for (const auto& z : g)
        CHECK(z.abs() < 1.0);
    const auto g2 = disc_grid(256);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i].value() == g2[i].value());
    CHECK_THROWS_AS(disc_grid(0), DomainError);
    CHECK_THROWS_AS(disc_grid(16, 1.0), DomainError);
}

TEST_CASE("hyperbolic norm of reference maps", "[sampling]") {
    // scaling by lambda peaks at the origin with value lambda
    const SelfMap half(ScalarMap(complex(0.5, 0.0)));
    CHECK(hyperbolic_norm(half, 48) == 0.5);

    // automorphisms are isometries
    const SelfMap aut(MobiusAutomorphism(UnitPoint(complex(0.4, -0.3)), 1.1));
    CHECK_THAT(hyperbolic_norm(aut, 48), WithinAbs(1.0, 1e-9));
    CHECK(hyperbolic_norm(aut, 48) <= 1.0 + 1e-10);

    // constants have zero derivative
    const SelfMap c(ConstantMap(complex(0.3, 0.2)));
    CHECK(hyperbolic_norm(c, 32) == 0.0);
    // a unimodular constant is degenerate at every grid point and skipped
    const SelfMap uni(ConstantMap(complex(1.0, 0.0)));
    CHECK(hyperbolic_norm(uni, 32) == 0.0);
}

TEST_CASE("blaschke products attain unit norm", "[sampling]") {
    Rng rng(71);
    for (int t = 0; t < 6; ++t) {
        const SelfMap f(random_blaschke(rng, 1 + rng.index(4), 0.7));
        const double n = hyperbolic_norm(f, 96);
        CHECK(n <= 1.0 + 1e-10);
        CHECK(n >= 0.98);
    }
}

TEST_CASE("sampling ratio of a frozen configuration", "[sampling]") {
    // two nodes, f = z/2: ratio = beta(0, 0.25) / beta(0, 0.5)
    const std::vector<UnitPoint> pts{UnitPoint(complex(0.0, 0.0)),
                                     UnitPoint(complex(0.5, 0.0))};
    const SelfMap half(ScalarMap(complex(0.5, 0.0)));
    const SamplingRatio r = sampling_ratio(pts, half);
    const double want = (2.0 * std::atanh(0.25)) / (2.0 * std::atanh(0.5));
    CHECK_THAT(r.ratio, WithinAbs(want, 1e-12));
    CHECK(r.i == 0);
    CHECK(r.j == 1);

    CHECK_THROWS_AS(
        sampling_ratio(std::vector<UnitPoint>{UnitPoint(complex(0.0, 0.0))}, half),
        DomainError);
}

TEST_CASE("sampling estimate is deterministic and self-consistent", "[sampling]") {
    Rng rng(72);
    const auto Z = random_distinct_points(rng, 5, 0.8, 0.2);
    for (SamplingFamily fam : {SamplingFamily::scaled, SamplingFamily::blaschke,
                               SamplingFamily::conjugated_scaled,
                               SamplingFamily::conjugated_blaschke}) {
        const auto a = estimate_sampling_constant(Z, fam, 6, 32, 5);
        const auto b = estimate_sampling_constant(Z, fam, 6, 32, 5);
        INFO(to_string(fam));
        CHECK(a.delta_upper_bound_witness == b.delta_upper_bound_witness);
        CHECK(a.trials_used + a.skipped == 6);
        REQUIRE(a.trials.size() == a.trials_used);
        double min_q = std::numeric_limits<double>::infinity();
        for (const auto& t : a.trials) {
            CHECK_THAT(t.quotient, WithinAbs(t.ratio / t.norm, 1e-15));
            min_q = std::min(min_q, t.quotient);
        }
        CHECK(a.delta_upper_bound_witness == min_q);
        CHECK_FALSE(a.worst_function.empty());
    }
    CHECK_THROWS_AS(estimate_sampling_constant(Z, SamplingFamily::scaled, 0, 32, 5),
                    DomainError);
}

TEST_CASE("scaled family sweeps deterministic radii", "[sampling]") {
    const std::vector<UnitPoint> Z{UnitPoint(complex(0.0, 0.0)),
                                   UnitPoint(complex(0.4, 0.0))};
    const auto est = estimate_sampling_constant(Z, SamplingFamily::scaled, 3, 32, 1);
    REQUIRE(est.trials_used == 3);
    // trial t uses f(z) = r z with r = (t+1)/(trials+1)
    for (std::size_t t = 0; t < 3; ++t) {
        const double r = static_cast<double>(t + 1) / 4.0;
        const double want =
            beta(complex(0.0, 0.0), complex(0.4 * r, 0.0)) /
            beta(complex(0.0, 0.0), complex(0.4, 0.0));
        CHECK_THAT(est.trials[t].ratio, WithinAbs(want, 1e-12));
        CHECK_THAT(est.trials[t].norm, WithinAbs(r, 1e-12));
    }
}

TEST_CASE("annulus weight normalization and oracle", "[sampling]") {
    // theta = 2 collapses to the full annulus: omega = 1 with equal logs
    for (double R : {0.5, 1.0, 2.0}) {
        const AnnulusWeight w = annulus_harmonic_weight(2.0, R);
        CHECK(w.omega == 1.0);
        CHECK(w.log_num == w.log_den);
    }
    // classical radially symmetric Dirichlet solution on the conformal
    // image: omega = log(r_mid / r_out) / log(r_in / r_out)
    for (double theta : {0.3, 0.7, 1.0, 1.3, 1.9}) {
        for (double R : {0.4, 0.7, 1.1, 2.3}) {
            const double r_in = std::tanh(0.5 * theta * R);
            const double r_mid = std::tanh(R);
            const double r_out = std::tanh(2.0 * R);
            const double oracle =
                std::log(r_mid / r_out) / std::log(r_in / r_out);
            const AnnulusWeight w = annulus_harmonic_weight(theta, R);
            CHECK_THAT(w.omega, WithinAbs(oracle, 1e-10));
        }
    }
    // strict monotonicity in theta
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double theta = 2.0 * k / 100.0;
        const double om = annulus_harmonic_weight(theta, 0.8).omega;
        CHECK(om > prev);
        prev = om;
    }
    CHECK(prev == 1.0);

    CHECK_THROWS_AS(annulus_harmonic_weight(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(annulus_harmonic_weight(2.1, 1.0), DomainError);
    CHECK_THROWS_AS(annulus_harmonic_weight(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(annulus_harmonic_weight(1.0, -2.0), DomainError);
}
