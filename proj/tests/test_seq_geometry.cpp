#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hypick/hypick.hpp"

using namespace hypick;
using Catch::Matchers::WithinAbs;

namespace {

// points clamped into the disc at a common small scale so Euclidean layout
// controls the hyperbolic conflict graph
std::vector<UnitPoint> scaled_layout(std::initializer_list<complex> zs, double scale) {
    std::vector<UnitPoint> out;
    for (complex z : zs)
        out.emplace_back(scale * z);
    return out;
}

detail::AdjMatrix cycle_graph(std::size_t n) {
    detail::AdjMatrix adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        adj[i][(i + 1) % n] = true;
        adj[(i + 1) % n][i] = true;
    }
    return adj;
}

std::size_t chromatic(const detail::AdjMatrix& adj) {
    return detail::ChromaticSolver(adj).best_count;
}

} // namespace

TEST_CASE("separation constant on frozen pairs", "[geometry]") {
    const std::vector<UnitPoint> pts{UnitPoint(complex(0.0, 0.0)),
                                     UnitPoint(complex(0.5, 0.0)),
                                     UnitPoint(complex(-0.9, 0.0))};
    const SeparationResult s = separation_constant(pts);
    CHECK_THAT(s.constant, WithinAbs(std::log(3.0), 1e-12));
    CHECK(s.i == 0);
    CHECK(s.j == 1);

    const std::vector<UnitPoint> dup{UnitPoint(complex(0.2, 0.1)),
                                     UnitPoint(complex(0.2, 0.1))};
    const SeparationResult z = separation_constant(dup);
    CHECK(z.constant == 0.0);
}

TEST_CASE("exact chromatic numbers of reference graphs", "[geometry]") {
    CHECK(chromatic(cycle_graph(4)) == 2);
    CHECK(chromatic(cycle_graph(5)) == 3);
    CHECK(chromatic(cycle_graph(7)) == 3);

    // complete graph K5
    detail::AdjMatrix k5(5, std::vector<bool>(5, true));
    for (std::size_t i = 0; i < 5; ++i)
        k5[i][i] = false;
    CHECK(chromatic(k5) == 5);
    CHECK(detail::exact_max_clique(k5).size() == 5);

    // Petersen graph: outer 5-cycle, inner pentagram, spokes
    detail::AdjMatrix pet(10, std::vector<bool>(10, false));
    auto link = [&](std::size_t a, std::size_t b) {
        pet[a][b] = pet[b][a] = true;
    };
    for (std::size_t i = 0; i < 5; ++i) {
        link(i, (i + 1) % 5);
        link(5 + i, 5 + (i + 2) % 5);
        link(i, 5 + i);
    }
    CHECK(chromatic(pet) == 3);
    CHECK(detail::exact_max_clique(pet).size() == 2);

    // greedy is a valid coloring on each
    for (const auto& g : {cycle_graph(5), k5, pet}) {
        const auto color = detail::greedy_coloring(g);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                if (g[i][j])
                    CHECK(color[i] != color[j]);
    }
}

TEST_CASE("cluster decomposition splits pairs apart", "[geometry]") {
    // three well-separated clusters of two nearby points each: the
    // conflict graph is three disjoint edges, so two parts suffice
    const auto pts = scaled_layout({{0.0, 0.0}, {0.05, 0.0},
                                    {4.0, 0.0}, {4.05, 0.0},
                                    {0.0, 4.0}, {0.05, 4.0}},
                                   0.2);
    const double eta = 0.1; // intra-cluster beta ~ 0.02, inter >> 1
    const Decomposition d = decompose_separated(pts, eta, 2);
    CHECK(d.feasible);
    CHECK(d.exact);
    CHECK(d.minimal_parts == 2);
    CHECK(d.parts_used == 2);
    // each part is internally separated
    for (const auto& part : d.parts)
        for (std::size_t a = 0; a < part.size(); ++a)
            for (std::size_t b = a + 1; b < part.size(); ++b)
                CHECK(beta(pts[part[a]], pts[part[b]]) >= eta);
}

TEST_CASE("tight cliques defeat small part budgets", "[geometry]") {
    // four points pairwise close: a 4-clique needs four parts
    const auto pts = scaled_layout({{0.0, 0.0}, {0.01, 0.0},
                                    {0.0, 0.01}, {0.01, 0.01}},
                                   0.3);
    const Decomposition d = decompose_separated(pts, 1.0, 3);
    CHECK_FALSE(d.feasible);
    CHECK(d.minimal_parts == 4);
    CHECK(d.clique_witness.size() == 4);
    CHECK(decompose_separated(pts, 1.0, 4).feasible);
}

TEST_CASE("pentagon layout needs three parts", "[geometry]") {
    // regular pentagon: adjacent vertices conflict, diagonals do not,
    // giving a geometric 5-cycle with chromatic number 3
    std::vector<UnitPoint> pts;
    for (int k = 0; k < 5; ++k)
        pts.push_back(polar_point(0.1, 2.0 * std::numbers::pi * k / 5.0));
    const double side = beta(pts[0], pts[1]);
    const double diag = beta(pts[0], pts[2]);
    REQUIRE(side < diag);
    const double eta = 0.5 * (side + diag);
    const Decomposition d2 = decompose_separated(pts, eta, 2);
    CHECK_FALSE(d2.feasible);
    CHECK(d2.exact);
    CHECK(d2.minimal_parts == 3);
    CHECK(decompose_separated(pts, eta, 3).feasible);
}

TEST_CASE("decomposition validates its inputs", "[geometry]") {
    const std::vector<UnitPoint> pts{UnitPoint(complex(0.1, 0.0))};
    CHECK_THROWS_AS(decompose_separated(pts, 0.0, 2), DomainError);
    CHECK_THROWS_AS(decompose_separated(pts, -1.0, 2), DomainError);
    CHECK_THROWS_AS(decompose_separated(pts, 1.0, 0), DomainError);
}

TEST_CASE("carleson squares and the dyadic family", "[geometry]") {
    CHECK_THROWS_AS(CarlesonSquare(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(CarlesonSquare(0.0, 1.5), DomainError);

    const CarlesonSquare q(0.0, 0.25);
    CHECK(q.contains(UnitPoint(std::polar(0.9, 0.1))));
    CHECK_FALSE(q.contains(UnitPoint(std::polar(0.5, 0.1))));   // too deep
    CHECK_FALSE(q.contains(UnitPoint(std::polar(0.9, 0.3))));   // outside the arc
    // angular wrap-around
    const CarlesonSquare w(0.05, 0.25);
    CHECK(w.contains(UnitPoint(std::polar(0.9, 2.0 * std::numbers::pi - 0.05))));

    const auto fam = dyadic_squares(3);
    std::size_t expected = 0;
    for (int l = 0; l <= 3; ++l)
        expected += static_cast<std::size_t>(
            std::ceil(2.0 * std::numbers::pi * std::ldexp(1.0, l)));
    CHECK(fam.size() == expected);
    for (const auto& sq : fam) {
        CHECK(sq.side() > 0.0);
        CHECK(sq.side() <= 1.0);
    }
}

TEST_CASE("dyadic slice index boundaries", "[geometry]") {
    CHECK(detail::slice_index(1.0, 1.0) == 0);
    CHECK(detail::slice_index(1.0, 0.75) == 0);
    CHECK(detail::slice_index(1.0, 0.5) == 1);    // upper-inclusive
    CHECK(detail::slice_index(1.0, 0.500001) == 0);
    CHECK(detail::slice_index(1.0, 0.25) == 2);
    CHECK(detail::slice_index(1.0, std::ldexp(1.0, -10)) == 10);
    CHECK(detail::slice_index(0.5, 0.25) == 1);   // scaled by the side
    CHECK(detail::slice_index(0.25, 0.2) == 0);
}

TEST_CASE("density budget counts slice occupancy", "[geometry]") {
    // two points in the top slice of the unit square at theta 0
    const std::vector<UnitPoint> pts{UnitPoint(std::polar(0.4, 0.1)),
                                     UnitPoint(std::polar(0.45, -0.1)),
                                     UnitPoint(std::polar(0.9, 0.05))};
    const std::vector<CarlesonSquare> squares{CarlesonSquare(0.0, 1.0)};
    const DensityResult ok = density_condition(pts, squares, 2.0, 0.5);
    CHECK(ok.pass);
    REQUIRE_FALSE(ok.occupied.empty());
    std::size_t total = 0;
    for (const auto& s : ok.occupied) {
        total += s.count;
        CHECK_THAT(s.allowed, WithinAbs(2.0 * std::exp2(0.5 * s.slice), 1e-12));
    }
    CHECK(total == 3);

    // shrink the budget below the occupancy of the fullest slice
    const DensityResult tight = density_condition(pts, squares, 0.5, 0.1);
    CHECK_FALSE(tight.pass);
    REQUIRE(tight.worst.has_value());
    CHECK(tight.worst->count >= 1);

    CHECK_THROWS_AS(density_condition(pts, squares, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(density_condition(pts, squares, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(density_condition(pts, squares, 2.0, 1.0), DomainError);
}

TEST_CASE("density fit finds a feasible exponent", "[geometry]") {
    const std::vector<UnitPoint> one{UnitPoint(complex(0.5, 0.0))};
    const auto squares = dyadic_squares(4);
    const auto fit = density_fit(one, squares, 2.0);
    REQUIRE(fit.has_value());
    CHECK(*fit >= 0.0);
    CHECK(*fit < 1.0);
    // the fitted alpha satisfies the budget it came from
    CHECK(density_condition(one, squares, 2.0, std::max(*fit, 1e-6)).pass);

    // more depth-zero points than the budget allows: no alpha can help
    std::vector<UnitPoint> many;
    for (int k = 0; k < 6; ++k)
        many.push_back(polar_point(0.3, 0.05 * k));
    const std::vector<CarlesonSquare> unit{CarlesonSquare(0.0, 1.0)};
    CHECK_FALSE(density_fit(many, unit, 2.0).has_value());
}

TEST_CASE("r-density over a covering grid", "[geometry]") {
    const std::vector<UnitPoint> origin{UnitPoint(complex(0.0, 0.0))};
    const double region = 0.9; // hyperbolic radius beta(0, 0.9) ~ 2.944
    const double reach = beta(complex(0.0, 0.0), complex(0.9, 0.0));

    const RDensityResult pass = r_dense_check(origin, reach + 0.3, region, 0.25);
    CHECK(pass.pass);
    CHECK(pass.grid_size > 0);
    CHECK(pass.worst_gap <= reach + 0.3);

    const RDensityResult fail = r_dense_check(origin, 1.0, region, 0.25);
    CHECK_FALSE(fail.pass);
    CHECK(fail.worst_gap > 1.0);
    CHECK(fail.worst_gap <= reach + 0.25);

    CHECK_THROWS_AS(r_dense_check(origin, 0.0, region, 0.25), DomainError);
    CHECK_THROWS_AS(r_dense_check(origin, 1.0, 1.0, 0.25), DomainError);
    CHECK_THROWS_AS(r_dense_check(origin, 1.0, region, 0.0), DomainError);
}

TEST_CASE("order classification combines both gates", "[geometry]") {
    Rng rng(61);
    const auto Z = random_distinct_points(rng, 6, 0.6, 0.3);
    const auto squares = dyadic_squares(6);

    const OrderVerdict good = classify_order(Z, 6, 0.05, squares, 8.0, 0.5);
    CHECK(good.pass);

    // impossible part budget: a 6-point set with eta above the diameter
    const OrderVerdict bad = classify_order(Z, 1, 50.0, squares, 8.0, 0.5);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.decomposition.feasible);

    const GeometryReport rep = geometry_report(Z, 6, 0.05, squares, 8.0, 0.5);
    CHECK(rep.order.pass == (rep.decomposition.feasible && rep.density.pass));
    CHECK(rep.separation.constant > 0.0);
}
