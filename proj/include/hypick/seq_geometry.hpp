#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "hypick/errors.hpp"
#include "hypick/tolerances.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

struct SeparationResult {
    double constant = 0.0;
    std::size_t i = 0, j = 0; // realizing pair
};

// Smallest pairwise hyperbolic distance; coincident points short-circuit
// to exactly 0 with the offending pair.
inline SeparationResult separation_constant(std::span<const UnitPoint> points) {
    if (points.size() < 2)
        throw DomainError("separation needs at least two points");
    SeparationResult best;
    best.constant = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (coincident(points[i], points[j]))
                return SeparationResult{0.0, i, j};
            const double d = beta(points[i], points[j]);
            if (d < best.constant)
                best = SeparationResult{d, i, j};
        }
    }
    return best;
}

namespace detail {

using AdjMatrix = std::vector<std::vector<bool>>;

inline std::vector<std::size_t> degree_order(const AdjMatrix& adj) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> deg(n, 0), order(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j])
                ++deg[i];
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    return order;
}

// Largest-degree-first greedy, smallest feasible color, ties by index.
inline std::vector<std::size_t> greedy_coloring(const AdjMatrix& adj) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> color(n, n);
    for (std::size_t v : degree_order(adj)) {
        std::vector<bool> used(n, false);
        for (std::size_t u = 0; u < n; ++u)
            if (adj[v][u] && color[u] < n)
                used[color[u]] = true;
        std::size_t c = 0;
        while (used[c])
            ++c;
        color[v] = c;
    }
    return color;
}

// Exact maximum clique, branch and bound over bitmasks (n <= 20).
inline void max_clique_rec(const std::vector<std::uint32_t>& nbr, std::uint32_t current,
                           std::uint32_t cand, std::uint32_t& best) {
    if (std::popcount(current) + std::popcount(cand) <= std::popcount(best))
        return;
    if (cand == 0) {
        if (std::popcount(current) > std::popcount(best))
            best = current;
        return;
    }
    const int v = std::countr_zero(cand);
    const std::uint32_t bit = std::uint32_t{1} << v;
    max_clique_rec(nbr, current | bit, cand & nbr[static_cast<std::size_t>(v)] & ~bit, best);
    max_clique_rec(nbr, current, cand & ~bit, best);
}

inline std::vector<std::size_t> exact_max_clique(const AdjMatrix& adj) {
    const std::size_t n = adj.size();
    std::vector<std::uint32_t> nbr(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j])
                nbr[i] |= std::uint32_t{1} << j;
    std::uint32_t best = 0;
    max_clique_rec(nbr, 0, n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1, best);
    std::vector<std::size_t> clique;
    for (std::size_t i = 0; i < n; ++i)
        if (best & (std::uint32_t{1} << i))
            clique.push_back(i);
    return clique;
}

// Greedy clique for large instances: grow from the highest-degree vertex.
inline std::vector<std::size_t> greedy_clique(const AdjMatrix& adj) {
    std::vector<std::size_t> clique;
    for (std::size_t v : degree_order(adj)) {
        bool ok = true;
        for (std::size_t u : clique)
            if (!adj[v][u]) {
                ok = false;
                break;
            }
        if (ok)
            clique.push_back(v);
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

// Exact chromatic number by branch and bound, seeded with the greedy upper
// bound and the exact clique lower bound.  Colors are canonicalized (a
// vertex may open at most one new color) to kill permutation symmetry.
struct ChromaticSolver {
    const AdjMatrix& adj;
    std::vector<std::size_t> order;
    std::vector<std::size_t> color, best_color;
    std::size_t best_count;
    std::size_t lower;

    explicit ChromaticSolver(const AdjMatrix& a) : adj(a), order(degree_order(a)) {
        const std::size_t n = adj.size();
        best_color = greedy_coloring(adj);
        best_count = best_color.empty()
                         ? 0
                         : *std::max_element(best_color.begin(), best_color.end()) + 1;
        lower = exact_max_clique(adj).size();
        color.assign(n, n);
        if (best_count > lower)
            descend(0, 0);
    }

    void descend(std::size_t pos, std::size_t used) {
        if (used >= best_count)
            return;
        if (pos == order.size()) {
            best_count = used;
            best_color = color;
            return;
        }
        const std::size_t v = order[pos];
        const std::size_t limit = std::min(used + 1, best_count - 1);
        for (std::size_t c = 0; c < limit; ++c) {
            bool ok = true;
            for (std::size_t u = 0; u < adj.size(); ++u)
                if (adj[v][u] && color[u] == c) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            color[v] = c;
            descend(pos + 1, std::max(used, c + 1));
            color[v] = adj.size();
            if (best_count == lower)
                return; // provably optimal already
        }
    }
};

} // namespace detail

struct Decomposition {
    bool feasible = false;
    std::size_t parts_used = 0;
    std::vector<std::vector<std::size_t>> parts;
    bool exact = false;            // parts_used is the true minimum
    std::size_t minimal_parts = 0; // chromatic number (exact) or greedy count
    std::vector<std::size_t> clique_witness; // populated when infeasible
};

// Splits Z into at most max_parts sequences with pairwise separation >= eta
// inside each part.  Conflict edges are beta < eta; up to 20 points the
// part count is the exact chromatic number (branch and bound), above that
// a greedy bound.  Infeasibility comes with a clique witness.
inline Decomposition decompose_separated(std::span<const UnitPoint> points, double eta,
                                         std::size_t max_parts) {
    if (!(eta > 0.0))
        throw DomainError("separation threshold eta must be positive");
    if (max_parts < 1)
        throw DomainError("max_parts must be at least 1");
    const std::size_t n = points.size();
    Decomposition d;
    if (n == 0) {
        d.feasible = true;
        d.exact = true;
        return d;
    }
    detail::AdjMatrix adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coincident(points[i], points[j]) || beta(points[i], points[j]) < eta)
                adj[i][j] = adj[j][i] = true;

    d.exact = n <= 20;
    std::vector<std::size_t> color;
    if (d.exact) {
        detail::ChromaticSolver solver(adj);
        color = solver.best_color;
        d.minimal_parts = solver.best_count;
    } else {
        color = detail::greedy_coloring(adj);
        d.minimal_parts = *std::max_element(color.begin(), color.end()) + 1;
    }

    if (d.minimal_parts <= max_parts) {
        d.feasible = true;
        d.parts_used = d.minimal_parts;
        d.parts.assign(d.parts_used, {});
        for (std::size_t i = 0; i < n; ++i)
            d.parts[color[i]].push_back(i);
    } else {
        d.clique_witness =
            d.exact ? detail::exact_max_clique(adj) : detail::greedy_clique(adj);
    }
    return d;
}

// Carleson square of side length in (0, 1]: radially 0 < 1-|z| < side,
// angularly |arg z - theta0| < side (mod 2 pi).
class CarlesonSquare {
public:
    CarlesonSquare(double theta0, double side) : theta0_(theta0), side_(side) {
        if (!(side > 0.0) || side > 1.0)
            throw DomainError("Carleson square side must lie in (0, 1]");
    }

    double theta0() const { return theta0_; }
    double side() const { return side_; }

    bool contains(const UnitPoint& z) const {
        const double omr = 1.0 - z.abs();
        if (!(omr < side_))
            return false;
        double d = std::fmod(std::atan2(z.im(), z.re()) - theta0_, 2.0 * std::numbers::pi);
        if (d > std::numbers::pi)
            d -= 2.0 * std::numbers::pi;
        if (d < -std::numbers::pi)
            d += 2.0 * std::numbers::pi;
        return std::abs(d) < side_;
    }

private:
    double theta0_;
    double side_;
};

// Dyadic family: sides 2^-l for l = 0..max_depth, angular centers spaced
// by the side length.
inline std::vector<CarlesonSquare> dyadic_squares(std::size_t max_depth) {
    std::vector<CarlesonSquare> out;
    for (std::size_t l = 0; l <= max_depth; ++l) {
        const double side = std::ldexp(1.0, -static_cast<int>(l));
        const auto count =
            static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / side));
        for (std::size_t i = 0; i < count; ++i)
            out.emplace_back(static_cast<double>(i) * side, side);
    }
    return out;
}

namespace detail {

// Dyadic slice of a square: index m >= 0 with 2^-(m+1) side < 1-|z| <= 2^-m side
// (upper-inclusive, so an exact boundary point belongs to the shallower slice).
inline std::size_t slice_index(double side, double one_minus_r) {
    const double t = one_minus_r / side;
    int m = static_cast<int>(std::floor(-std::log2(t)));
    for (int cand = std::max(0, m - 1); cand <= m + 1; ++cand)
        if (t <= std::ldexp(1.0, -cand) && t > std::ldexp(1.0, -cand - 1))
            return static_cast<std::size_t>(cand);
    return static_cast<std::size_t>(std::max(0, m));
}

} // namespace detail

struct SliceCount {
    std::size_t square = 0; // index into the tested family
    std::size_t slice = 0;  // dyadic depth m within the square
    std::size_t count = 0;
    double allowed = 0.0;   // M * 2^(alpha * m)
};

struct DensityResult {
    bool pass = false;
    std::optional<SliceCount> worst;       // largest count/allowed ratio
    std::vector<SliceCount> occupied;      // every nonempty slice
};

// Counts Z in each dyadic slice of each square and compares against the
// geometric budget M * 2^(alpha m).
inline DensityResult density_condition(std::span<const UnitPoint> points,
                                       std::span<const CarlesonSquare> squares,
                                       double big_m, double alpha) {
    if (!(big_m > 0.0))
        throw DomainError("density bound M must be positive");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("density exponent alpha must lie in (0, 1)");
    DensityResult res;
    res.pass = true;
    double worst_ratio = 0.0;
    for (std::size_t s = 0; s < squares.size(); ++s) {
        std::vector<std::size_t> counts;
        for (const auto& z : points) {
            if (!squares[s].contains(z))
                continue;
            const std::size_t m = detail::slice_index(squares[s].side(), 1.0 - z.abs());
            if (counts.size() <= m)
                counts.resize(m + 1, 0);
            ++counts[m];
        }
        for (std::size_t m = 0; m < counts.size(); ++m) {
            if (counts[m] == 0)
                continue;
            SliceCount sc{s, m, counts[m],
                          big_m * std::exp2(alpha * static_cast<double>(m))};
            if (static_cast<double>(sc.count) > sc.allowed)
                res.pass = false;
            const double ratio = static_cast<double>(sc.count) / sc.allowed;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                res.worst = sc;
            }
            res.occupied.push_back(sc);
        }
    }
    return res;
}

// Infimum over alpha of the admissible exponents for the given M, or
// nullopt when no alpha < 1 works (including any depth-0 overflow, which
// no exponent can repair).
inline std::optional<double> density_fit(std::span<const UnitPoint> points,
                                         std::span<const CarlesonSquare> squares,
                                         double big_m) {
    if (!(big_m > 0.0))
        throw DomainError("density bound M must be positive");
    double fit = 0.0;
    for (std::size_t s = 0; s < squares.size(); ++s) {
        std::vector<std::size_t> counts;
        for (const auto& z : points) {
            if (!squares[s].contains(z))
                continue;
            const std::size_t m = detail::slice_index(squares[s].side(), 1.0 - z.abs());
            if (counts.size() <= m)
                counts.resize(m + 1, 0);
            ++counts[m];
        }
        for (std::size_t m = 0; m < counts.size(); ++m) {
            if (counts[m] == 0 || static_cast<double>(counts[m]) <= big_m)
                continue;
            if (m == 0)
                return std::nullopt;
            fit = std::max(fit, std::log2(static_cast<double>(counts[m]) / big_m) /
                                    static_cast<double>(m));
        }
    }
    if (fit >= 1.0)
        return std::nullopt;
    return fit;
}

struct RDensityResult {
    bool pass = false;
    double worst_gap = 0.0;
    UnitPoint worst_grid_point;
    std::size_t grid_size = 0;
};

// Tests whether every grid point of the hyperbolic disc of Euclidean
// radius region_radius lies within hyperbolic distance R of Z.  The grid
// is concentric hyperbolic circles spaced grid_step apart with roughly
// grid_step arc spacing along each circle.
inline RDensityResult r_dense_check(std::span<const UnitPoint> points, double r_bound,
                                    double region_radius, double grid_step) {
    if (!(r_bound > 0.0))
        throw DomainError("density radius R must be positive");
    if (!(region_radius > 0.0) || !(region_radius < 1.0))
        throw DomainError("region radius must lie in (0, 1)");
    if (!(grid_step > 0.0))
        throw DomainError("grid step must be positive");
    if (points.empty())
        throw DomainError("empty point set");

    RDensityResult res;
    const double beta_max = beta(complex(0.0, 0.0), complex(region_radius, 0.0));
    for (double s = 0.0; s <= beta_max; s += grid_step) {
        const double r = euclidean_radius(s);
        const auto ring =
            s == 0.0 ? std::size_t{1}
                     : static_cast<std::size_t>(std::ceil(
                           2.0 * std::numbers::pi * std::sinh(s) / grid_step));
        for (std::size_t i = 0; i < ring; ++i) {
            const UnitPoint g =
                polar_point(r, 2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(ring));
            ++res.grid_size;
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& z : points)
                gap = std::min(gap, beta(g, z));
            if (gap > res.worst_gap) {
                res.worst_gap = gap;
                res.worst_grid_point = g;
            }
        }
    }
    res.pass = res.worst_gap <= r_bound;
    return res;
}

struct OrderVerdict {
    bool pass = false;
    Decomposition decomposition;
    DensityResult density;
};

// Structural test for interpolation order n: Z must split into n separated
// sequences and satisfy the dyadic density budget.
inline OrderVerdict classify_order(std::span<const UnitPoint> points, std::size_t order,
                                   double eta, std::span<const CarlesonSquare> squares,
                                   double big_m, double alpha) {
    if (order < 1)
        throw DomainError("order must be at least 1");
    OrderVerdict v;
    v.decomposition = decompose_separated(points, eta, order);
    v.density = density_condition(points, squares, big_m, alpha);
    v.pass = v.decomposition.feasible && v.density.pass;
    return v;
}

struct GeometryReport {
    SeparationResult separation;
    Decomposition decomposition;
    DensityResult density;
    std::optional<double> fit;
    OrderVerdict order;
};

inline GeometryReport geometry_report(std::span<const UnitPoint> points, std::size_t order,
                                      double eta, std::span<const CarlesonSquare> squares,
                                      double big_m, double alpha) {
    GeometryReport rep;
    rep.separation = separation_constant(points);
    rep.order = classify_order(points, order, eta, squares, big_m, alpha);
    rep.decomposition = rep.order.decomposition;
    rep.density = rep.order.density;
    rep.fit = density_fit(points, squares, big_m);
    return rep;
}

} // namespace hypick
