#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hypick/errors.hpp"
#include "hypick/random_gen.hpp"
#include "hypick/self_map.hpp"
#include "hypick/tolerances.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

namespace detail {

inline void require_distinct(std::span<const UnitPoint> pts, const char* what) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (coincident(pts[i], pts[j]))
                throw DistinctnessError(std::string(what) + ": points " +
                                        std::to_string(i) + " and " + std::to_string(j) +
                                        " coincide");
}

inline bool saturated(complex q) { return std::abs(q) >= 1.0 - unimodular_tol; }

} // namespace detail

struct TriangleEntryRef {
    std::size_t level = 0; // k, 0-based
    std::size_t row = 0;   // j, 1-based (row j pairs with node z_j)
};

// Triangle of iterated difference quotients of a data set (Z, W):
//   entry(0, j) = w_j,
//   entry(k, j) = [entry(k-1, j), entry(k-1, k)] / [z_j, z_k],  k < j.
// An entry whose two operands are both unimodular (within 1e-12) is a 0/0
// form; the first such entry in column order is recorded and everything
// after it stays absent.
class DQTriangle {
public:
    static DQTriangle from_data(std::span<const UnitPoint> nodes,
                                std::span<const UnitPoint> targets) {
        if (nodes.size() != targets.size())
            throw ShapeError("node and target counts differ");
        if (nodes.empty())
            throw ShapeError("empty data set");
        detail::require_distinct(nodes, "triangle nodes");

        DQTriangle t;
        t.nodes_.assign(nodes.begin(), nodes.end());
        t.targets_.assign(targets.begin(), targets.end());
        const std::size_t n = nodes.size();
        t.rows_.resize(n);
        for (std::size_t j = 1; j <= n; ++j) {
            t.rows_[j - 1].assign(j, std::nullopt);
            t.rows_[j - 1][0] = targets[j - 1].value();
        }
        for (std::size_t k = 1; k < n && !t.degenerate_at_; ++k) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                const complex a = *t.rows_[j - 1][k - 1];
                const complex b = *t.rows_[k - 1][k - 1];
                if (detail::saturated(a) && detail::saturated(b)) {
                    t.degenerate_at_ = TriangleEntryRef{k, j};
                    break;
                }
                const complex num = cp_distance(a, b);
                const complex den = cp_distance(nodes[j - 1], nodes[k - 1]);
                const complex q = num / den;
                if (!std::isfinite(std::abs(q))) {
                    t.degenerate_at_ = TriangleEntryRef{k, j};
                    break;
                }
                t.rows_[j - 1][k] = q;
            }
        }
        return t;
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<UnitPoint>& nodes() const { return nodes_; }
    const std::vector<UnitPoint>& targets() const { return targets_; }

    // k in [0, j-1], j in [1, n]
    std::optional<complex> entry(std::size_t level, std::size_t row) const {
        if (row < 1 || row > nodes_.size() || level >= row)
            throw ShapeError("triangle entry (" + std::to_string(level) + ", " +
                             std::to_string(row) + ") out of range");
        return rows_[row - 1][level];
    }

    // entry (k, k+1); these drive the recursion machinery downstream
    std::optional<complex> diagonal(std::size_t level) const {
        return entry(level, level + 1);
    }

    const std::optional<TriangleEntryRef>& degenerate_at() const { return degenerate_at_; }

private:
    std::vector<UnitPoint> nodes_;
    std::vector<UnitPoint> targets_;
    std::vector<std::vector<std::optional<complex>>> rows_;
    std::optional<TriangleEntryRef> degenerate_at_;
};

inline DQTriangle triangle_from_data(std::span<const UnitPoint> nodes,
                                     std::span<const UnitPoint> targets) {
    return DQTriangle::from_data(nodes, targets);
}

// One application of the difference-quotient operator to a map g at a fixed
// node: z -> [g(z), g(node)] / [z, node], extended across z = node by its
// limit, the hyperbolic derivative of g at the node.  Within the hyperbolic
// band [limit_switch, limit_band] around the node both forms are computed
// and cross-checked.  The derivative is the plain quotient rule and is not
// defined at the node itself; the stacking below never needs it there.
class DQStep {
public:
    DQStep(SelfMap g, UnitPoint node)
        : g_(std::move(g)), node_(node), g_node_(g_.value(node.value())) {}

    complex value(complex z) const {
        const double dist = beta(z, node_.value());
        if (dist < limit_switch)
            return limit_value();
        const complex direct = direct_value(z);
        if (dist < limit_band) {
            const complex lim = limit_value();
            if (std::abs(direct - lim) > limit_band_agree)
                throw Error("difference quotient direct/limit forms disagree near node");
        }
        return direct;
    }

    complex derivative(complex z) const {
        const complex gb = std::conj(g_node_);
        const complex gz = g_.value(z);
        const complex num = (g_node_ - gz) / (1.0 - gb * gz);
        const complex num_d = (std::norm(g_node_) - 1.0) /
                              ((1.0 - gb * gz) * (1.0 - gb * gz)) * g_.derivative(z);
        const complex nb = std::conj(node_.value());
        const complex den = (node_.value() - z) / (1.0 - nb * z);
        const complex den_d = (std::norm(node_.value()) - 1.0) /
                              ((1.0 - nb * z) * (1.0 - nb * z));
        return (num_d * den - num * den_d) / (den * den);
    }

    std::string describe() const {
        return "dq[" + detail::fmt_complex(node_.value()) + "](" + g_.describe() + ")";
    }

private:
    complex limit_value() const {
        if (detail::saturated(g_node_))
            throw DegenerateLevel("difference quotient limit at a saturated value");
        return detail::one_minus_abs_sq(node_.value()) * g_.derivative(node_.value()) /
               g_.one_minus_abs_value_sq(node_.value());
    }

    complex direct_value(complex z) const {
        const complex gz = g_.value(z);
        if (detail::saturated(gz) && detail::saturated(g_node_))
            throw DegenerateLevel("difference quotient 0/0 at saturated values");
        const complex num = cp_distance(gz, g_node_);
        const complex den = cp_distance(z, node_.value());
        return num / den;
    }

    SelfMap g_;
    UnitPoint node_;
    complex g_node_;
};

// Iterated operator with the prescribed points applied in order.
inline SelfMap dq_map(SelfMap f, std::span<const UnitPoint> prescribed) {
    detail::require_distinct(prescribed, "prescribed points");
    SelfMap m = std::move(f);
    for (const auto& p : prescribed)
        m = SelfMap(DQStep(std::move(m), p));
    return m;
}

inline complex dq_of_map(const SelfMap& f, std::span<const UnitPoint> prescribed,
                         complex z) {
    return dq_map(f, prescribed).value(z);
}

inline complex dq_of_map(const SelfMap& f, std::span<const UnitPoint> prescribed,
                         const UnitPoint& z) {
    return dq_of_map(f, prescribed, z.value());
}

// Checks W = f(Z) (throws DomainError naming the worst index otherwise),
// then compares every defined triangle entry against the corresponding
// iterated quotient of f evaluated at that entry's node.  Returns the
// largest deviation seen.
inline double consistency_check(const SelfMap& f, std::span<const UnitPoint> nodes,
                                std::span<const UnitPoint> targets) {
    if (nodes.size() != targets.size())
        throw ShapeError("node and target counts differ");
    if (nodes.empty())
        throw ShapeError("empty data set");
    detail::require_distinct(nodes, "nodes");

    double worst_value = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double d = std::abs(f.value(nodes[j].value()) - targets[j].value());
        if (d > worst_value) {
            worst_value = d;
            worst_index = j;
        }
    }
    if (worst_value > residual_tol)
        throw DomainError("targets are not the values of the map: worst at index " +
                          std::to_string(worst_index) + " (deviation " +
                          std::to_string(worst_value) + ")");

    const DQTriangle t = triangle_from_data(nodes, targets);
    const std::size_t n = nodes.size();
    double worst = 0.0;
    SelfMap level_map = f;
    for (std::size_t k = 0; k < n; ++k) {
        if (t.degenerate_at() && k >= t.degenerate_at()->level)
            break;
        if (k > 0)
            level_map = SelfMap(DQStep(std::move(level_map), nodes[k - 1]));
        for (std::size_t j = k + 1; j <= n; ++j)
            if (auto e = t.entry(k, j))
                worst = std::max(worst, std::abs(*e - level_map.value(nodes[j - 1].value())));
    }
    return worst;
}

struct CompatibilityOptions {
    std::size_t tuple_budget = 200;
    bool all_permutations = false;   // exhaustive only up to 8-point tuples
    std::size_t permutation_samples = 24;
    std::uint64_t seed = 1;
};

struct CompatibilityWitness {
    std::vector<std::size_t> tuple;  // indices into Z, in the order used
    std::size_t level = 0;
    std::size_t i = 0, j = 0;        // 1-based rows within the tuple
};

struct CompatibilityReport {
    double epsilon = 0.0;
    std::size_t order = 0;
    double worst_ratio = 0.0;
    CompatibilityWitness worst;
    bool pass = false;               // worst_ratio <= epsilon
    // shortcut criterion: max |entry| over levels >= 1 stays <= epsilon
    double shortcut_max_modulus = 0.0;
    bool shortcut_pass = false;
    std::size_t tuples_checked = 0;
    std::size_t permutations_checked = 0;
    bool tuples_sampled = false;
    std::size_t degenerate_cases = 0;
};

// Tests whether every (order+1)-tuple of the data, in every tested
// arrangement, keeps all level-k quotient pairs within epsilon times the
// node distance: beta(entry_i, entry_j) <= epsilon * beta(z_i, z_j).
// Saturated or absent entries make the ratio +infinity (flagged, never
// skipped).  Tuple enumeration is exhaustive up to tuple_budget
// combinations, then uniformly sampled; arrangements are exhaustive when
// all_permutations is set (tuple size <= 8) and sampled otherwise.
inline CompatibilityReport check_compatibility(std::span<const UnitPoint> nodes,
                                               std::span<const UnitPoint> targets,
                                               double epsilon, std::size_t order,
                                               const CompatibilityOptions& opts = {}) {
    if (nodes.size() != targets.size())
        throw ShapeError("node and target counts differ");
    if (!(epsilon > 0.0))
        throw DomainError("epsilon must be positive");
    if (order < 1)
        throw DomainError("order must be at least 1");
    const std::size_t n = nodes.size();
    const std::size_t s = order + 1;
    if (s > n)
        throw DomainError("order + 1 exceeds the number of points");
    detail::require_distinct(nodes, "nodes");
    if (opts.all_permutations && s > 8)
        throw DomainError("exhaustive arrangements limited to 8-point tuples");

    const double inf = std::numeric_limits<double>::infinity();
    CompatibilityReport rep;
    rep.epsilon = epsilon;
    rep.order = order;

    // enumerate or sample the s-subsets
    std::vector<std::vector<std::size_t>> tuples;
    unsigned long long combos = 1;
    for (std::size_t i = 1; i <= s; ++i) {
        combos = combos * (n - s + i) / i;
        if (combos > 100000000ULL)
            break;
    }
    Rng rng(opts.seed);
    if (combos <= opts.tuple_budget) {
        std::vector<std::size_t> c(s);
        std::iota(c.begin(), c.end(), std::size_t{0});
        while (true) {
            tuples.push_back(c);
            std::size_t i = s;
            while (i > 0 && c[i - 1] == n - s + i - 1)
                --i;
            if (i == 0)
                break;
            ++c[i - 1];
            for (std::size_t k = i; k < s; ++k)
                c[k] = c[k - 1] + 1;
        }
    } else {
        rep.tuples_sampled = true;
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::size_t attempts = 0;
        while (tuples.size() < opts.tuple_budget && attempts < 20 * opts.tuple_budget) {
            ++attempts;
            rng.shuffle(all);
            std::vector<std::size_t> c(all.begin(), all.begin() + s);
            std::sort(c.begin(), c.end());
            if (seen.insert(c).second)
                tuples.push_back(c);
        }
    }

    auto one_arrangement = [&](const std::vector<std::size_t>& arranged) {
        std::vector<UnitPoint> zt, wt;
        zt.reserve(s);
        wt.reserve(s);
        for (std::size_t idx : arranged) {
            zt.push_back(nodes[idx]);
            wt.push_back(targets[idx]);
        }
        const DQTriangle t = triangle_from_data(zt, wt);
        bool flagged = false;
        for (std::size_t k = 0; k + 2 <= s; ++k) {
            for (std::size_t i = k + 1; i <= s; ++i) {
                for (std::size_t j = i + 1; j <= s; ++j) {
                    const auto a = t.entry(k, i);
                    const auto b = t.entry(k, j);
                    double ratio;
                    if (!a || !b || detail::saturated(*a) || detail::saturated(*b)) {
                        ratio = inf;
                        flagged = true;
                    } else {
                        ratio = beta(*a, *b) / beta(zt[i - 1], zt[j - 1]);
                    }
                    if (ratio > rep.worst_ratio) {
                        rep.worst_ratio = ratio;
                        rep.worst = CompatibilityWitness{arranged, k, i, j};
                    }
                }
            }
        }
        for (std::size_t k = 1; k < s; ++k) {
            for (std::size_t j = k + 1; j <= s; ++j) {
                const auto e = t.entry(k, j);
                const double m = e ? std::abs(*e) : inf;
                if (!e)
                    flagged = true;
                rep.shortcut_max_modulus = std::max(rep.shortcut_max_modulus, m);
            }
        }
        if (flagged)
            ++rep.degenerate_cases;
        ++rep.permutations_checked;
    };

    for (const auto& tup : tuples) {
        ++rep.tuples_checked;
        if (opts.all_permutations) {
            std::vector<std::size_t> arranged = tup;
            std::sort(arranged.begin(), arranged.end());
            do {
                one_arrangement(arranged);
            } while (std::next_permutation(arranged.begin(), arranged.end()));
        } else {
            std::vector<std::size_t> arranged = tup;
            for (std::size_t p = 0; p < opts.permutation_samples; ++p) {
                one_arrangement(arranged);
                rng.shuffle(arranged);
            }
        }
    }

    rep.pass = rep.worst_ratio <= epsilon;
    rep.shortcut_pass = rep.shortcut_max_modulus <= epsilon;
    return rep;
}

// Closed form for the bottom triangle row of the data set
// (z_1, ..., z_m) -> (0, ..., 0, eps_x): starting from r_0 = eps_x,
//   r_k = -r_{k-1} / [z_m, z_k],
// because the partner entries are all zero and [a, 0] = -a.  (A naive
// transcription without the minus sign fails the full-triangle
// cross-check.)  Returns the m-1 entries for levels 1..m-1.
inline std::vector<complex> last_row_closed_form(std::span<const UnitPoint> points,
                                                 complex eps_x) {
    if (points.empty())
        throw ShapeError("empty point list");
    if (!(std::abs(eps_x) < 1.0))
        throw DomainError("eps_x must lie inside the unit disc");
    detail::require_distinct(points, "points");
    const std::size_t m = points.size();
    std::vector<complex> row;
    row.reserve(m - 1);
    complex r = eps_x;
    for (std::size_t k = 1; k < m; ++k) {
        r = -r / cp_distance(points[m - 1], points[k - 1]);
        row.push_back(r);
    }
    return row;
}

} // namespace hypick
