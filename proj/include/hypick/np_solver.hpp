#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hypick/blaschke.hpp"
#include "hypick/diff_quotients.hpp"
#include "hypick/errors.hpp"
#include "hypick/self_map.hpp"
#include "hypick/tolerances.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

struct PickMatrix {
    Eigen::MatrixXcd entries;
    std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

// M(i, j) = (1 - w_j conj(w_i)) / (1 - z_j conj(z_i)); Hermitian by
// construction (the lower triangle is mirrored explicitly so rounding
// cannot break symmetry).
inline PickMatrix build_pick_matrix(std::span<const UnitPoint> nodes,
                                    std::span<const UnitPoint> targets) {
    if (nodes.size() != targets.size())
        throw ShapeError("node and target counts differ");
    if (nodes.empty())
        throw ShapeError("empty data set");
    detail::require_distinct(nodes, "nodes");
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const complex wi = targets[static_cast<std::size_t>(i)].value();
            const complex wj = targets[static_cast<std::size_t>(j)].value();
            const complex zi = nodes[static_cast<std::size_t>(i)].value();
            const complex zj = nodes[static_cast<std::size_t>(j)].value();
            const complex v = (1.0 - wj * std::conj(wi)) / (1.0 - zj * std::conj(zi));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return PickMatrix{std::move(m)};
}

struct PsdReport {
    double min_eigenvalue = 0.0;
    bool psd = false;          // min eigenvalue >= -psd_tol
    bool strictly_pd = false;  // min eigenvalue > pd_margin
};

inline PsdReport is_positive_semidefinite(const PickMatrix& p) {
    const auto& m = p.entries;
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ShapeError("matrix is not square and nonempty");
    double dev = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    if (dev > hermitian_tol)
        throw ShapeError("matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw Error("eigenvalue computation failed");
    PsdReport rep;
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.psd = rep.min_eigenvalue >= -psd_tol;
    rep.strictly_pd = rep.min_eigenvalue > pd_margin;
    return rep;
}

enum class Solvability { unsolvable, boundary_unique_candidate, infinitely_many };

enum class Criterion { pass, fail, undefined };

struct CriterionResult {
    Criterion state = Criterion::undefined;
    std::optional<TriangleEntryRef> witness; // offending entry (level, row)
    std::optional<std::size_t> partner;      // second row for the pair criteria
};

struct CriteriaRecord {
    CriterionResult corner;            // top entry has modulus < 1
    CriterionResult diagonals;         // every diagonal entry has modulus < 1
    CriterionResult all_entries;       // every entry above level 0 has modulus < 1
    CriterionResult diagonal_pairs;    // beta contraction against the diagonal partner
    CriterionResult all_pairs;         // beta contraction for all row pairs per level
};

struct SolvabilityVerdict {
    Solvability status = Solvability::infinitely_many;
    CriteriaRecord criteria;
    double pick_min_eigenvalue = 0.0;
    std::optional<TriangleEntryRef> witness; // first offending entry, column order
};

inline const char* to_string(Solvability s) {
    switch (s) {
    case Solvability::unsolvable: return "unsolvable";
    case Solvability::boundary_unique_candidate: return "boundary_unique_candidate";
    default: return "infinitely_many";
    }
}

inline const char* to_string(Criterion c) {
    switch (c) {
    case Criterion::pass: return "pass";
    case Criterion::fail: return "fail";
    default: return "undefined";
    }
}

namespace detail {

// Strictness margin for the beta-contraction criteria: equality within
// 1e-10 counts as "not strictly below" (the boundary regime).
inline constexpr double beta_strict_margin = 1e-10;

inline double entry_beta(complex a, complex b) {
    if (saturated(a) || saturated(b))
        return std::numeric_limits<double>::infinity();
    return beta(a, b);
}

} // namespace detail

// Classifies the data as unsolvable / boundary / interior from the triangle
// (first offending entry in column order wins) and reports each modulus and
// contraction criterion separately.  A criterion whose operands sit past a
// degenerate level is undefined.
inline SolvabilityVerdict theorem_c_criteria(const DQTriangle& t) {
    const std::size_t n = t.size();
    SolvabilityVerdict v;

    bool decided = false;
    for (std::size_t k = 1; k < n && !decided; ++k) {
        for (std::size_t j = k + 1; j <= n && !decided; ++j) {
            const auto e = t.entry(k, j);
            if (!e)
                break;
            const double m = std::abs(*e);
            if (m > 1.0 + boundary_band) {
                v.status = Solvability::unsolvable;
                v.witness = TriangleEntryRef{k, j};
                decided = true;
            } else if (m >= 1.0 - unimodular_tol) {
                v.status = Solvability::boundary_unique_candidate;
                v.witness = TriangleEntryRef{k, j};
                decided = true;
            }
        }
    }
    if (!decided && t.degenerate_at()) {
        // only near-unimodular level-0 data reaches here
        v.status = Solvability::boundary_unique_candidate;
        v.witness = t.degenerate_at();
    }

    auto modulus_criterion = [&](auto&& include_entry) {
        CriterionResult r;
        bool any_absent = false;
        r.state = Criterion::pass;
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                if (!include_entry(k, j))
                    continue;
                const auto e = t.entry(k, j);
                if (!e) {
                    any_absent = true;
                    continue;
                }
                if (std::abs(*e) >= 1.0 - unimodular_tol) {
                    r.state = Criterion::fail;
                    r.witness = TriangleEntryRef{k, j};
                    return r;
                }
            }
        }
        if (any_absent)
            r.state = Criterion::undefined;
        return r;
    };

    // corner: the single deepest entry (level n-1, row n); for n = 1 this
    // is the bare target w_1, inside the disc by construction
    {
        CriterionResult r;
        if (n == 1) {
            r.state = Criterion::pass;
        } else {
            const auto e = t.entry(n - 1, n);
            if (!e)
                r.state = Criterion::undefined;
            else if (std::abs(*e) < 1.0 - unimodular_tol)
                r.state = Criterion::pass;
            else {
                r.state = Criterion::fail;
                r.witness = TriangleEntryRef{n - 1, n};
            }
        }
        v.criteria.corner = r;
    }

    v.criteria.diagonals =
        modulus_criterion([](std::size_t k, std::size_t j) { return j == k + 1; });
    v.criteria.all_entries =
        modulus_criterion([](std::size_t, std::size_t) { return true; });

    auto pair_criterion = [&](bool diagonal_partner_only) {
        CriterionResult r;
        bool any_absent = false;
        r.state = Criterion::pass;
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                for (std::size_t i = k; i < j; ++i) {
                    if (diagonal_partner_only ? (i != k) : (i == k))
                        continue;
                    const auto a = t.entry(k - 1, j);
                    const auto b = t.entry(k - 1, i);
                    if (!a || !b) {
                        any_absent = true;
                        continue;
                    }
                    const double top = detail::entry_beta(*a, *b);
                    const double bot = beta(t.nodes()[j - 1], t.nodes()[i - 1]);
                    if (!(top < bot - detail::beta_strict_margin)) {
                        r.state = Criterion::fail;
                        r.witness = TriangleEntryRef{k - 1, j};
                        r.partner = i;
                        return r;
                    }
                }
            }
        }
        if (any_absent)
            r.state = Criterion::undefined;
        return r;
    };

    v.criteria.diagonal_pairs = pair_criterion(true);
    v.criteria.all_pairs = pair_criterion(false);

    v.pick_min_eigenvalue =
        is_positive_semidefinite(build_pick_matrix(t.nodes(), t.targets())).min_eigenvalue;
    return v;
}

struct SchurStep {
    UnitPoint node;
    complex quotient;
};

// Forward recursion g_k(z) = [[z, node_k] g_{k-1}(z), quotient_k] from a
// seed self-map.  With node_k = z_{n+1-k} and quotient_k the level-(n-k)
// diagonal entry, the final g_n interpolates the full data set for any
// admissible seed.
class SchurChain {
public:
    SchurChain(SelfMap seed, std::vector<SchurStep> steps)
        : seed_(std::move(seed)), steps_(std::move(steps)) {}

    const std::vector<SchurStep>& steps() const { return steps_; }
    const SelfMap& seed() const { return seed_; }

    complex value(complex z) const {
        complex g = seed_.value(z);
        for (const auto& s : steps_) {
            const complex t = cp_distance(z, s.node.value()) * g;
            g = cp_distance(t, s.quotient);
        }
        return g;
    }

    complex derivative(complex z) const {
        complex g = seed_.value(z);
        complex dg = seed_.derivative(z);
        for (const auto& s : steps_) {
            const complex a = s.node.value();
            const complex move = cp_distance(z, a);
            const complex move_d =
                (std::norm(a) - 1.0) / ((1.0 - std::conj(a) * z) * (1.0 - std::conj(a) * z));
            const complex t = move * g;
            const complex dt = move_d * g + move * dg;
            const complex q = s.quotient;
            const complex den = 1.0 - std::conj(q) * t;
            g = (q - t) / den;
            dg = dt * (std::norm(q) - 1.0) / (den * den);
        }
        return dg;
    }

    // the chain truncated to its first m steps (m = 0 gives the seed)
    SelfMap intermediate(std::size_t m) const {
        if (m > steps_.size())
            throw ShapeError("intermediate index exceeds step count");
        return SelfMap(SchurChain(
            seed_, std::vector<SchurStep>(steps_.begin(), steps_.begin() + m)));
    }

    std::string describe() const {
        return "schur_chain(steps=" + std::to_string(steps_.size()) + ", seed=" +
               seed_.describe() + ")";
    }

private:
    SelfMap seed_;
    std::vector<SchurStep> steps_;
};

// Builds the interpolating chain for interior data.  Any diagonal entry
// absent or unimodular within 1e-12 is a boundary case the recursion
// cannot divide through.
inline SchurChain schur_solve(const DQTriangle& t,
                              SelfMap seed = SelfMap(ConstantMap(complex(0.0, 0.0)))) {
    const std::size_t n = t.size();
    std::vector<SchurStep> steps;
    steps.reserve(n);
    for (std::size_t k = n; k >= 1; --k) {
        const auto d = t.diagonal(k - 1);
        if (!d || detail::saturated(*d))
            throw BoundaryCase("diagonal entry at level " + std::to_string(k - 1) +
                               " is saturated or absent");
        steps.push_back(SchurStep{t.nodes()[k - 1], *d});
    }
    return SchurChain(std::move(seed), std::move(steps));
}

struct BoundaryCandidate {
    std::optional<BlaschkeChain> candidate;
    double residual = 0.0;   // worst |candidate(z_j) - w_j| (chain residual if
                             // extraction failed)
    std::size_t level = 0;   // first diagonal level in the unimodular band
};

namespace detail {

// (c0 + c1 z) * p
inline std::vector<complex> poly_mul_linear(const std::vector<complex>& p, complex c0,
                                            complex c1) {
    std::vector<complex> out(p.size() + 1, complex(0.0, 0.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] += c0 * p[i];
        out[i + 1] += c1 * p[i];
    }
    return out;
}

inline std::vector<complex> poly_roots(std::vector<complex> p) {
    double maxc = 0.0;
    for (const auto& c : p)
        maxc = std::max(maxc, std::abs(c));
    if (maxc == 0.0)
        return {};
    while (!p.empty() && std::abs(p.back()) <= 1e-12 * maxc)
        p.pop_back();
    if (p.size() <= 1)
        return {};
    const auto d = static_cast<Eigen::Index>(p.size() - 1);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i)
        comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i)
        comp(i, d - 1) = -p[static_cast<std::size_t>(i)] / p.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<complex> roots;
    roots.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i)
        roots.push_back(es.eigenvalues()(i));
    return roots;
}

} // namespace detail

// Boundary regime: the first diagonal in the unimodular band freezes the
// recursion tail into a chain whose seed is that entry scaled to modulus 1.
// The chain is expanded symbolically to a rational function, its zeros are
// extracted (companion matrix plus a Newton polish against the chain), and
// the resulting Blaschke product is returned only if it reproduces every
// target within 1e-9.  Inconsistent data thus yields no candidate and the
// offending residual.
inline BoundaryCandidate boundary_blaschke_candidate(const DQTriangle& t) {
    const std::size_t n = t.size();
    std::optional<std::size_t> level;
    for (std::size_t k = 0; k < n; ++k) {
        const auto d = t.diagonal(k);
        if (d && std::abs(std::abs(*d) - 1.0) <= boundary_band) {
            level = k;
            break;
        }
        if (d && std::abs(*d) > 1.0 + boundary_band)
            throw DomainError("diagonal violation below the first boundary level");
    }
    if (!level)
        throw DomainError("no diagonal entry in the unimodular band");

    const std::size_t k = *level;
    const complex c = *t.diagonal(k) / std::abs(*t.diagonal(k));
    std::vector<SchurStep> steps;
    steps.reserve(k);
    for (std::size_t m = k; m >= 1; --m)
        steps.push_back(SchurStep{t.nodes()[m - 1], *t.diagonal(m - 1)});
    const SchurChain chain(SelfMap(ConstantMap(c)), std::move(steps));

    BoundaryCandidate out;
    out.level = k;
    for (std::size_t j = 1; j <= n; ++j)
        out.residual = std::max(out.residual, std::abs(chain.value(t.nodes()[j - 1].value()) -
                                                       t.targets()[j - 1].value()));
    if (out.residual > residual_tol)
        return out;

    // numerator/denominator expansion of the chain
    std::vector<complex> p = {c}, q = {complex(1.0, 0.0)};
    for (const auto& s : chain.steps()) {
        const complex a = s.node.value();
        p = detail::poly_mul_linear(p, a, complex(-1.0, 0.0));
        q = detail::poly_mul_linear(q, complex(1.0, 0.0), -std::conj(a));
        std::vector<complex> p2(p.size()), q2(q.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p2[i] = s.quotient * q[i] - p[i];
            q2[i] = q[i] - std::conj(s.quotient) * p[i];
        }
        p = std::move(p2);
        q = std::move(q2);
    }

    std::vector<complex> roots = detail::poly_roots(p);
    std::vector<UnitPoint> zeros;
    zeros.reserve(roots.size());
    for (complex r : roots) {
        for (int it = 0; it < 3; ++it) {
            const complex dv = chain.derivative(r);
            if (std::abs(dv) < 1e-300)
                break;
            r -= chain.value(r) / dv;
        }
        if (!(std::abs(r) < 1.0))
            return out; // not a Blaschke zero pattern; leave candidate empty
        zeros.emplace_back(r);
    }

    // unimodular factor from a probe point away from the zeros
    const complex probes[] = {complex(0.37, 0.11), complex(-0.22, 0.41),
                              complex(0.05, -0.53), complex(0.0, 0.0)};
    complex lambda(1.0, 0.0);
    double best = -1.0;
    for (complex pr : probes) {
        double sep = 1.0;
        for (const auto& zr : zeros)
            sep = std::min(sep, std::abs(zr.value() - pr));
        if (sep > best) {
            complex denom(1.0, 0.0);
            for (const auto& zr : zeros)
                denom *= (zr.value() - pr) / (1.0 - std::conj(zr.value()) * pr);
            if (std::abs(denom) > 1e-12) {
                best = sep;
                lambda = chain.value(pr) / denom;
            }
        }
    }
    lambda /= std::abs(lambda);
    BlaschkeChain cand(std::arg(lambda), std::move(zeros));

    double cand_residual = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        cand_residual = std::max(cand_residual, std::abs(cand.value(t.nodes()[j - 1].value()) -
                                                         t.targets()[j - 1].value()));
    if (cand_residual > residual_tol)
        return out;
    out.candidate = std::move(cand);
    out.residual = std::max(out.residual, cand_residual);
    return out;
}

struct DenjoyReport {
    std::vector<double> partial_sums;
    std::optional<std::size_t> saturated_at; // 1-based index of the first
                                             // saturated or absent diagonal
};

// Partial sums of (1 - |z_j|) / (1 - |d_j|) over the diagonal entries d_j.
// No convergence claim is made; saturation just truncates the report.
inline DenjoyReport denjoy_partial_sums(std::span<const UnitPoint> nodes,
                                        std::span<const UnitPoint> targets) {
    const DQTriangle t = triangle_from_data(nodes, targets);
    DenjoyReport rep;
    double acc = 0.0;
    for (std::size_t j = 1; j <= t.size(); ++j) {
        const auto d = t.entry(j - 1, j);
        if (!d || detail::saturated(*d)) {
            rep.saturated_at = j;
            break;
        }
        acc += (1.0 - nodes[j - 1].abs()) / (1.0 - std::abs(*d));
        rep.partial_sums.push_back(acc);
    }
    return rep;
}

} // namespace hypick
