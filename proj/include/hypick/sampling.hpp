#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hypick/blaschke.hpp"
#include "hypick/diff_quotients.hpp"
#include "hypick/errors.hpp"
#include "hypick/mobius.hpp"
#include "hypick/random_gen.hpp"
#include "hypick/self_map.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

namespace detail {

// Vertex of the parabola through three equally spaced samples; falls back
// to the center when the curvature is flat or the wrong sign.
inline double parabola_vertex(double x0, double h, double ym, double y0, double yp) {
    const double curv = ym - 2.0 * y0 + yp;
    if (!(curv < 0.0))
        return x0;
    double off = 0.5 * h * (ym - yp) / curv;
    off = std::clamp(off, -h, h);
    return x0 + off;
}

} // namespace detail

// Supremum lower bound for |f^h| over the disc: a polar grid (radial cutoff
// at Euclidean distance 1e-6 from the boundary) plus one parabolic
// refinement pass around the grid argmax.  The grids nest under doubling of
// grid_resolution, so the output never decreases on refinement.
inline double hyperbolic_norm(const SelfMap& f, std::size_t grid_resolution = 64) {
    if (grid_resolution < 1)
        throw DomainError("grid resolution must be at least 1");
    const double r_max = 1.0 - 1e-6;
    const double two_pi = 2.0 * std::numbers::pi;

    auto eval = [&](double r, double t) {
        const complex z = std::polar(r, t);
        try {
            return std::abs(hyperbolic_derivative(f, z));
        } catch (const DomainError&) {
            return 0.0; // saturated value; the point carries no information
        }
    };

    double best = 0.0;
    std::size_t best_i = 0, best_k = 0;
    std::size_t best_ring = 1;
    for (std::size_t i = 0; i <= grid_resolution; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(grid_resolution);
        const std::size_t ring = i == 0 ? 1 : 6 * i;
        for (std::size_t k = 0; k < ring; ++k) {
            const double t = two_pi * static_cast<double>(k) / static_cast<double>(ring);
            const double v = eval(r, t);
            if (v > best) {
                best = v;
                best_i = i;
                best_k = k;
                best_ring = ring;
            }
        }
    }

    // local refinement around the argmax
    const double hr = r_max / static_cast<double>(grid_resolution);
    const double r0 = hr * static_cast<double>(best_i);
    const double t0 = two_pi * static_cast<double>(best_k) / static_cast<double>(best_ring);
    double r_ref = r0, t_ref = t0;
    if (best_i > 0 && best_i < grid_resolution) {
        const double ym = eval(r0 - hr, t0), yp = eval(r0 + hr, t0);
        r_ref = std::clamp(detail::parabola_vertex(r0, hr, ym, best, yp), 0.0, r_max);
    }
    if (best_i > 0) {
        const double ht = two_pi / static_cast<double>(best_ring);
        const double ym = eval(r0, t0 - ht), yp = eval(r0, t0 + ht);
        t_ref = detail::parabola_vertex(t0, ht, ym, best, yp);
    }
    best = std::max({best, eval(r_ref, t0), eval(r0, t_ref), eval(r_ref, t_ref)});
    return best;
}

// Deterministic low-discrepancy disc covering (golden-angle spiral); used
// for sup-modulus checks over the disc.
inline std::vector<UnitPoint> disc_grid(std::size_t count, double rmax = 0.999) {
    if (count < 1)
        throw DomainError("grid needs at least one point");
    if (!(rmax > 0.0) || !(rmax < 1.0))
        throw DomainError("grid radius must lie in (0, 1)");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<UnitPoint> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r =
            rmax * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(count));
        pts.push_back(polar_point(r, golden * static_cast<double>(i)));
    }
    return pts;
}

struct SamplingRatio {
    double ratio = 0.0;
    std::size_t i = 0, j = 0; // realizing pair
};

// sup over pairs of beta(f(z_i), f(z_j)) / beta(z_i, z_j).
inline SamplingRatio sampling_ratio(std::span<const UnitPoint> points, const SelfMap& f) {
    if (points.size() < 2)
        throw DomainError("sampling ratio needs at least two points");
    detail::require_distinct(points, "points");
    SamplingRatio best;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double top = beta(f.value(points[i].value()), f.value(points[j].value()));
            const double bot = beta(points[i], points[j]);
            const double r = top / bot;
            if (r > best.ratio)
                best = SamplingRatio{r, i, j};
        }
    }
    return best;
}

enum class SamplingFamily { scaled, blaschke, conjugated_scaled, conjugated_blaschke };

inline const char* to_string(SamplingFamily f) {
    switch (f) {
    case SamplingFamily::scaled: return "scaled";
    case SamplingFamily::blaschke: return "blaschke";
    case SamplingFamily::conjugated_scaled: return "conjugated-scaled";
    default: return "conjugated-blaschke";
    }
}

struct SamplingTrial {
    std::string description;
    double ratio = 0.0;
    double norm = 0.0;
    double quotient = 0.0;
};

struct SamplingEstimate {
    // min over trials of ratio/norm; an upper-bound witness for the
    // sampling constant of Z (each trial map dominates the infimum)
    double delta_upper_bound_witness = std::numeric_limits<double>::infinity();
    std::string worst_function;
    std::size_t trials_used = 0;
    std::size_t skipped = 0; // degenerate trials (vanishing norm)
    std::vector<SamplingTrial> trials;
};

// Sweeps a seeded family of test maps and keeps the smallest
// ratio-to-norm quotient.  Scaled maps sweep r deterministically; the
// other families are seeded random draws.
inline SamplingEstimate estimate_sampling_constant(std::span<const UnitPoint> points,
                                                   SamplingFamily family,
                                                   std::size_t trials,
                                                   std::size_t grid_resolution,
                                                   std::uint64_t seed) {
    if (trials < 1)
        throw DomainError("at least one trial required");
    Rng rng(seed);
    SamplingEstimate est;
    for (std::size_t t = 0; t < trials; ++t) {
        SelfMap f = [&]() -> SelfMap {
            switch (family) {
            case SamplingFamily::scaled: {
                const double r =
                    static_cast<double>(t + 1) / static_cast<double>(trials + 1);
                return SelfMap(ScalarMap(complex(r, 0.0)));
            }
            case SamplingFamily::blaschke:
                return SelfMap(random_blaschke(rng, 1 + rng.index(4), 0.7));
            case SamplingFamily::conjugated_scaled: {
                const MobiusAutomorphism outer = random_automorphism(rng, 0.6);
                const MobiusAutomorphism inner = random_automorphism(rng, 0.6);
                return composed(SelfMap(outer),
                                composed(SelfMap(ScalarMap(complex(rng.uniform(0.2, 0.95), 0.0))),
                                         SelfMap(inner)));
            }
            default: {
                const MobiusAutomorphism outer = random_automorphism(rng, 0.6);
                const MobiusAutomorphism inner = random_automorphism(rng, 0.6);
                return composed(SelfMap(outer),
                                composed(SelfMap(random_blaschke(rng, 1 + rng.index(4), 0.7)),
                                         SelfMap(inner)));
            }
            }
        }();
        const double norm = hyperbolic_norm(f, grid_resolution);
        if (norm < 1e-12) {
            ++est.skipped;
            continue;
        }
        const double ratio = sampling_ratio(points, f).ratio;
        const double quotient = ratio / norm;
        est.trials.push_back(SamplingTrial{f.describe(), ratio, norm, quotient});
        ++est.trials_used;
        if (quotient < est.delta_upper_bound_witness) {
            est.delta_upper_bound_witness = quotient;
            est.worst_function = f.describe();
        }
    }
    return est;
}

struct AnnulusWeight {
    double omega = 0.0;
    double log_num = 0.0; // log(q coth(R))
    double log_den = 0.0; // log(q coth(theta R / 2))
};

// omega(theta, R) = log(q (e^{2R}+1)/(e^{2R}-1)) / log(q (e^{theta R}+1)/(e^{theta R}-1)),
// q = (e^{4R}-1)/(e^{4R}+1).  Equivalently the radial harmonic measure of
// the inner circle of the annulus between hyperbolic radii theta R and 4R,
// evaluated on the circle of radius 2R; theta = 2 gives exactly 1.
inline AnnulusWeight annulus_harmonic_weight(double theta, double r_param) {
    if (!(r_param > 0.0))
        throw DomainError("annulus parameter R must be positive");
    if (!(theta > 0.0) || theta > 2.0)
        throw DomainError("annulus parameter theta must lie in (0, 2]");
    const double q = (std::exp(4.0 * r_param) - 1.0) / (std::exp(4.0 * r_param) + 1.0);
    const double e2 = std::exp(2.0 * r_param);
    const double et = std::exp(theta * r_param);
    AnnulusWeight w;
    w.log_num = std::log(q * (e2 + 1.0) / (e2 - 1.0));
    w.log_den = std::log(q * (et + 1.0) / (et - 1.0));
    w.omega = w.log_num / w.log_den;
    return w;
}

} // namespace hypick
