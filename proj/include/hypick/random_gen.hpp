#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "hypick/blaschke.hpp"
#include "hypick/errors.hpp"
#include "hypick/mobius.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

// Seeded deterministic generator.  Doubles are derived from the raw 64-bit
// stream directly (not through std::uniform_real_distribution, whose output
// is implementation-defined), so a seed pins byte-identical behavior across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::size_t index(std::size_t n) {
        if (n == 0)
            throw DomainError("index over empty range");
        auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 eng_;
};

// Area-uniform point of the Euclidean disc of radius rmax.
inline UnitPoint random_point(Rng& rng, double rmax) {
    const double r = rmax * std::sqrt(rng.uniform());
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return polar_point(r, t);
}

// Hyperbolic-area uniform point of the hyperbolic disc of radius s_max
// about the origin: sinh-density radius via s = 2 asinh(sqrt(u) sinh(s_max/2)).
inline UnitPoint random_hyperbolic_point(Rng& rng, double s_max) {
    const double s = 2.0 * std::asinh(std::sqrt(rng.uniform()) * std::sinh(0.5 * s_max));
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return polar_point(euclidean_radius(s), t);
}

// n points, pairwise pseudohyperbolic distance >= min_rho (rejection).
inline std::vector<UnitPoint> random_distinct_points(Rng& rng, std::size_t n,
                                                     double rmax, double min_rho) {
    std::vector<UnitPoint> pts;
    pts.reserve(n);
    std::size_t attempts = 0;
    while (pts.size() < n) {
        if (++attempts > 20000 * (n + 1))
            throw DistinctnessError(
                "point separation rejection sampling did not terminate");
        UnitPoint cand = random_point(rng, rmax);
        bool ok = true;
        for (const auto& p : pts)
            if (rho(p, cand) < min_rho || coincident(p, cand)) {
                ok = false;
                break;
            }
        if (ok)
            pts.push_back(cand);
    }
    return pts;
}

inline MobiusAutomorphism random_automorphism(Rng& rng, double base_rmax) {
    UnitPoint base = random_point(rng, base_rmax);
    return MobiusAutomorphism(base, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

inline BlaschkeChain random_blaschke(Rng& rng, std::size_t degree, double zero_rmax) {
    std::vector<UnitPoint> zeros;
    zeros.reserve(degree);
    for (std::size_t j = 0; j < degree; ++j)
        zeros.push_back(random_point(rng, zero_rmax));
    return BlaschkeChain(rng.uniform(0.0, 2.0 * std::numbers::pi), std::move(zeros));
}

} // namespace hypick
