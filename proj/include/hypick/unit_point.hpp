#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "hypick/compensated.hpp"
#include "hypick/errors.hpp"
#include "hypick/tolerances.hpp"

namespace hypick {

using complex = std::complex<double>;

// A point of the open unit disc.  Construction validates |z| < 1, so every
// UnitPoint seen downstream is a legal argument for the hyperbolic metric.
class UnitPoint {
public:
    UnitPoint() : z_(0.0, 0.0) {}

    explicit UnitPoint(complex z) : z_(z) { validate(); }

    UnitPoint(double re, double im) : z_(re, im) { validate(); }

    complex value() const { return z_; }
    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }
    double abs() const { return std::abs(z_); }

private:
    void validate() const {
        if (!(std::norm(z_) < 1.0))
            throw DomainError("point with modulus " + std::to_string(std::abs(z_)) +
                              " is not inside the unit disc");
    }

    complex z_;
};

inline UnitPoint polar_point(double r, double theta) {
    return UnitPoint(r * std::cos(theta), r * std::sin(theta));
}

inline bool coincident(const UnitPoint& a, const UnitPoint& b) {
    return std::abs(a.value() - b.value()) <= coincidence_tol;
}

// Complex pseudohyperbolic distance [z, w] = (w - z) / (1 - conj(w) z).
// Note the order: the second argument appears in the numerator positively.
inline complex cp_distance(complex z, complex w) {
    return (w - z) / (1.0 - std::conj(w) * z);
}

inline complex cp_distance(const UnitPoint& z, const UnitPoint& w) {
    return cp_distance(z.value(), w.value());
}

// rho(z, w) = |[z, w]|, symmetric, a metric on the disc.
inline double rho(complex z, complex w) {
    return std::abs(cp_distance(z, w));
}

inline double rho(const UnitPoint& z, const UnitPoint& w) {
    return rho(z.value(), w.value());
}

// 1 - rho^2 = (1-|z|^2)(1-|w|^2) / |1 - conj(w) z|^2, evaluated without the
// boundary cancellation of computing rho first and subtracting from 1.
inline double one_minus_rho_sq(complex z, complex w) {
    return detail::one_minus_abs_sq(z) * detail::one_minus_abs_sq(w) /
           std::norm(1.0 - std::conj(w) * z);
}

// Hyperbolic distance beta = log((1+rho)/(1-rho)) = 2 atanh(rho), written
// as 2 log1p(rho) - log(1-rho^2) so it stays accurate when rho -> 1.
// Entries on or outside the circle give +infinity.
inline double beta(complex z, complex w) {
    const double r = rho(z, w);
    if (r == 0.0)
        return 0.0;
    const double omr2 = one_minus_rho_sq(z, w);
    if (!(omr2 > 0.0))
        return std::numeric_limits<double>::infinity();
    return 2.0 * std::log1p(r) - std::log(omr2);
}

inline double beta(const UnitPoint& z, const UnitPoint& w) {
    return beta(z.value(), w.value());
}

// Membership in the hyperbolic disc of the given radius about center.
inline bool in_hyperbolic_disc(const UnitPoint& z, const UnitPoint& center,
                               double radius) {
    if (!(radius > 0.0))
        throw DomainError("hyperbolic disc radius must be positive");
    return beta(z, center) < radius;
}

// Euclidean radius of the hyperbolic circle of radius s about the origin.
inline double euclidean_radius(double s) { return std::tanh(0.5 * s); }

} // namespace hypick
