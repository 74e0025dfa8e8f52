#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "hypick/errors.hpp"
#include "hypick/self_map.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

// Disc automorphism tau(z) = e^{i phase} (z - base) / (1 - conj(base) z).
//
// Composition and inversion go through the matrix form
//     [ a  b ]            a = e^{i phase/2},
//     [ b~ a~ ]           b = -a * base,        (~ = conjugate)
// acting as z -> (a z + b) / (b~ z + a~); the group law is then plain
// matrix multiplication, and |a| > |b| encodes base inside the disc.
class MobiusAutomorphism {
public:
    MobiusAutomorphism() : base_(), phase_(0.0) {}

    MobiusAutomorphism(UnitPoint base, double phase)
        : base_(base), phase_(normalize_phase(phase)) {}

    static MobiusAutomorphism identity() { return MobiusAutomorphism(); }

    const UnitPoint& base() const { return base_; }
    double phase() const { return phase_; }

    complex value(complex z) const {
        return unit_factor() * (z - base_.value()) /
               (1.0 - std::conj(base_.value()) * z);
    }

    // tau'(z) = e^{i phase} (1 - |base|^2) / (1 - conj(base) z)^2
    complex derivative(complex z) const {
        const complex d = 1.0 - std::conj(base_.value()) * z;
        return unit_factor() * detail::one_minus_abs_sq(base_.value()) / (d * d);
    }

    // 1 - |tau(z)|^2 = (1-|base|^2)(1-|z|^2) / |1 - conj(base) z|^2
    double one_minus_abs_value_sq(complex z) const {
        return one_minus_rho_sq(z, base_.value());
    }

    UnitPoint apply(const UnitPoint& z) const { return UnitPoint(value(z.value())); }

    MobiusAutomorphism inverse() const {
        complex a, b;
        to_matrix(a, b);
        return from_matrix(std::conj(a), -b);
    }

    std::string describe() const {
        return "automorphism(base=" + detail::fmt_complex(base_.value()) +
               ", phase=" + std::to_string(phase_) + ")";
    }

    // (lhs * rhs)(z) = lhs(rhs(z))
    friend MobiusAutomorphism operator*(const MobiusAutomorphism& lhs,
                                        const MobiusAutomorphism& rhs) {
        complex a1, b1, a2, b2;
        lhs.to_matrix(a1, b1);
        rhs.to_matrix(a2, b2);
        return from_matrix(a1 * a2 + b1 * std::conj(b2),
                           a1 * b2 + b1 * std::conj(a2));
    }

    // Named constructor from the first row (a, b) of a unit-determinant
    // matrix representative; requires |b| < |a|.
    static MobiusAutomorphism from_matrix(complex a, complex b) {
        if (!(std::abs(b) < std::abs(a)))
            throw DomainError("matrix pair does not describe a disc automorphism");
        return MobiusAutomorphism(UnitPoint(-b / a), 2.0 * std::arg(a));
    }

private:
    static double normalize_phase(double phi) {
        const double two_pi = 2.0 * std::numbers::pi;
        double m = std::fmod(phi, two_pi);
        if (m < 0.0)
            m += two_pi;
        if (m >= two_pi)
            m = 0.0;
        return m;
    }

    complex unit_factor() const { return std::polar(1.0, phase_); }

    void to_matrix(complex& a, complex& b) const {
        a = std::polar(1.0, 0.5 * phase_);
        b = -a * base_.value();
    }

    UnitPoint base_;
    double phase_;
};

} // namespace hypick
