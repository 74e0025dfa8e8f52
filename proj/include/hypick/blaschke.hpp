#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hypick/self_map.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

// Finite Blaschke product B(z) = e^{i phase} prod_j (z_j - z)/(1 - conj(z_j) z).
// Degree 0 is the unimodular constant e^{i phase}.
class BlaschkeChain {
public:
    BlaschkeChain() : phase_(0.0) {}

    BlaschkeChain(double phase, std::vector<UnitPoint> zeros)
        : phase_(phase), zeros_(std::move(zeros)) {}

    std::size_t degree() const { return zeros_.size(); }
    double phase() const { return phase_; }
    const std::vector<UnitPoint>& zeros() const { return zeros_; }

    complex value(complex z) const {
        complex p = std::polar(1.0, phase_);
        for (const auto& a : zeros_)
            p *= factor(a.value(), z);
        return p;
    }

    // Product rule over the factors; each factor's derivative is
    // (|z_j|^2 - 1) / (1 - conj(z_j) z)^2.  Quadratic in the degree,
    // exact everywhere (including at multiple zeros).
    complex derivative(complex z) const {
        complex sum(0.0, 0.0);
        for (std::size_t j = 0; j < zeros_.size(); ++j) {
            complex term = factor_derivative(zeros_[j].value(), z);
            for (std::size_t i = 0; i < zeros_.size(); ++i)
                if (i != j)
                    term *= factor(zeros_[i].value(), z);
            sum += term;
        }
        return std::polar(1.0, phase_) * sum;
    }

    // 1 - |B(z)|^2 via 1 - prod_j (1 - d_j), d_j = 1 - rho(z, z_j)^2,
    // assembled with log1p/expm1 so it survives |B(z)| -> 1.
    double one_minus_abs_value_sq(complex z) const {
        double log_prod = 0.0;
        for (const auto& a : zeros_)
            log_prod += std::log1p(-one_minus_rho_sq(z, a.value()));
        return -std::expm1(log_prod);
    }

    std::string describe() const {
        return "blaschke(degree=" + std::to_string(zeros_.size()) +
               ", phase=" + std::to_string(phase_) + ")";
    }

private:
    static complex factor(complex a, complex z) {
        return (a - z) / (1.0 - std::conj(a) * z);
    }
    static complex factor_derivative(complex a, complex z) {
        const complex d = 1.0 - std::conj(a) * z;
        return (std::norm(a) - 1.0) / (d * d);
    }

    double phase_;
    std::vector<UnitPoint> zeros_;
};

} // namespace hypick
