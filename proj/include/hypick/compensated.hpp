#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>

namespace hypick::detail {

// Neumaier-compensated sum; error stays O(eps^2 * condition) instead of
// O(eps * condition), which matters for the near-boundary cancellations
// below.
inline double compensated_sum(std::initializer_list<double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

// 1 - |z|^2 without cancellation.  Near the unit circle the naive
// expression loses half the significand; the fma residues recover it.
inline double one_minus_abs_sq(std::complex<double> z) {
    const double x = z.real(), y = z.imag();
    const double a = x * x, ea = std::fma(x, x, -a);
    const double b = y * y, eb = std::fma(y, y, -b);
    return compensated_sum({1.0, -a, -b, -ea, -eb});
}

// 1 - s^2 |z|^2, same treatment (used by the scaled family r*z).
inline double one_minus_scaled_abs_sq(double s, std::complex<double> z) {
    const double s2 = s * s, es = std::fma(s, s, -s2);
    const double x = z.real(), y = z.imag();
    const double a = x * x, ea = std::fma(x, x, -a);
    const double b = y * y, eb = std::fma(y, y, -b);
    const double n = a + b;
    // s^2*|z|^2 = (s2+es)*(n+err); the first-order pieces are enough here
    // since |es|, |ea|, |eb| <= eps * O(1).
    const double p = s2 * n, ep = std::fma(s2, n, -p);
    return compensated_sum({1.0, -p, -ep, -es * n, -s2 * ea, -s2 * eb});
}

} // namespace hypick::detail
