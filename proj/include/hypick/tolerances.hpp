#pragma once

namespace hypick {

// Shared numeric thresholds.  Every module reads these; tests pin the same
// values, so changing one here is an interface change.

// Two points are treated as coincident below this Euclidean distance.
inline constexpr double coincidence_tol = 1e-14;

// A quotient with modulus >= 1 - unimodular_tol is treated as sitting on
// the unit circle (saturated / degenerate for further division).
inline constexpr double unimodular_tol = 1e-12;

// | |q| - 1 | <= boundary_band flags the boundary-uniqueness regime, while
// |q| > 1 + boundary_band is a definite violation.
inline constexpr double boundary_band = 1e-10;

// Pick matrix: PSD iff min eigenvalue >= -psd_tol; strictly definite only
// above pd_margin.  The gap between them is reported as indeterminate.
inline constexpr double psd_tol = 1e-10;
inline constexpr double pd_margin = 1e-9;

// Hermitian symmetry deviation tolerated before ShapeError.
inline constexpr double hermitian_tol = 1e-10;

// Difference quotients switch to the limit (hyperbolic derivative) form
// below hyperbolic distance limit_switch; inside [limit_switch, limit_band]
// the direct and limit forms are both computed and must agree.
inline constexpr double limit_switch = 1e-6;
inline constexpr double limit_band = 1e-4;
inline constexpr double limit_band_agree = 1e-5;

// Interpolation residual accepted as "interpolates".
inline constexpr double residual_tol = 1e-9;

} // namespace hypick
