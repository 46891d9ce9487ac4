#pragma once

#include <functional>
#include <span>

#include "ccrlink/errors.hpp"

namespace ccrlink::numerics {

/// Controls for the adaptive quadrature routines.
struct QuadratureSpec {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-14;
    int max_subdivisions = 2000;

    void validate() const;
};

/// ln Gamma(x) for x > 0. Lanczos approximation, relative error <= 1e-14.
double ln_gamma(double x);

/// ln Gamma(x + delta) - ln Gamma(x) for x > 0, x + delta > 0.
/// For large x this is evaluated by a Stirling-series difference so that the
/// result keeps full precision even when both log-gammas are ~1e6 and the
/// difference is O(1).
double ln_gamma_ratio(double x, double delta);

/// Regularized lower incomplete gamma P(a, x) = (1/Gamma(a)) \int_0^x t^{a-1} e^{-t} dt.
/// Monotone nondecreasing in x, range [0, 1].
double reg_lower_incomplete_gamma(double a, double x);

/// Exponentially scaled modified Bessel function e^{-x} I_0(x) for x >= 0.
/// Never overflows; output in (0, 1].
double bessel_i0_scaled(double x);

/// Terminating Gauss hypergeometric 2F1(-n, -n; a; rho) for integer n >= 0,
/// a > 0 and 0 <= rho < 1, evaluated as the finite series
///   sum_{k=0}^{n} [((-n)_k)^2 / ((a)_k k!)] rho^k .
/// Result is always >= 1.
double hyp2f1_neg_int(int n, double a, double rho);

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec);

/// Integral of f over [0, inf) for integrands that eventually decay
/// exponentially. The axis is split at the given breakpoints (ascending,
/// positive); beyond the last breakpoint, intervals keep doubling until two
/// consecutive segments contribute below tolerance. Deterministic for a
/// fixed spec.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec,
                               std::span<const double> breakpoints = {});

} // namespace ccrlink::numerics
