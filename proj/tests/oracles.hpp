#pragma once

// Independent reference implementations used only by the tests. These follow
// different algorithms than the library (Stirling series instead of Lanczos,
// Simpson instead of Gauss-Kronrod, term-by-term sums instead of recursions)
// so agreement is meaningful.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// ln Gamma by the Stirling series in long double, shifting small arguments up
// with the recurrence.
inline long double ln_gamma_stirling(long double x) {
    long double shift = 0.0L;
    while (x < 25.0L) {
        shift -= std::log(x);
        x += 1.0L;
    }
    const long double r = 1.0L / x;
    const long double r2 = r * r;
    long double corr = r / 12.0L;
    corr -= r * r2 / 360.0L;
    corr += r * r2 * r2 / 1260.0L;
    corr -= r * r2 * r2 * r2 / 1680.0L;
    corr += r * r2 * r2 * r2 * r2 / 1188.0L;
    return shift + (x - 0.5L) * std::log(x) - x +
           0.5L * std::log(2.0L * std::numbers::pi_v<long double>) + corr;
}

// Recursive adaptive Simpson in long double.
inline long double simpson_rec(const std::function<long double(long double)>& f,
                               long double a, long double b, long double fa,
                               long double fm, long double fb, long double whole,
                               long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const long double err = (left + right - whole) / 15.0L;
    if (depth <= 0 || std::abs(err) <= tol)
        return left + right + err;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

inline long double integrate_simpson(const std::function<long double(long double)>& f,
                                     long double a, long double b,
                                     long double tol = 1e-13L) {
    const long double fa = f(a);
    const long double fb = f(b);
    const long double fm = f(0.5L * (a + b));
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// e^{-x} I_0(x) by the defining power series in long double.
inline long double i0_scaled_series(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return std::exp(-x) * sum;
}

// e^{-x} I_0(x) by the large-argument asymptotic expansion.
inline long double i0_scaled_asymptotic(long double x) {
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 30; ++k) {
        const long double next =
            term * (2.0L * k + 1.0L) * (2.0L * k + 1.0L) / (8.0L * (k + 1.0L) * x);
        if (next >= term) break;
        term = next;
        sum += term;
    }
    return sum / std::sqrt(2.0L * std::numbers::pi_v<long double> * x);
}

// 2F1(-n,-n;a;rho) with every term built independently from factorials.
inline double hyp_term_sum(int n, double a, double rho) {
    auto pochhammer = [](double x, int k) {
        double v = 1.0;
        for (int j = 0; j < k; ++j) v *= x + j;
        return v;
    };
    auto factorial = [](int k) {
        double v = 1.0;
        for (int j = 2; j <= k; ++j) v *= j;
        return v;
    };
    // Sum in reverse order so the accumulation differs from the library's.
    double sum = 0.0;
    for (int k = n; k >= 0; --k) {
        const double neg = pochhammer(-static_cast<double>(n), k);
        sum += neg * neg / (pochhammer(a, k) * factorial(k)) * std::pow(rho, k);
    }
    return sum;
}

// Periodic trapezoid rule for the cosine-product integral.
inline double cosine_product_trapezoid(const std::vector<double>& etas, int nodes = 100000) {
    const double h = 2.0 * std::numbers::pi / nodes;
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double theta = i * h;
        double p = 1.0;
        for (double e : etas) p *= std::cos(theta - e);
        sum += p;
    }
    return sum * h;
}

} // namespace oracle
