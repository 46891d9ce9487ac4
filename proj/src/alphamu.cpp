#include "ccrlink/alphamu.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ccrlink/numerics.hpp"

namespace ccrlink::alphamu {

namespace {

using numerics::ln_gamma;
using numerics::ln_gamma_ratio;
using numerics::reg_lower_incomplete_gamma;

// ln[ Gamma(mu) Gamma(mu + 2u) / Gamma(mu + u)^2 ], the log of the second
// difference driving both ratio equations. Written as a difference of
// ln-gamma ratios so no O(mu ln mu) terms ever cancel.
double log_second_diff(double mu, double u) {
    return ln_gamma_ratio(mu + u, u) - ln_gamma_ratio(mu, u);
}

struct RatioTargets {
    double lt1; // log1p((m2 - m1^2) / m1^2)
    double lt2; // log1p((m4 - m2^2) / m2^2)
};

// Residuals of the two moment-ratio equations at x = (ln alpha, ln mu).
std::array<double, 2> residual(const std::array<double, 2>& x, const RatioTargets& t) {
    const double inv_alpha = std::exp(-x[0]);
    const double mu = std::exp(x[1]);
    return {log_second_diff(mu, inv_alpha) - t.lt1,
            log_second_diff(mu, 2.0 * inv_alpha) - t.lt2};
}

double norm2(const std::array<double, 2>& f) {
    return std::sqrt(f[0] * f[0] + f[1] * f[1]);
}

// Relative residual of the equations in their printed ratio form,
// |g_i / t_i - 1|, derived from the log-form residuals.
double rel_residual(const std::array<double, 2>& f, const RatioTargets& t) {
    const double r1 = std::abs(std::expm1(f[0])) / -std::expm1(-t.lt1);
    const double r2 = std::abs(std::expm1(f[1])) / -std::expm1(-t.lt2);
    return std::max(r1, r2);
}

} // namespace

void AlphaMuParams::validate() const {
    if (!(alpha > 0.0) || !(mu > 0.0) || !(r_hat > 0.0))
        throw domain_error("alpha-mu parameters must all be strictly positive");
}

double pdf(double r, const AlphaMuParams& p) {
    p.validate();
    if (!(r >= 0.0))
        throw domain_error("alpha-mu pdf requires r >= 0");
    if (r == 0.0) {
        const double am = p.alpha * p.mu;
        if (am > 1.0) return 0.0;
        if (am < 1.0) return std::numeric_limits<double>::infinity();
        return std::exp(std::log(p.alpha) + p.mu * std::log(p.mu) -
                        am * std::log(p.r_hat) - ln_gamma(p.mu));
    }
    const double lr = std::log(r) - std::log(p.r_hat);
    const double z = p.mu * std::exp(p.alpha * lr); // mu (r/r_hat)^alpha
    const double log_pdf = std::log(p.alpha) + p.mu * std::log(p.mu) +
                           (p.alpha * p.mu - 1.0) * std::log(r) -
                           p.alpha * p.mu * std::log(p.r_hat) - ln_gamma(p.mu) - z;
    return std::exp(log_pdf);
}

double cdf(double r, const AlphaMuParams& p) {
    p.validate();
    if (!(r >= 0.0))
        throw domain_error("alpha-mu cdf requires r >= 0");
    if (r == 0.0) return 0.0;
    const double lr = std::log(r) - std::log(p.r_hat);
    const double z = p.mu * std::exp(p.alpha * lr);
    if (std::isinf(z)) return 1.0;
    return reg_lower_incomplete_gamma(p.mu, z);
}

double moment(double k, const AlphaMuParams& p) {
    p.validate();
    if (!(p.mu + k / p.alpha > 0.0))
        throw domain_error("alpha-mu moment requires mu + k/alpha > 0");
    const double u = k / p.alpha;
    return std::exp(k * std::log(p.r_hat) + ln_gamma_ratio(p.mu, u) - u * std::log(p.mu));
}

AlphaMuParams fit_alpha_mu(const channel::MomentSet& moments, FitDiagnostics* diag) {
    moments.validate();
    const double var1 = moments.m2 - moments.m1 * moments.m1;
    const double var2 = moments.m4 - moments.m2 * moments.m2;
    if (!(var1 > 0.0) || !(var2 > 0.0))
        throw domain_error("degenerate moments: m2 = m1^2 or m4 = m2^2 admits no fit");
    RatioTargets t{std::log1p(var1 / (moments.m1 * moments.m1)),
                   std::log1p(var2 / (moments.m2 * moments.m2))};

    int iterations = 0;
    auto newton = [&](std::array<double, 2> x) -> std::array<double, 3> {
        // returns {ln alpha, ln mu, rel residual}; residual = inf on divergence
        for (int it = 0; it < 200; ++it) {
            ++iterations;
            auto f = residual(x, t);
            const double rr = rel_residual(f, t);
            if (rr < 1e-10) return {x[0], x[1], rr};
            const double nf = norm2(f);
            // forward/backward differenced Jacobian
            double jac[2][2];
            for (int j = 0; j < 2; ++j) {
                const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
                auto xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const auto fp = residual(xp, t);
                const auto fm = residual(xm, t);
                jac[0][j] = (fp[0] - fm[0]) / (2.0 * h);
                jac[1][j] = (fp[1] - fm[1]) / (2.0 * h);
            }
            const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if (det == 0.0 || !std::isfinite(det))
                return {x[0], x[1], rel_residual(residual(x, t), t)};
            const double dx0 = (-f[0] * jac[1][1] + f[1] * jac[0][1]) / det;
            const double dx1 = (-jac[0][0] * f[1] + jac[1][0] * f[0]) / det;
            double lambda = 1.0;
            bool stepped = false;
            for (int back = 0; back < 60; ++back) {
                std::array<double, 2> xn{x[0] + lambda * dx0, x[1] + lambda * dx1};
                if (std::abs(xn[0]) < 700.0 && std::abs(xn[1]) < 700.0) {
                    const auto fn = residual(xn, t);
                    if (std::isfinite(fn[0]) && std::isfinite(fn[1]) &&
                        norm2(fn) < (1.0 - 1e-4 * lambda) * nf) {
                        x = xn;
                        stepped = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!stepped)
                return {x[0], x[1], rel_residual(residual(x, t), t)};
        }
        return {x[0], x[1], rel_residual(residual(x, t), t)};
    };

    auto finish = [&](double ln_alpha, double ln_mu, double rr,
                      bool fallback) -> AlphaMuParams {
        AlphaMuParams p;
        p.alpha = std::exp(ln_alpha);
        p.mu = std::exp(ln_mu);
        const double u = 1.0 / p.alpha;
        // Eq.-(22)-style scale, in log space: mu^{1/alpha} Gamma(mu) m1 / Gamma(mu + 1/alpha)
        p.r_hat = std::exp(u * ln_mu - ln_gamma_ratio(p.mu, u) + std::log(moments.m1));
        if (diag) {
            diag->iterations = iterations;
            diag->residual = rr;
            diag->used_grid_fallback = fallback;
        }
        return p;
    };

    auto res = newton({std::log(2.0), std::log(1.0)});
    if (res[2] < 1e-10)
        return finish(res[0], res[1], res[2], false);

    // Coarse log-grid reseed over [1e-1, 1e2]^2.
    double best_norm = std::numeric_limits<double>::infinity();
    std::array<double, 2> best{};
    for (int i = 0; i < 25; ++i) {
        for (int j = 0; j < 25; ++j) {
            std::array<double, 2> x{std::log(0.1) + i * (std::log(100.0) - std::log(0.1)) / 24.0,
                                    std::log(0.1) + j * (std::log(100.0) - std::log(0.1)) / 24.0};
            const auto f = residual(x, t);
            const double nf = norm2(f);
            if (nf < best_norm) {
                best_norm = nf;
                best = x;
            }
        }
    }
    auto res2 = newton(best);
    if (res2[2] < 1e-10)
        return finish(res2[0], res2[1], res2[2], true);

    throw estimation_error("alpha-mu moment matching did not converge",
                           std::min(res[2], res2[2]));
}

double outage_probability(double p_th, double c, const AlphaMuParams& p) {
    if (!(p_th > 0.0) || !(c > 0.0))
        throw domain_error("outage_probability requires p_th > 0 and c > 0");
    return cdf(p_th / c, p);
}

} // namespace ccrlink::alphamu
