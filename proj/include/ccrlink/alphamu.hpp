#pragma once

#include "ccrlink/channel_moments.hpp"
#include "ccrlink/errors.hpp"

namespace ccrlink::alphamu {

/// Parameter triple of the alpha-mu distribution. For heavily averaged
/// channels the matched parameters can be extreme (alpha ~ 1e-3, mu ~ 1e6,
/// approaching the lognormal limit); all evaluation paths stay in log space
/// where needed.
struct AlphaMuParams {
    double alpha = 0.0;
    double mu = 0.0;
    double r_hat = 0.0;

    void validate() const;
};

double pdf(double r, const AlphaMuParams& p);
double cdf(double r, const AlphaMuParams& p);

/// k-th moment: r_hat^k Gamma(mu + k/alpha) / (mu^{k/alpha} Gamma(mu)).
double moment(double k, const AlphaMuParams& p);

struct FitDiagnostics {
    int iterations = 0;
    double residual = 0.0;      // max relative residual of the two ratio equations
    bool used_grid_fallback = false;
};

/// Matches (alpha, mu, r_hat) to the 1st/2nd/4th moments by a damped Newton
/// iteration on (ln alpha, ln mu) with a numerically differenced Jacobian,
/// starting from (2, 1) and reseeding from a coarse log-grid search over
/// [1e-1, 1e2]^2 on divergence. Succeeds only when both ratio equations hold
/// to a relative residual below 1e-10.
AlphaMuParams fit_alpha_mu(const channel::MomentSet& moments,
                           FitDiagnostics* diag = nullptr);

/// Outage probability Prob[S < p_th / c] under the fitted distribution.
double outage_probability(double p_th, double c, const AlphaMuParams& p);

} // namespace ccrlink::alphamu
