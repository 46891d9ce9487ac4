#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccrlink/channel_moments.hpp"
#include "ccrlink/geometry.hpp"
#include "ccrlink/rng.hpp"

namespace ccrlink::simulate {

/// Resolved physical inputs that determine the distribution of S.
struct Scenario {
    geometry::CCRLayout layout;
    channel::TurbulenceParams turbulence;
    double w = 0.0;
    double sigma_s = 0.0;
    double a0 = 0.0;
};

struct SimulationPlan {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int workers = 1; // 0 = hardware concurrency
    Scenario scenario;
    std::vector<double> thresholds; // outage thresholds on S, i.e. P_th / c
};

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct SimSummary {
    MomentEstimate m1, m2, m4;
    std::vector<double> outage;    // per threshold, fraction of samples with S < thr
    std::vector<double> outage_se; // binomial standard errors
    std::uint64_t samples = 0;
};

/// One draw of the uplink/downlink composite fading pair (X, Y) for a single
/// reflector. Marginals are unit-mean Gamma-Gamma; the alpha and beta Gamma
/// factors of the two directions are correlated with exactly rho_alpha and
/// rho_beta, with joint moments matching u_moment.
std::pair<double, double> sample_correlated_gg(const channel::TurbulenceParams& params,
                                               Philox& rng);

/// One joint pointing realization: a single jitter vector displaces every
/// reflector, giving Z_i = a0 exp(-2 |s_i + d|^2 / w^2).
std::vector<double> sample_pointing(const geometry::CCRLayout& layout, double sigma_s,
                                    double w, double a0, Philox& rng);

/// Monte Carlo distribution summary of S = sum_i U_i Z_i. Deterministic for a
/// fixed (seed, samples) and invariant to the worker count: every sample has
/// its own counter-based substream, and partial sums are reduced over a fixed
/// chunk grid in chunk order.
SimSummary simulate_outage(const SimulationPlan& plan);

/// Downlink-only beacon baseline: P_R = h_a h_l h_p g_rx P_T with one
/// Gamma-Gamma fading draw, fixed atmospheric loss and zero-boresight jitter.
struct ConventionalBaseline {
    double p_t = 0.0;     // beacon transmit power [W]
    double w = 0.0;       // beacon footprint beamwidth [m]
    double a0 = 0.0;      // peak pointing gain
    double g_rx = 1.0;    // receive gain
    double h_ell = 1.0;   // one-way atmospheric loss
    double sigma_s = 0.0; // jitter std dev at the receive plane [m]
};

struct ConventionalPlan {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    channel::TurbulenceParams turbulence;
    ConventionalBaseline baseline;
    std::vector<double> thresholds; // on received power [W]
};

struct ConventionalSummary {
    std::vector<double> outage;
    std::vector<double> outage_se;
    std::uint64_t samples = 0;
};

ConventionalSummary conventional_outage(const ConventionalPlan& plan);

} // namespace ccrlink::simulate
