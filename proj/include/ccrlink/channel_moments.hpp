#pragma once

#include "ccrlink/geometry.hpp"
#include "ccrlink/numerics.hpp"
#include "ccrlink/pointing.hpp"

namespace ccrlink::channel {

/// Gamma-Gamma shape parameters shared by uplink and downlink, plus the
/// reciprocity correlation of the corresponding Gamma factors. Both Gamma
/// factors follow the unit-mean convention (scales 1/alpha1 and 1/beta1).
struct TurbulenceParams {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double rho_alpha = 0.0;
    double rho_beta = 0.0;

    void validate() const;
};

/// First, second and fourth moments of the normalized received power S.
struct MomentSet {
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;

    void validate() const; // m1 > 0, m2 >= m1^2, m4 >= m2^2
};

/// n-th moment of the composite two-way fading U = X Y for one reflector.
double u_moment(int n, const TurbulenceParams& params);

/// Route used for the joint pointing factors inside the moments of S.
enum class PointingMode { exact, taylor2, taylor1 };

/// n0-th moment of S = sum_i U_i Z_i, assembled over all compositions of n0
/// into per-reflector fading orders with the matching joint pointing moment.
double s_moment(int n0, const TurbulenceParams& params, const geometry::CCRLayout& layout,
                double w, double sigma_s, double a0, PointingMode mode,
                const numerics::QuadratureSpec& spec = {});

/// Moments of order 1, 2 and 4 in one call.
MomentSet s_moment_set(const TurbulenceParams& params, const geometry::CCRLayout& layout,
                       double w, double sigma_s, double a0, PointingMode mode,
                       const numerics::QuadratureSpec& spec = {});

} // namespace ccrlink::channel
