#pragma once

#include <span>
#include <vector>

#include "ccrlink/geometry.hpp"
#include "ccrlink/numerics.hpp"

namespace ccrlink::pointing {

/// Multiset of CCR indices (1-based, with repetition) selecting the factors
/// of a joint pointing-loss moment E[Z_{m_1} ... Z_{m_n0}]. Stored in
/// canonical nonincreasing order; 1 <= n0 <= 4.
class MomentIndex {
  public:
    MomentIndex(std::vector<int> indices, int m_total);

    const std::vector<int>& indices() const { return idx_; }
    int order() const { return static_cast<int>(idx_.size()); }

  private:
    std::vector<int> idx_;
};

/// Density of the single-CCR pointing loss at z_val, for a reflector at
/// boresight offset s_i. Support is (0, a0].
double pointing_pdf(double z_val, double s_i, double w, double sigma_s, double a0);

/// 2*nu-th moment of the Rayleigh distribution with scale sigma_s:
/// 2^nu * nu! * sigma_s^(2 nu).
double rayleigh_moment(int nu, double sigma_s);

/// Integral over a full period of a product of 2l cosines,
/// int_0^{2pi} prod_i cos(theta - eta_i) dtheta, by its closed combinatorial
/// form. The input length must be even and at most 8; products of an odd
/// number of cosines integrate to zero and are the caller's concern.
double cosine_product_integral(std::span<const double> etas);

/// Joint pointing-loss moment over the shared jitter vector, evaluated
/// through the Bessel-kernel integral (exact route).
double joint_moment_exact(const MomentIndex& idx, const geometry::CCRLayout& layout,
                          double w, double sigma_s, double a0,
                          const numerics::QuadratureSpec& spec = {});

/// Order of the per-reflector Taylor expansion underlying the combinatorial
/// (approximate) moment route.
enum class TaylorOrder { first, second };

/// Joint pointing-loss moment by the Taylor/combinatorial route. Supports
/// orders up to 4.
double joint_moment_approx(const MomentIndex& idx, const geometry::CCRLayout& layout,
                           double w, double sigma_s, double a0,
                           TaylorOrder order = TaylorOrder::second);

} // namespace ccrlink::pointing
