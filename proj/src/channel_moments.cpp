#include "ccrlink/channel_moments.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace ccrlink::channel {

namespace {

using numerics::hyp2f1_neg_int;
using numerics::ln_gamma_ratio;

// All compositions of n into m nonnegative parts.
std::vector<std::vector<int>> make_compositions(int n, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == m - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, n);
    return out;
}

const std::vector<std::vector<int>>& compositions(int n, int m) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.try_emplace({n, m});
    if (inserted) it->second = make_compositions(n, m);
    return it->second;
}

double multinomial(const std::vector<int>& parts) {
    double v = 1.0;
    int used = 0;
    for (int k : parts) {
        for (int j = 1; j <= k; ++j) {
            ++used;
            v *= static_cast<double>(used) / j;
        }
    }
    return v;
}

} // namespace

void TurbulenceParams::validate() const {
    if (!(alpha1 > 0.0) || !(beta1 > 0.0))
        throw domain_error("turbulence shapes alpha1 and beta1 must be > 0");
    if (!(rho_alpha >= 0.0 && rho_alpha < 1.0) || !(rho_beta >= 0.0 && rho_beta < 1.0))
        throw domain_error("turbulence correlations must be in [0, 1)");
}

void MomentSet::validate() const {
    if (!(m1 > 0.0))
        throw domain_error("moment set: m1 must be > 0");
    if (!(m2 >= m1 * m1))
        throw domain_error("moment set: m2 < m1^2 violates Jensen's inequality");
    if (!(m4 >= m2 * m2))
        throw domain_error("moment set: m4 < m2^2 violates Jensen's inequality");
}

double u_moment(int n, const TurbulenceParams& params) {
    if (n < 0)
        throw domain_error("u_moment requires n >= 0");
    params.validate();
    if (n == 0) return 1.0;
    const double a = params.alpha1;
    const double b = params.beta1;
    const double lg = 2.0 * ln_gamma_ratio(a, n) + 2.0 * ln_gamma_ratio(b, n) -
                      2.0 * n * (std::log(a) + std::log(b));
    return std::exp(lg) * hyp2f1_neg_int(n, a, params.rho_alpha) *
           hyp2f1_neg_int(n, b, params.rho_beta);
}

double s_moment(int n0, const TurbulenceParams& params, const geometry::CCRLayout& layout,
                double w, double sigma_s, double a0, PointingMode mode,
                const numerics::QuadratureSpec& spec) {
    if (n0 < 1)
        throw domain_error("s_moment requires n0 >= 1");
    params.validate();
    const int m = layout.size();

    std::vector<double> u_cache(n0 + 1);
    for (int k = 0; k <= n0; ++k)
        u_cache[k] = u_moment(k, params);

    // Permutation-equivalent compositions share the pointing factor; memoize
    // on the canonical sorted index multiset.
    std::map<std::vector<int>, double> z_cache;
    auto pointing_factor = [&](const std::vector<int>& comp) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < comp[i]; ++r)
                idx.push_back(i + 1);
        pointing::MomentIndex mi(std::move(idx), m);
        auto [it, inserted] = z_cache.try_emplace(mi.indices(), 0.0);
        if (inserted) {
            switch (mode) {
            case PointingMode::exact:
                it->second = pointing::joint_moment_exact(mi, layout, w, sigma_s, a0, spec);
                break;
            case PointingMode::taylor2:
                it->second = pointing::joint_moment_approx(mi, layout, w, sigma_s, a0,
                                                           pointing::TaylorOrder::second);
                break;
            case PointingMode::taylor1:
                it->second = pointing::joint_moment_approx(mi, layout, w, sigma_s, a0,
                                                           pointing::TaylorOrder::first);
                break;
            }
        }
        return it->second;
    };

    double total = 0.0, comp_kahan = 0.0;
    for (const auto& comp : compositions(n0, m)) {
        double term = multinomial(comp);
        for (int k : comp)
            term *= u_cache[k];
        term *= pointing_factor(comp);
        const double y = term - comp_kahan;
        const double t = total + y;
        comp_kahan = (t - total) - y;
        total = t;
    }
    return total;
}

MomentSet s_moment_set(const TurbulenceParams& params, const geometry::CCRLayout& layout,
                       double w, double sigma_s, double a0, PointingMode mode,
                       const numerics::QuadratureSpec& spec) {
    MomentSet ms;
    ms.m1 = s_moment(1, params, layout, w, sigma_s, a0, mode, spec);
    ms.m2 = s_moment(2, params, layout, w, sigma_s, a0, mode, spec);
    ms.m4 = s_moment(4, params, layout, w, sigma_s, a0, mode, spec);
    return ms;
}

} // namespace ccrlink::channel
