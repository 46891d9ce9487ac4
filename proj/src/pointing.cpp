#include "ccrlink/pointing.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

namespace ccrlink::pointing {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sum f over ordered tuples of `arity` distinct indices from {0, ..., n-1}.
template <typename F>
double sym_sum(int n, int arity, F&& f) {
    std::array<int, 4> k{};
    std::array<bool, 4> used{};
    double total = 0.0;
    std::function<void(int)> rec = [&](int depth) {
        if (depth == arity) {
            total += f(k);
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            k[depth] = i;
            rec(depth + 1);
            used[i] = false;
        }
    };
    if (arity <= n) rec(0);
    return total;
}

struct Factors {
    // Per selected reflector: boresight radius, angle, and the Taylor
    // coefficients of the beam profile around the boresight point.
    std::vector<double> s, phi, a, b;
    double w2;

    explicit Factors(const MomentIndex& idx, const geometry::CCRLayout& layout, double w) {
        w2 = w * w;
        for (int m : idx.indices()) {
            const double si = layout.radius(m - 1);
            s.push_back(si);
            phi.push_back(layout.angle(m - 1));
            a.push_back(-4.0 * si / w2);
            b.push_back(8.0 * si * si / (w2 * w2));
        }
    }
};

double cosC(std::initializer_list<double> etas) {
    std::vector<double> v(etas);
    return cosine_product_integral(v);
}

// Second-order polynomial factors P^(2 nu) of the combinatorial moment for
// nu = 0..4. The sums run over ordered tuples of distinct positions in the
// index multiset, with 1/j! prefactors compensating the orderings.
double p_poly(int nu, const Factors& fc) {
    const int n0 = static_cast<int>(fc.s.size());
    const auto& s = fc.s;
    const auto& phi = fc.phi;
    const auto& a = fc.a;
    const auto& b = fc.b;
    const double w2 = fc.w2;

    switch (nu) {
    case 0:
        return kTwoPi;
    case 1:
        return sym_sum(n0, 2, [&](const std::array<int, 4>& k) {
                   return 0.5 * a[k[0]] * a[k[1]] * cosC({phi[k[0]], phi[k[1]]});
               }) +
               sym_sum(n0, 1, [&](const std::array<int, 4>& k) {
                   return b[k[0]] * cosC({phi[k[0]], phi[k[0]]}) - 4.0 * kPi / w2;
               });
    case 2:
        return sym_sum(n0, 4, [&](const std::array<int, 4>& k) {
                   return (1.0 / 24.0) * a[k[0]] * a[k[1]] * a[k[2]] * a[k[3]] *
                          cosC({phi[k[0]], phi[k[1]], phi[k[2]], phi[k[3]]});
               }) +
               sym_sum(n0, 3, [&](const std::array<int, 4>& k) {
                   return 0.5 * a[k[0]] * a[k[1]] *
                          (b[k[2]] * cosC({phi[k[0]], phi[k[1]], phi[k[2]], phi[k[2]]}) -
                           (2.0 / w2) * cosC({phi[k[0]], phi[k[1]]}));
               }) +
               sym_sum(n0, 2, [&](const std::array<int, 4>& k) {
                   return 0.5 * b[k[0]] * b[k[1]] *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]]}) -
                          (16.0 / (w2 * w2 * w2)) * s[k[0]] * s[k[0]] *
                              cosC({phi[k[0]], phi[k[0]]}) +
                          0.5 * 8.0 * kPi / (w2 * w2);
               });
    case 3:
        return sym_sum(n0, 4, [&](const std::array<int, 4>& k) {
                   return 0.5 * a[k[0]] * a[k[1]] *
                          (0.5 * b[k[2]] * b[k[3]] *
                               cosC({phi[k[0]], phi[k[1]], phi[k[2]], phi[k[2]],
                                     phi[k[3]], phi[k[3]]}) -
                           (16.0 / (w2 * w2 * w2)) * s[k[2]] * s[k[2]] *
                               cosC({phi[k[0]], phi[k[1]], phi[k[2]], phi[k[2]]}) +
                           0.5 * (4.0 / (w2 * w2)) * cosC({phi[k[0]], phi[k[1]]}));
               }) +
               sym_sum(n0, 3, [&](const std::array<int, 4>& k) {
                   return (1.0 / 6.0) * b[k[0]] * b[k[1]] * b[k[2]] *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]],
                                    phi[k[2]], phi[k[2]]}) +
                          0.5 * b[k[0]] * b[k[1]] * (-2.0 / w2) *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]]}) +
                          0.5 * (32.0 / (w2 * w2 * w2 * w2)) * s[k[0]] * s[k[0]] *
                              cosC({phi[k[0]], phi[k[0]]}) -
                          (1.0 / 6.0) * 16.0 * kPi / (w2 * w2 * w2);
               });
    case 4:
        return sym_sum(n0, 4, [&](const std::array<int, 4>& k) {
            const double c1 = (1.0 / 24.0) * b[k[0]] * b[k[1]] * b[k[2]] * b[k[3]] *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]],
                                    phi[k[2]], phi[k[2]], phi[k[3]], phi[k[3]]});
            const double c2 = (1.0 / 6.0) * b[k[0]] * b[k[1]] * b[k[2]] * (-2.0 / w2) *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]],
                                    phi[k[2]], phi[k[2]]});
            const double c3 = 0.25 * b[k[0]] * b[k[1]] * (4.0 / (w2 * w2)) *
                              cosC({phi[k[0]], phi[k[0]], phi[k[1]], phi[k[1]]});
            const double c4 = -(1.0 / 6.0) * (64.0 / (w2 * w2 * w2 * w2 * w2)) *
                              s[k[0]] * s[k[0]] * cosC({phi[k[0]], phi[k[0]]});
            const double c5 = kTwoPi * (1.0 / 24.0) * 16.0 / (w2 * w2 * w2 * w2);
            return c1 + c2 + c3 + c4 + c5;
        });
    default:
        return 0.0;
    }
}

// Same combinatorics when each beam-profile factor is expanded only to first
// order in the displacement: only products of distinct linear terms survive.
double q_poly(int nu, const Factors& fc) {
    const int n0 = static_cast<int>(fc.s.size());
    const auto& phi = fc.phi;
    const auto& a = fc.a;
    switch (nu) {
    case 0:
        return kTwoPi;
    case 1:
        return sym_sum(n0, 2, [&](const std::array<int, 4>& k) {
            return 0.5 * a[k[0]] * a[k[1]] * cosC({phi[k[0]], phi[k[1]]});
        });
    case 2:
        return sym_sum(n0, 4, [&](const std::array<int, 4>& k) {
            return (1.0 / 24.0) * a[k[0]] * a[k[1]] * a[k[2]] * a[k[3]] *
                   cosC({phi[k[0]], phi[k[1]], phi[k[2]], phi[k[3]]});
        });
    default:
        return 0.0;
    }
}

} // namespace

MomentIndex::MomentIndex(std::vector<int> indices, int m_total) {
    if (indices.empty() || indices.size() > 4)
        throw domain_error("moment index order must be between 1 and 4");
    for (int m : indices)
        if (m < 1 || m > m_total)
            throw domain_error("moment index refers to a CCR outside the layout");
    std::sort(indices.begin(), indices.end(), std::greater<>());
    idx_ = std::move(indices);
}

double pointing_pdf(double z_val, double s_i, double w, double sigma_s, double a0) {
    if (!(sigma_s > 0.0))
        throw domain_error("pointing_pdf requires sigma_s > 0");
    if (!(z_val > 0.0) || z_val > a0)
        throw domain_error("pointing_pdf argument outside the support (0, a0]");
    const double gamma = w * w / (4.0 * sigma_s * sigma_s);
    const double log_ratio = std::log(z_val / a0); // <= 0
    const double arg = (s_i / (sigma_s * sigma_s)) *
                       std::sqrt(-0.5 * w * w * log_ratio);
    const double log_pdf = std::log(gamma) - std::log(z_val) + gamma * log_ratio -
                           s_i * s_i / (2.0 * sigma_s * sigma_s) + arg +
                           std::log(numerics::bessel_i0_scaled(arg));
    return std::exp(log_pdf);
}

double rayleigh_moment(int nu, double sigma_s) {
    if (nu < 0)
        throw domain_error("rayleigh_moment requires nu >= 0");
    if (nu == 0) return 1.0;
    double v = 1.0;
    for (int k = 1; k <= nu; ++k)
        v *= 2.0 * k; // 2^nu * nu!
    return v * std::pow(sigma_s, 2.0 * nu);
}

double cosine_product_integral(std::span<const double> etas) {
    const int n = static_cast<int>(etas.size());
    if (n % 2 != 0)
        throw domain_error("cosine_product_integral requires an even number of angles");
    if (n > 8)
        throw domain_error("cosine_product_integral supports at most 8 angles");
    if (n == 0) return kTwoPi;
    const int l = n / 2;
    // The ordered-tuple sum collapses to subsets: the summand depends only on
    // which l indices carry the positive sign, and the (l!)^2 orderings cancel
    // the 1/(l!)^2 prefactor.
    double sum = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != l) continue;
        double argdiff = 0.0;
        for (int i = 0; i < n; ++i)
            argdiff += (mask >> i) & 1u ? etas[i] : -etas[i];
        sum += std::cos(argdiff);
    }
    return kTwoPi / std::pow(2.0, 2 * l) * sum;
}

double joint_moment_exact(const MomentIndex& idx, const geometry::CCRLayout& layout,
                          double w, double sigma_s, double a0,
                          const numerics::QuadratureSpec& spec) {
    if (!(sigma_s >= 0.0))
        throw domain_error("joint_moment_exact requires sigma_s >= 0");
    const int n0 = idx.order();
    double sum_s2 = 0.0, kx = 0.0, ky = 0.0;
    for (int m : idx.indices()) {
        const double si = layout.radius(m - 1);
        const auto& p = layout.positions()[m - 1];
        sum_s2 += si * si;
        kx += p.x; // vector sum avoids cancellation in the two squared sums
        ky += p.y;
    }
    const double pref = std::pow(a0, n0) * std::exp(-2.0 * sum_s2 / (w * w));
    if (sigma_s == 0.0) return pref;

    const double kcoef = 4.0 / (w * w) * std::hypot(kx, ky);
    const double decay = 2.0 * n0 / (w * w) + 1.0 / (2.0 * sigma_s * sigma_s);
    const double inv_var = 1.0 / (sigma_s * sigma_s);
    auto integrand = [=](double d) {
        const double arg = kcoef * d;
        const double log_val = -decay * d * d + arg +
                               std::log(numerics::bessel_i0_scaled(arg));
        return std::exp(log_val) * d * inv_var;
    };

    // The integrand peaks at delta ~ sigma_s and is numerically zero past
    // max(10 sigma_s, 10 w); geometric breakpoints let the subdivision find
    // the peak at any scale separation.
    const double delta_max = std::max(10.0 * sigma_s, 10.0 * w);
    std::vector<double> breaks;
    for (double e = 0.25 * sigma_s; e < delta_max; e *= 4.0)
        breaks.push_back(e);
    breaks.push_back(delta_max);
    return pref * numerics::integrate_semi_infinite(integrand, spec, breaks);
}

double joint_moment_approx(const MomentIndex& idx, const geometry::CCRLayout& layout,
                           double w, double sigma_s, double a0, TaylorOrder order) {
    if (!(sigma_s >= 0.0))
        throw domain_error("joint_moment_approx requires sigma_s >= 0");
    const int n0 = idx.order();
    const Factors fc(idx, layout, w);
    double sum_s2 = 0.0;
    for (double si : fc.s) sum_s2 += si * si;
    const double pref = std::pow(a0, n0) * std::exp(-2.0 * sum_s2 / (w * w));

    double acc = 0.0;
    for (int nu = 0; nu <= n0; ++nu) {
        const double poly = order == TaylorOrder::second ? p_poly(nu, fc) : q_poly(nu, fc);
        if (poly != 0.0)
            acc += rayleigh_moment(nu, sigma_s) * poly;
    }
    return pref / kTwoPi * acc;
}

} // namespace ccrlink::pointing
