#include "ccrlink/rng.hpp"

#include <cmath>
#include <numbers>

#include "ccrlink/errors.hpp"
#include "ccrlink/numerics.hpp"

namespace ccrlink::simulate {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr[0] = hi1 ^ ctr[1] ^ key[0];
    ctr[1] = lo1;
    ctr[2] = hi0 ^ ctr[3] ^ key[1];
    ctr[3] = lo0;
}

} // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream_id) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = static_cast<std::uint32_t>(stream_id);
    ctr_[1] = static_cast<std::uint32_t>(stream_id >> 32);
    ctr_[2] = 0; // block counter within the stream
    ctr_[3] = 0;
}

void Philox::refill() {
    std::uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
    std::uint32_t k[2] = {key_[0], key_[1]};
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    buf_[0] = c[0];
    buf_[1] = c[1];
    buf_[2] = c[2];
    buf_[3] = c[3];
    avail_ = 4;
    if (++ctr_[2] == 0) ++ctr_[3];
}

std::uint64_t Philox::next_u64() {
    if (avail_ < 2) refill();
    const std::uint64_t lo = buf_[4 - avail_];
    const std::uint64_t hi = buf_[4 - avail_ + 1];
    avail_ -= 2;
    return lo | (hi << 32);
}

double Philox::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_double_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Philox::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = next_double_pos();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

double rand_gamma(Philox& rng, double shape) {
    if (!(shape > 0.0))
        throw domain_error("rand_gamma requires shape > 0");
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a + 1) * U^{1/a}
        const double boost = std::pow(rng.next_double_pos(), 1.0 / shape);
        return rand_gamma(rng, shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_double_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::uint64_t rand_poisson(Philox& rng, double lambda) {
    if (!(lambda >= 0.0))
        throw domain_error("rand_poisson requires lambda >= 0");
    if (lambda == 0.0) return 0;
    if (lambda < 10.0) {
        // Multiplicative inversion.
        const double limit = std::exp(-lambda);
        std::uint64_t n = 0;
        double prod = rng.next_double();
        while (prod > limit) {
            ++n;
            prod *= rng.next_double();
        }
        return n;
    }
    // PTRS transformed rejection (Hormann).
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.next_double() - 0.5;
        const double v = rng.next_double();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * std::log(lambda) - lambda - numerics::ln_gamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace ccrlink::simulate
