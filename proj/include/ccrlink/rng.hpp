#pragma once

#include <cstdint>

namespace ccrlink::simulate {

/// Philox4x32-10 counter-based generator. A stream is addressed by
/// (seed, stream_id); draws within a stream consume successive counter
/// blocks. Streams for different ids are statistically independent, which is
/// what makes per-sample substreams reproducible regardless of how samples
/// are partitioned across workers.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_pos();

    /// Standard normal via Box-Muller (pairs cached).
    double next_normal();

  private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t buf_[4];
    int avail_ = 0; // unread 32-bit words in buf_
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Gamma(shape, 1) variate; Marsaglia-Tsang squeeze with the standard
/// shape < 1 boost.
double rand_gamma(Philox& rng, double shape);

/// Poisson(lambda) variate; inversion for small lambda, PTRS transformed
/// rejection for large.
std::uint64_t rand_poisson(Philox& rng, double lambda);

} // namespace ccrlink::simulate
