#pragma once

#include <array>
#include <cstdint>

namespace cir {

// One keyed block of the Philox 4x32 generator, 10 rounds. Exposed so the
// known-answer vectors from the Random123 distribution can be checked
// directly against this implementation.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based stream generator. A stream is identified by
// (master_seed, stream_id); the draw position is a 64-bit block counter.
// Streams can therefore be created in any order, on any worker, and still
// produce exactly the same sequence, which is what makes the Monte Carlo
// results independent of the degree of parallelism.
class Rng {
  public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(master_seed),
               static_cast<std::uint32_t>(master_seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform strictly inside (0, 1); never returns an endpoint, so it is
    // safe under log().
    double u01();

  private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int avail_ = 0;  // unread lanes left in buffer_
};

// Standard normal via Box-Muller. Two uniforms per call, no retained state.
double sample_normal(Rng& rng);

// Unit-scale gamma, Marsaglia-Tsang squeeze for shape >= 1 with the usual
// boost for shape < 1. shape must be positive.
double sample_gamma(Rng& rng, double shape);

// Poisson count. Inversion for small means, Hormann's PTRS transformed
// rejection for large ones. mean = 0 returns 0 without consuming draws.
// Counts are returned as double (they stay well below 2^53).
double sample_poisson(Rng& rng, double mean);

// Fair coin as +1.0 / -1.0.
double sample_sign(Rng& rng);

}  // namespace cir
