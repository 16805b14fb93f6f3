#pragma once

#include <cmath>
#include <cstdint>

namespace sirdiv {

namespace detail {

// splitmix64 step; used both as a stream mixer and to seed xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// xoshiro256++ generator whose state is a pure function of (seed, stream).
/// Realization i always draws from stream i, so results do not depend on how
/// work is scheduled across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t mixer = stream;
    std::uint64_t sm = seed ^ detail::splitmix64(mixer);
    for (auto& word : state_) word = detail::splitmix64(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result =
        detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform double strictly inside (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-mean exponential by inverse CDF.
  double next_exponential() { return -std::log(next_uniform()); }

  /// Poisson count by Knuth's product method, chunked so exp(-mean) never
  /// underflows.
  std::int64_t next_poisson(double mean) {
    std::int64_t count = 0;
    while (mean > 400.0) {
      count += poisson_block(400.0);
      mean -= 400.0;
    }
    return count + poisson_block(mean);
  }

 private:
  std::int64_t poisson_block(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double product = 1.0;
    do {
      ++k;
      product *= next_uniform();
    } while (product > limit);
    return k - 1;
  }

  std::uint64_t state_[4];
};

}  // namespace sirdiv
