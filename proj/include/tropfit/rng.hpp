#pragma once

#include <cstdint>
#include <limits>

namespace tropfit {

// SplitMix64 stream keyed by (seed, index). Streams for different indices are
// independent of scheduling, so parallel work that owns one stream per task
// reproduces bit-for-bit under any thread count.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Open interval (0, 1), 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal by inverse CDF.
  double normal();
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tropfit
