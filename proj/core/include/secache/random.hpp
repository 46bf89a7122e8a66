#pragma once

#include <cstdint>
#include <limits>

namespace secache {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output k of stream (seed, stream, substream) is a
/// pure function of those four integers, so any trial can be replayed
/// without touching the others. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return at(counter_++); }

  /// Random access to the k-th output; does not advance the counter.
  result_type at(std::uint64_t k) const noexcept {
    return mix64(key_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept { return to_unit(operator()()); }
  double uniform_at(std::uint64_t k) const noexcept { return to_unit(at(k)); }

  /// Unit-mean exponential variate.
  double exponential() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static double to_unit(std::uint64_t x) noexcept {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace secache
