#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace tramflow {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Seedable, splittable random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// Distributions are computed here rather than through <random> so that
/// streams are bit-reproducible across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  /// Independent child stream identified by `stream_id`. Does not advance this stream.
  [[nodiscard]] RngStream split(std::uint64_t stream_id) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);
  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t below(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace tramflow
