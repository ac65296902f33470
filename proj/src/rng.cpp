#include "tramflow/rng.hpp"

#include <cmath>

#include "tramflow/errors.hpp"

namespace tramflow {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed, 0)) {}

RngStream RngStream::split(std::uint64_t stream_id) const {
  return RngStream(mix_seed(seed_ ^ 0x5851f42d4c957f2dULL, stream_id));
}

double RngStream::uniform() {
  // 53 random bits, shifted by half an ulp so neither 0 nor 1 occurs.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

std::size_t RngStream::below(std::size_t n) {
  if (n == 0) throw DomainError("below: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace tramflow
