#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tramflow/rng.hpp"

namespace tramflow {

/// A quantity that is piecewise constant on the 24 hours of a day.
///
/// Times past 24 h wrap around to the next day.
class HourlyProfile {
 public:
  HourlyProfile() { values_.fill(0.0); }
  explicit HourlyProfile(const std::array<double, 24>& values) : values_(values) {}
  static HourlyProfile constant(double value);

  [[nodiscard]] static std::size_t hour_of(double t);
  [[nodiscard]] double at(double t) const { return values_[hour_of(t)]; }
  [[nodiscard]] double operator[](std::size_t hour) const { return values_.at(hour); }
  void set(std::size_t hour, double value) { values_.at(hour) = value; }
  [[nodiscard]] double max() const;
  /// Integral over [a, b] in (value x minutes).
  [[nodiscard]] double integral(double a, double b) const;
  [[nodiscard]] const std::array<double, 24>& values() const { return values_; }

  HourlyProfile& operator+=(const HourlyProfile& other);
  HourlyProfile& operator*=(double factor);
  friend bool operator==(const HourlyProfile&, const HourlyProfile&) = default;

 private:
  std::array<double, 24> values_{};
};

/// Arrival rates in passengers per minute.
using HourlyRates = HourlyProfile;

struct ArrivalStream {
  std::vector<double> times;  ///< strictly increasing, within [0, horizon]
  std::uint64_t seed = 0;
  std::string stop;
  double horizon = 0.0;
};

/// Inhomogeneous Poisson arrivals on [0, horizon] by thinning a homogeneous
/// process at the maximal rate.
ArrivalStream sample_arrivals(const HourlyRates& rates, std::string stop, double horizon,
                              RngStream& rng);

/// X(t): number of arrivals at or before t. Throws DomainError outside [0, horizon].
std::size_t cumulative_arrivals(const ArrivalStream& stream, double t);

}  // namespace tramflow
