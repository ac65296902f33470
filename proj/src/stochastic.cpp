#include "tramflow/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "tramflow/errors.hpp"

namespace tramflow {

HourlyProfile HourlyProfile::constant(double value) {
  HourlyProfile p;
  p.values_.fill(value);
  return p;
}

std::size_t HourlyProfile::hour_of(double t) {
  if (!(t >= 0.0)) return 0;
  const double day = std::fmod(t, 1440.0);
  return std::min<std::size_t>(23, static_cast<std::size_t>(day / 60.0));
}

double HourlyProfile::max() const { return *std::max_element(values_.begin(), values_.end()); }

double HourlyProfile::integral(double a, double b) const {
  if (b <= a) return 0.0;
  double total = 0.0;
  double t = a;
  while (t < b) {
    const double next = std::min(b, (std::floor(t / 60.0) + 1.0) * 60.0);
    total += at(t) * (next - t);
    t = next;
  }
  return total;
}

HourlyProfile& HourlyProfile::operator+=(const HourlyProfile& other) {
  for (std::size_t h = 0; h < 24; ++h) values_[h] += other.values_[h];
  return *this;
}

HourlyProfile& HourlyProfile::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

ArrivalStream sample_arrivals(const HourlyRates& rates, std::string stop, double horizon,
                              RngStream& rng) {
  if (!(horizon > 0.0)) throw DomainError("sample_arrivals: horizon must be positive");
  for (double r : rates.values())
    if (!(r >= 0.0) || !std::isfinite(r))
      throw DomainError("sample_arrivals: rates must be finite and nonnegative");

  ArrivalStream out{{}, rng.seed(), std::move(stop), horizon};
  const double lambda_max = rates.max();
  if (lambda_max == 0.0) return out;

  double t = 0.0;
  while (t < horizon) {
    t += rng.exponential(lambda_max);
    if (t > horizon) break;
    const double u = rng.uniform();
    if (u <= rates.at(t) / lambda_max) out.times.push_back(t);
  }
  return out;
}

std::size_t cumulative_arrivals(const ArrivalStream& stream, double t) {
  if (!(t >= 0.0) || t > stream.horizon)
    throw DomainError("cumulative_arrivals: t outside [0, T]");
  return static_cast<std::size_t>(
      std::upper_bound(stream.times.begin(), stream.times.end(), t) - stream.times.begin());
}

}  // namespace tramflow
