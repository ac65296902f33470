#include "tramflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"

namespace tramflow {

std::string_view to_string(DwellMode mode) {
  return mode == DwellMode::Sum ? "sum" : "paper";
}

DwellMode parse_dwell_mode(std::string_view text) {
  if (text == "sum") return DwellMode::Sum;
  if (text == "paper" || text == "paper_literal") return DwellMode::PaperLiteral;
  throw ConfigError("unknown dwell mode '" + std::string(text) + "' (expected sum|paper)");
}

DwellDelay dwell_delay(double boarded, double alighted, const DwellDelayModel& model) {
  if (!(boarded >= 0.0) || !(alighted >= 0.0))
    throw DomainError("dwell_delay: passenger counts must be nonnegative");
  if (boarded + alighted <= model.threshold) return {};
  const double raw = model.mode == DwellMode::Sum
                         ? (boarded + alighted - model.threshold) * model.slope
                         : (boarded - alighted - model.threshold) * model.slope;
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

Timetable apply_cancellations(const Timetable& timetable, double rate, RngStream& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("cancellation rate must lie in [0, 1]");
  const std::size_t total = timetable.trips.size();
  const auto n = static_cast<std::size_t>(std::floor(rate * static_cast<double>(total) + 1e-9));
  if (n == 0) return timetable;

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return timetable.trips[a].departure < timetable.trips[b].departure;
  });

  std::vector<bool> cancelled(total, false);
  const std::size_t n_even = n / 2;
  if (n_even > 0) {
    const std::size_t stride = total / n_even;
    const std::size_t offset = rng.below(stride);
    for (std::size_t k = 0; k < n_even; ++k) cancelled[order[offset + k * stride]] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i : order)
    if (!cancelled[i]) rest.push_back(i);
  // Partial Fisher-Yates: the first n - n_even slots are a uniform sample.
  for (std::size_t k = 0; k < n - n_even; ++k) {
    const std::size_t j = k + rng.below(rest.size() - k);
    std::swap(rest[k], rest[j]);
    cancelled[rest[k]] = true;
  }

  Timetable out{{}, timetable.horizon};
  out.trips.reserve(total - n);
  for (std::size_t i = 0; i < total; ++i)
    if (!cancelled[i]) out.trips.push_back(timetable.trips[i]);
  return out;
}

double FailureSchedule::delay_at(TripIndex trip, std::size_t position) const {
  if (trip.value >= delays.size()) return 0.0;
  const auto& row = delays[trip.value];
  return position < row.size() ? row[position] : 0.0;
}

FailureSchedule inject_failures(const DisruptionPlan& plan, const Timetable& timetable,
                                RngStream& rng) {
  for (const FailureSpec& f : plan.failures)
    if (!(f.probability >= 0.0 && f.probability <= 1.0) || !(f.delay >= 0.0))
      throw ConfigError("failure spec needs probability in [0, 1] and delay >= 0");
  FailureSchedule out;
  out.delays.resize(timetable.trips.size());
  for (std::size_t i = 0; i < timetable.trips.size(); ++i) {
    auto& row = out.delays[i];
    row.assign(timetable.trips[i].edges.size(), 0.0);
    for (double& d : row) {
      ++out.event_count;
      for (const FailureSpec& f : plan.failures) {
        if (f.probability > 0.0 && rng.bernoulli(f.probability)) {
          d += f.delay;
          ++out.failure_count;
        }
      }
    }
  }
  return out;
}

std::string service_trip_id(std::string_view line, std::string_view first_edge, double departure) {
  return std::string(line) + ":" + std::string(first_edge) + "@" + fmt9(departure);
}

Timetable build_frequency_scenario(const TramNetwork& net, const Timetable& base, double headway) {
  if (!(headway > 0.0) || !std::isfinite(headway))
    throw ConfigError("headway must be positive");

  using Key = std::pair<std::string, std::vector<std::size_t>>;
  std::map<Key, std::vector<std::size_t>> groups;
  Timetable out{{}, base.horizon};
  for (std::size_t i = 0; i < base.trips.size(); ++i) {
    const Trip& trip = base.trips[i];
    if (!trip.peak) {
      out.trips.push_back(trip);
      continue;
    }
    std::vector<std::size_t> path;
    for (EdgeId e : trip.edges) path.push_back(e.value);
    groups[{trip.line, std::move(path)}].push_back(i);
  }

  constexpr double tol = 1e-6;
  for (auto& [key, members] : groups) {
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return base.trips[a].departure < base.trips[b].departure;
    });
    double spacing = 0.0;
    for (std::size_t k = 1; k < members.size(); ++k) {
      const double d = base.trips[members[k]].departure - base.trips[members[k - 1]].departure;
      if (d > tol && (spacing == 0.0 || d < spacing)) spacing = d;
    }
    if (spacing == 0.0 || std::abs(spacing - headway) <= tol) {
      for (std::size_t i : members) out.trips.push_back(base.trips[i]);
      continue;
    }
    // Blocks of evenly spaced departures; line services with a midday gap
    // form two blocks.
    std::size_t begin = 0;
    while (begin < members.size()) {
      std::size_t end = begin + 1;
      while (end < members.size() && base.trips[members[end]].departure -
                                             base.trips[members[end - 1]].departure <=
                                         spacing + tol)
        ++end;
      const Trip& first = base.trips[members[begin]];
      const double span = static_cast<double>(end - begin) * spacing;
      const auto count = static_cast<std::size_t>(std::floor(span / headway + 1e-9));
      for (std::size_t k = 0; k < count; ++k) {
        Trip t = first;
        t.departure = first.departure + static_cast<double>(k) * headway;
        t.id = service_trip_id(t.line, net.edge(t.edges.front()).id, t.departure);
        out.trips.push_back(std::move(t));
      }
      begin = end;
    }
  }
  std::stable_sort(out.trips.begin(), out.trips.end(),
                   [](const Trip& a, const Trip& b) { return a.departure < b.departure; });
  return out;
}

Timetable shift_line(const Timetable& base, std::string_view line, double minutes) {
  Timetable out = base;
  for (Trip& trip : out.trips)
    if (trip.line == line) trip.departure += minutes;
  return out;
}

Timetable prepare_timetable(const TramNetwork& net, const Timetable& base,
                            const Scenario& scenario) {
  Timetable out = scenario.headway ? build_frequency_scenario(net, base, *scenario.headway) : base;
  for (const auto& [line, minutes] : scenario.line_shifts) out = shift_line(out, line, minutes);
  return out;
}

}  // namespace tramflow
