#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"
#include "tramflow/solver.hpp"

namespace tramflow {

DemandRealization realize_demand(const TramNetwork& net, const QueueLayout& layout,
                                 const DemandTables& demand, double horizon,
                                 const RngStream& rng) {
  (void)net;
  DemandRealization out;
  out.arrivals.resize(layout.size());
  out.initial.assign(layout.size(), 0.0);
  for (std::size_t q = 0; q < layout.size(); ++q) {
    const auto& queue = layout.queue(QueueIndex{q});
    HourlyRates rates;
    const std::vector<double>* fixed = nullptr;
    for (EdgeId e : queue.edges) {
      if (auto it = demand.arrival_rates.find(e); it != demand.arrival_rates.end())
        rates += it->second;
      if (auto it = demand.initial_queue.find(e); it != demand.initial_queue.end())
        out.initial[q] += it->second;
      if (auto it = demand.fixed_arrivals.find(e); it != demand.fixed_arrivals.end())
        fixed = &it->second;
    }
    if (fixed != nullptr) {
      auto& times = out.arrivals[q];
      for (double t : *fixed)
        if (t >= 0.0 && t <= horizon) times.push_back(t);
      std::sort(times.begin(), times.end());
      continue;
    }
    RngStream sub = rng.split(q);
    out.arrivals[q] = sample_arrivals(rates, queue.name, horizon, sub).times;
  }
  return out;
}

namespace {

struct Event {
  double time;
  std::size_t vertex;
  std::size_t trip;
  std::size_t position;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.vertex, a.trip) > std::tie(b.time, b.vertex, b.trip);
  }
};

}  // namespace

RunResult run_exact(const TramNetwork& net, const Timetable& timetable, const DemandTables& demand,
                    const QueueLayout& layout, const DemandRealization& realization,
                    double horizon, const RunOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("run_exact: horizon must be positive");
  if (realization.arrivals.size() != layout.size() || realization.initial.size() != layout.size())
    throw ConfigError("demand realization does not match the queue layout");
  if (options.validate) {
    const auto report = validate_schedule(net, timetable);
    if (!report.admissible()) {
      const Violation& v = report.violations.front();
      throw AdmissibilityViolation(std::string(to_string(v.rule)) + " at '" + v.vertex +
                                   "' t=" + fmt9(v.time) + ": " + v.message);
    }
  }

  RunResult result;
  result.horizon = horizon;

  std::vector<QueueTracker> trackers;
  trackers.reserve(layout.size());
  for (std::size_t q = 0; q < layout.size(); ++q)
    trackers.emplace_back(QueueIndex{q}, realization.initial[q], realization.arrivals[q], true);

  const std::size_t n_trips = timetable.trips.size();
  std::vector<double> onboard(n_trips, 0.0);
  std::vector<std::vector<double>> nominal(n_trips);
  result.trips.resize(n_trips);

  std::priority_queue<Event, std::vector<Event>, Later> pending;
  for (std::size_t i = 0; i < n_trips; ++i) {
    const Trip& trip = timetable.trips[i];
    result.trips[i].trip = TripIndex{i};
    nominal[i] = nominal_departures(net, trip);
    if (trip.edges.empty()) continue;
    pending.push({trip.departure, net.edge(trip.edges.front()).tail.value, i, 0});
  }

  std::vector<double> last_entry(net.edge_count(), -std::numeric_limits<double>::infinity());

  while (!pending.empty()) {
    const Event ev = pending.top();
    pending.pop();
    const Trip& trip = timetable.trips[ev.trip];
    TripSummary& summary = result.trips[ev.trip];
    if (ev.time > horizon + kTimeTolerance) {
      if (ev.position > 0)
        result.warnings.push_back("trip '" + trip.id + "' truncated at the horizon (next stop at t=" +
                                  fmt9(ev.time) + ")");
      summary.final_onboard = onboard[ev.trip];
      continue;
    }

    const std::size_t k = ev.position;
    const bool trip_end = k == trip.edges.size();
    StopEventRecord rec;
    rec.time = ev.time;
    rec.vertex = VertexId{ev.vertex};
    rec.trip = TripIndex{ev.trip};
    rec.position = k;
    if (k > 0) rec.in_edge = trip.edges[k - 1];
    if (!trip_end) rec.out_edge = trip.edges[k];

    QueueTracker* tracker = nullptr;
    if (!trip_end) {
      rec.queue = layout.queue_of(rec.out_edge);
      tracker = &trackers[rec.queue.value];
      rec.arrivals_since_last = tracker->advance_to(ev.time);
      rec.queue_before = tracker->level();
    }

    rec.onboard_before = onboard[ev.trip];
    double remaining = rec.onboard_before;
    if (k > 0) {
      rec.alighting_fraction = trip_end ? 1.0 : demand.alighting_fraction(rec.in_edge, ev.time);
      const Alighting a = alight(rec.onboard_before, rec.alighting_fraction, trip_end);
      rec.alighted = a.alighted;
      remaining = a.remaining;
      if (!trip_end && options.record_transfers)
        result.transfers.push_back(
            {rec.vertex, ev.time, rec.in_edge, rec.out_edge, rec.trip, remaining});
    }

    if (tracker != nullptr) {
      rec.boarded = board(rec.queue_before, trip.capacity, remaining);
      tracker->remove(rec.boarded);
      rec.queue_after = tracker->level();
    }
    rec.onboard_after = remaining + rec.boarded;
    onboard[ev.trip] = rec.onboard_after;
    summary.boarded += rec.boarded;
    summary.alighted += rec.alighted;

    if (trip_end) {
      rec.departure = ev.time;
      summary.completed = true;
      summary.final_onboard = rec.onboard_after;
      result.events.push_back(rec);
      continue;
    }

    if (options.dwell) {
      const DwellDelay d = dwell_delay(rec.boarded, rec.alighted, *options.dwell);
      rec.dwell_delay = d.minutes;
      if (d.clamped) ++result.clamped_dwell;
    }
    if (options.failures != nullptr) rec.failure_delay = options.failures->delay_at(rec.trip, k);
    double departure = ev.time + rec.dwell_delay + rec.failure_delay;
    double& last = last_entry[rec.out_edge.value];
    if (departure <= last + kTimeTolerance) {
      rec.push_delay = last + 1e-6 - departure;
      departure = last + 1e-6;
    }
    last = departure;
    rec.departure = departure;
    summary.dwell_delay += rec.dwell_delay;
    summary.failure_delay += rec.failure_delay;
    summary.push_delay += rec.push_delay;
    summary.total_delay += rec.dwell_delay + rec.failure_delay + rec.push_delay;

    const Edge& out = net.edge(rec.out_edge);
    const double exit = departure + out.travel_time();
    if (options.record_traversals)
      result.traversals.push_back({rec.trip, rec.out_edge, departure, exit, rec.onboard_after,
                                   trip.seat_capacity, departure - nominal[ev.trip][k]});
    summary.final_onboard = rec.onboard_after;
    pending.push({exit, out.head.value, ev.trip, k + 1});
    result.events.push_back(rec);
  }

  result.queues.reserve(trackers.size());
  for (QueueTracker& tracker : trackers) {
    tracker.finish(horizon);
    const auto& queue = layout.queue(tracker.id());
    QueueTrajectory traj;
    traj.queue = tracker.id();
    traj.name = queue.name;
    traj.stop = queue.stop;
    traj.initial = tracker.initial_level();
    traj.arrivals = tracker.total_arrivals();
    traj.final_level = tracker.level();
    traj.steps = tracker.take_steps();
    result.queues.push_back(std::move(traj));
  }
  return result;
}

RunResult run_exact(const TramNetwork& net, const Timetable& timetable, const DemandTables& demand,
                    double horizon, const RngStream& rng, const RunOptions& options) {
  const QueueLayout layout(net, demand.pools);
  const DemandRealization realization = realize_demand(net, layout, demand, horizon, rng);
  return run_exact(net, timetable, demand, layout, realization, horizon, options);
}

double exact_edge_mass(const RunResult& run, EdgeId edge, double t) {
  double total = 0.0;
  for (const Traversal& tr : run.traversals)
    if (tr.edge == edge && tr.entry < t && t <= tr.exit) total += tr.onboard;
  return total;
}

}  // namespace tramflow

namespace tramflow {

std::vector<double> exact_mass_series(const RunResult& run, const EdgeGrid& grid) {
  const std::size_t n = grid.steps + 1;
  std::vector<double> diff(n + 1, 0.0);
  auto first_after = [&](double t) {
    double k = std::floor((t - grid.t0) / grid.dt);
    while (k >= 0.0 && grid.time(static_cast<std::size_t>(k)) > t) k -= 1.0;
    auto idx = static_cast<std::size_t>(std::max(0.0, k + 1.0));
    while (idx < n && grid.time(idx) <= t) ++idx;
    return idx;
  };
  for (const Traversal& tr : run.traversals) {
    if (tr.edge != grid.edge) continue;
    const std::size_t a = first_after(tr.entry);  // first k with t_k > entry
    const std::size_t b = first_after(tr.exit);   // first k with t_k > exit
    if (a >= b || a >= n) continue;
    diff[a] += tr.onboard;
    diff[std::min(b, n)] -= tr.onboard;
  }
  std::vector<double> out(n, 0.0);
  double running = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += diff[k];
    out[k] = running;
  }
  return out;
}

}  // namespace tramflow
