#include "tramflow/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tramflow/errors.hpp"

namespace tramflow {

namespace {

std::size_t hour_bins(double horizon) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(horizon / 60.0 - 1e-12)));
}

// Adds level * |[a, b]| (minutes) into hourly bins, converted to hours.
void spread(std::vector<double>& bins, double a, double b, double level) {
  while (a < b) {
    const auto h = std::min(bins.size() - 1, static_cast<std::size_t>(std::max(0.0, a) / 60.0));
    const double edge = h + 1 == bins.size() ? b : std::min(b, (static_cast<double>(h) + 1) * 60.0);
    bins[h] += level * (edge - a) / 60.0;
    a = edge;
  }
}

}  // namespace

TimeIntegral total_waiting_time(const TramNetwork& net, const std::vector<QueueTrajectory>& queues,
                                double horizon, const std::set<std::string>* stops) {
  TimeIntegral out;
  out.by_hour.assign(hour_bins(horizon), 0.0);
  for (const QueueTrajectory& q : queues) {
    const std::string& stop = net.vertex(q.stop).id;
    if (stops != nullptr && !stops->contains(stop)) continue;
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < q.steps.size(); ++i) {
      const double a = std::max(0.0, q.steps[i].time);
      const double b = std::min(horizon, q.steps[i + 1].time);
      if (b <= a || q.steps[i].level == 0.0) continue;
      area += q.steps[i].level * (b - a);
      spread(out.by_hour, a, b, q.steps[i].level);
    }
    out.by_location[stop] += area / 60.0;
    out.total_hours += area / 60.0;
  }
  return out;
}

TimeIntegral total_standing_time(const TramNetwork& net, const std::vector<Traversal>& traversals,
                                 double horizon) {
  TimeIntegral out;
  out.by_hour.assign(hour_bins(horizon), 0.0);
  for (const Traversal& tr : traversals) {
    const double standing = std::max(0.0, tr.onboard - tr.seat_capacity);
    if (standing == 0.0) continue;
    const double a = std::max(0.0, tr.entry);
    const double b = std::min(horizon, tr.exit);
    if (b <= a) continue;
    const double hours = standing * (b - a) / 60.0;
    out.by_location[net.edge(tr.edge).id] += hours;
    out.total_hours += hours;
    spread(out.by_hour, a, b, standing);
  }
  return out;
}

std::optional<double> capacity_utilization(double onboard, double seats) {
  if (!(seats > 0.0)) return std::nullopt;
  return onboard / seats;
}

RunMetrics compute_run_metrics(const TramNetwork& net, const Timetable& timetable,
                               const RunResult& run,
                               const std::optional<std::string>& measurement_stop) {
  RunMetrics m;
  m.waiting = total_waiting_time(net, run.queues, run.horizon);
  m.standing = total_standing_time(net, run.traversals, run.horizon);
  std::optional<VertexId> stop;
  if (measurement_stop) stop = net.vertex_id(*measurement_stop);
  for (const StopEventRecord& rec : run.events) {
    m.dwell_delay += rec.dwell_delay;
    m.failure_delay += rec.failure_delay;
    if (rec.failure_delay > 0.0) ++m.failures;
    m.boarded += rec.boarded;
    if (stop && rec.vertex == *stop && rec.out_edge.valid()) {
      const Trip& trip = timetable.trips.at(rec.trip.value);
      m.utilization.push_back({trip.line, trip.id, rec.departure,
                               capacity_utilization(rec.onboard_after, trip.seat_capacity)});
    }
  }
  for (const QueueTrajectory& q : run.queues) m.residual_queue += q.final_level;
  return m;
}

double percentile_nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("percentile level must lie in [0, 1]");
  const double n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(p * n - 1e-9)));
  return sorted[std::min(rank, sorted.size()) - 1];
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  // Offsetting by the minimum keeps a constant sample's mean exact.
  double excess = 0.0;
  for (double v : values) excess += v - values.front();
  s.mean = values.front() + excess / static_cast<double>(values.size());
  s.p20 = percentile_nearest_rank(values, 0.2);
  s.p80 = percentile_nearest_rank(values, 0.8);
  s.min = values.front();
  s.max = values.back();
  return s;
}

}  // namespace tramflow
