#include <cmath>

#include "tramflow/solver.hpp"

namespace tramflow {

BalanceReport mass_balance_audit(const RunResult& run, const Timetable& timetable,
                                 double tolerance) {
  BalanceReport report;
  report.tolerance = tolerance;
  auto add = [&](BalanceResidual::Kind kind, std::string id, double residual) {
    BalanceResidual r{kind, std::move(id), residual};
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(residual));
    if (!(std::abs(residual) < tolerance)) report.failures.push_back(r);
    report.residuals.push_back(std::move(r));
  };

  std::vector<double> trip_boarded(run.trips.size(), 0.0);
  std::vector<double> trip_alighted(run.trips.size(), 0.0);
  std::vector<double> queue_boarded(run.queues.size(), 0.0);
  double alighted = 0.0;
  for (const StopEventRecord& rec : run.events) {
    trip_boarded.at(rec.trip.value) += rec.boarded;
    trip_alighted.at(rec.trip.value) += rec.alighted;
    if (rec.queue.valid()) queue_boarded.at(rec.queue.value) += rec.boarded;
    alighted += rec.alighted;
  }

  double in_transit = 0.0;
  for (const TripSummary& s : run.trips) {
    const std::size_t i = s.trip.value;
    const std::string& id = i < timetable.trips.size() ? timetable.trips[i].id : std::to_string(i);
    const double final_onboard = s.completed ? 0.0 : s.final_onboard;
    if (s.completed && s.final_onboard != 0.0)
      add(BalanceResidual::Kind::Trip, id + " (terminal load)", s.final_onboard);
    add(BalanceResidual::Kind::Trip, id, trip_boarded[i] - trip_alighted[i] - final_onboard);
    in_transit += final_onboard;
  }

  double arrivals = 0.0;
  double queued = 0.0;
  for (const QueueTrajectory& q : run.queues) {
    const double supplied = q.initial + static_cast<double>(q.arrivals);
    add(BalanceResidual::Kind::Queue, q.name,
        supplied - queue_boarded[q.queue.value] - q.final_level);
    arrivals += supplied;
    queued += q.final_level;
  }
  add(BalanceResidual::Kind::Global, "system", arrivals - alighted - queued - in_transit);
  return report;
}

}  // namespace tramflow
