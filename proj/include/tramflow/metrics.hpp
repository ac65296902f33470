#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tramflow/dynamics.hpp"
#include "tramflow/network.hpp"
#include "tramflow/scenarios.hpp"
#include "tramflow/solver.hpp"

namespace tramflow {

/// An integral in passenger-hours with its breakdowns.
struct TimeIntegral {
  double total_hours = 0.0;
  std::map<std::string, double> by_location;  ///< stop id (waiting) or edge id (standing)
  std::vector<double> by_hour;                ///< one bin per started hour of the horizon
};

/// Sum over queues of the integral of the queue length over [0, horizon].
/// With `stops`, only queues at those stops count.
TimeIntegral total_waiting_time(const TramNetwork& net, const std::vector<QueueTrajectory>& queues,
                                double horizon, const std::set<std::string>* stops = nullptr);

/// Integral of the passengers above seat capacity, per tram and edge, over [0, horizon].
TimeIntegral total_standing_time(const TramNetwork& net, const std::vector<Traversal>& traversals,
                                 double horizon);

/// Onboard passengers per seat; empty when there are no seats.
std::optional<double> capacity_utilization(double onboard, double seats);

struct UtilizationSample {
  std::string line;
  std::string trip;
  double time = 0.0;
  std::optional<double> cu;
};

struct RunMetrics {
  TimeIntegral waiting;
  TimeIntegral standing;
  double dwell_delay = 0.0;    ///< minutes, all trips
  double failure_delay = 0.0;  ///< minutes
  std::size_t failures = 0;
  double boarded = 0.0;
  double residual_queue = 0.0;  ///< passengers still waiting at the horizon
  std::vector<UtilizationSample> utilization;
};

RunMetrics compute_run_metrics(const TramNetwork& net, const Timetable& timetable,
                               const RunResult& run,
                               const std::optional<std::string>& measurement_stop = std::nullopt);

/// Nearest-rank percentile of an ascending sample: element ceil(p N), at least the first.
double percentile_nearest_rank(const std::vector<double>& sorted, double p);

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double p20 = 0.0;
  double p80 = 0.0;
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

MetricSummary summarize(std::vector<double> values);

/// Everything a simulation needs besides the scenario.
struct Model {
  std::string name;
  TramNetwork network;
  Timetable timetable;
  DemandTables demand;
  std::optional<std::string> measurement_stop;
};

struct MonteCarloConfig {
  std::size_t runs = 1000;
  std::uint64_t master_seed = 0;
  std::size_t threads = 0;  ///< 0: hardware concurrency
};

struct MetricsReport {
  std::size_t runs = 0;
  std::size_t failed = 0;
  bool valid = true;  ///< at most 10 % of the runs failed
  std::uint64_t master_seed = 0;
  std::vector<std::string> failure_messages;  ///< first few only
  std::map<std::string, MetricSummary> metrics;
  std::map<std::string, std::vector<double>> samples;  ///< per-run scalars in run order
  std::map<std::string, double> mean_waiting_by_stop;  ///< passenger-hours
  std::vector<double> mean_waiting_by_hour;
  std::vector<double> mean_standing_by_hour;
  std::map<std::string, std::vector<double>> mean_cu_by_hour;  ///< per line; 0 in unserved hours
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Seeds used by run `index`: arrivals, cancellations and failures each get
/// their own substream of the master seed.
struct RunStreams {
  RngStream arrivals;
  RngStream cancellations;
  RngStream failures;
};
RunStreams run_streams(std::uint64_t master_seed, std::size_t index);

/// One complete stochastic run of `scenario` on `model`.
struct ScenarioRun {
  Timetable timetable;
  FailureSchedule failures;
  RunResult result;
  RunMetrics metrics;
};
ScenarioRun run_scenario(const Model& model, const Timetable& prepared, const Scenario& scenario,
                         std::uint64_t master_seed, std::size_t index, bool validate = true);

/// N independent runs folded in run order, so the report does not depend on
/// scheduling.
MetricsReport monte_carlo(const Model& model, const Scenario& scenario,
                          const MonteCarloConfig& config);

}  // namespace tramflow
