#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tramflow/dynamics.hpp"
#include "tramflow/network.hpp"
#include "tramflow/rng.hpp"
#include "tramflow/scenarios.hpp"

namespace tramflow {

/// One sampled set of passenger arrivals, per queue of a layout.
struct DemandRealization {
  std::vector<std::vector<double>> arrivals;
  std::vector<double> initial;
};

/// Samples every queue from its own substream `rng.split(queue index)`.
/// Pooled queues use the summed rates of their member edges.
DemandRealization realize_demand(const TramNetwork& net, const QueueLayout& layout,
                                 const DemandTables& demand, double horizon, const RngStream& rng);

/// A tram crossing one edge.
struct Traversal {
  TripIndex trip;
  EdgeId edge;
  double entry = 0.0;
  double exit = 0.0;
  double onboard = 0.0;
  double seat_capacity = 0.0;
  double accrued_delay = 0.0;  ///< delay relative to the nominal schedule at entry
};

/// Passenger mass handed from an incoming to an outgoing edge at a vertex.
struct TransferRecord {
  VertexId vertex;
  double time = 0.0;
  EdgeId in_edge;
  EdgeId out_edge;
  TripIndex trip;
  double mass = 0.0;
};

struct QueueTrajectory {
  QueueIndex queue;
  std::string name;
  VertexId stop;
  std::vector<QueueTracker::Step> steps;  ///< right-continuous levels, last step at the horizon
  double initial = 0.0;
  std::size_t arrivals = 0;
  double final_level = 0.0;
};

struct TripSummary {
  TripIndex trip;
  double boarded = 0.0;
  double alighted = 0.0;
  double final_onboard = 0.0;
  double total_delay = 0.0;
  double dwell_delay = 0.0;
  double failure_delay = 0.0;
  double push_delay = 0.0;
  bool completed = false;  ///< reached its last vertex within the horizon
};

struct RunOptions {
  std::optional<DwellDelayModel> dwell;
  const FailureSchedule* failures = nullptr;
  bool validate = true;          ///< check admissibility first
  bool record_traversals = true;
  bool record_transfers = true;
};

struct RunResult {
  double horizon = 0.0;
  std::vector<StopEventRecord> events;  ///< chronological
  std::vector<TransferRecord> transfers;
  std::vector<Traversal> traversals;
  std::vector<QueueTrajectory> queues;
  std::vector<TripSummary> trips;
  std::vector<std::string> warnings;
  std::size_t clamped_dwell = 0;
};

/// Event-driven solver: every tram is an atomic mass moved along its
/// characteristics, with alighting, coupling and boarding at each stop event.
RunResult run_exact(const TramNetwork& net, const Timetable& timetable, const DemandTables& demand,
                    const QueueLayout& layout, const DemandRealization& realization,
                    double horizon, const RunOptions& options = {});

/// Convenience overload that samples the arrivals from `rng`.
RunResult run_exact(const TramNetwork& net, const Timetable& timetable, const DemandTables& demand,
                    double horizon, const RngStream& rng, const RunOptions& options = {});

/// Passenger mass on `edge` at time t according to the exact solution:
/// a traversal counts iff entry < t <= exit.
double exact_edge_mass(const RunResult& run, EdgeId edge, double t);

struct GridParams {
  double dx_fraction = 0.01;  ///< Δx = l * dx_fraction
  double cfl = 1.0;           ///< w Δt / Δx
  bool keep_field = false;    ///< store every node value at every step
};

/// Mass leaving an edge during one step, stamped with the step's end time.
struct OutflowRecord {
  double time = 0.0;
  double mass = 0.0;
  TripIndex trip;  ///< trip whose realized arrival is nearest in time
};

struct EdgeGrid {
  EdgeId edge;
  std::size_t cells = 0;  ///< nodes 1..cells are interior, node 0 is the boundary
  double dx = 0.0;
  double dt = 0.0;
  double cfl = 0.0;
  double t0 = 0.0;  ///< time of step 0; steps are t0 + k dt
  std::size_t steps = 0;
  std::vector<double> mass;  ///< total mass at t0 + k dt, k = 0..steps
  std::vector<OutflowRecord> outflow;
  double injected = 0.0;
  double min_value = 0.0;
  std::vector<double> final_nodes;
  std::vector<std::vector<double>> field;  ///< only with keep_field

  [[nodiscard]] double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

struct GridField {
  std::vector<EdgeGrid> edges;  ///< indexed by edge
};

/// exact_edge_mass at every step time of `grid`.
std::vector<double> exact_mass_series(const RunResult& run, const EdgeGrid& grid);

/// Left-sided upwind scheme on every edge, driven by the stop events of a
/// completed exact run (boarding, alighting fractions, realized departures).
/// Throws DomainError if cfl is outside (0, 1] and ConfigError if the edge
/// succession graph has a cycle.
GridField run_upwind(const TramNetwork& net, const Timetable& timetable, const RunResult& exact,
                     const GridParams& params = {});

struct BalanceResidual {
  enum class Kind { Trip, Queue, Global };
  Kind kind;
  std::string id;
  double residual = 0.0;
};

struct BalanceReport {
  std::vector<BalanceResidual> residuals;
  std::vector<BalanceResidual> failures;  ///< |residual| >= tolerance
  double max_abs_residual = 0.0;
  double tolerance = 1e-6;

  [[nodiscard]] bool passed() const { return failures.empty(); }
};

BalanceReport mass_balance_audit(const RunResult& run, const Timetable& timetable,
                                 double tolerance = 1e-6);

}  // namespace tramflow
