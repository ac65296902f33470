#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tramflow/network.hpp"
#include "tramflow/stochastic.hpp"

namespace tramflow {

struct Alighting {
  double alighted = 0.0;
  double remaining = 0.0;
};

/// Passengers leaving a tram at a stop: the fraction `r_a` of those onboard,
/// or everyone when the trip ends here.
Alighting alight(double onboard, double r_a, bool is_trip_end);

/// Passengers boarding from the left-limit queue, limited by the free capacity.
double board(double queue_left_limit, double capacity, double onboard_after_alight);

using QueueIndex = Index<struct QueueTag>;

struct QueueState {
  QueueIndex queue;
  double level = 0.0;
  double last_update = 0.0;
};

/// Adds the arrivals in (from_t, to_t] to the queue. Boarding is applied separately.
QueueState advance_queue(QueueState queue, const ArrivalStream& arrivals, double from_t,
                         double to_t);

/// Outgoing edges at one stop whose passengers wait in a single shared queue.
struct QueuePool {
  VertexId stop;
  std::vector<EdgeId> edges;
};

/// Assignment of outgoing edges to passenger queues.
///
/// By default every edge with a tail stop has its own queue; a pool merges
/// several outgoing edges of one stop into a single queue.
class QueueLayout {
 public:
  struct Queue {
    VertexId stop;
    std::vector<EdgeId> edges;
    std::string name;
  };

  QueueLayout(const TramNetwork& net, const std::vector<QueuePool>& pools);

  [[nodiscard]] QueueIndex queue_of(EdgeId out_edge) const { return by_edge_.at(out_edge.value); }
  [[nodiscard]] const Queue& queue(QueueIndex q) const { return queues_.at(q.value); }
  [[nodiscard]] std::size_t size() const { return queues_.size(); }

 private:
  std::vector<Queue> queues_;
  std::vector<QueueIndex> by_edge_;
};

/// Demand inputs of one simulation: arrival rates and initial queues keyed by
/// outgoing edge, alighting fractions keyed by incoming edge.
struct DemandTables {
  std::map<EdgeId, HourlyRates> arrival_rates;
  std::map<EdgeId, HourlyProfile> alighting;
  std::map<EdgeId, double> initial_queue;
  std::vector<QueuePool> pools;
  /// Replaces Poisson sampling for a queue with fixed arrival times (keyed by
  /// any member edge of the queue).
  std::map<EdgeId, std::vector<double>> fixed_arrivals;

  [[nodiscard]] double alighting_fraction(EdgeId in_edge, double t) const;
};

/// Queue level as a right-continuous step function with the integral kept
/// exact between events.
class QueueTracker {
 public:
  struct Step {
    double time;
    double level;
  };

  QueueTracker(QueueIndex id, double initial_level, std::vector<double> arrival_times,
               bool record);

  /// Absorbs every arrival at or before `t` and returns how many there were.
  std::size_t advance_to(double t);
  /// Removes `boarded` passengers at the current time.
  void remove(double boarded);
  void finish(double horizon);

  [[nodiscard]] double level() const { return level_; }
  [[nodiscard]] double time() const { return time_; }
  [[nodiscard]] QueueIndex id() const { return id_; }
  [[nodiscard]] std::size_t total_arrivals() const { return cursor_; }
  [[nodiscard]] double initial_level() const { return initial_; }
  [[nodiscard]] const std::vector<Step>& steps() const { return steps_; }
  [[nodiscard]] std::vector<Step> take_steps() { return std::move(steps_); }

 private:
  void push_step();

  QueueIndex id_;
  double initial_;
  double level_;
  double time_ = 0.0;
  std::vector<double> arrivals_;
  std::size_t cursor_ = 0;
  bool record_;
  std::vector<Step> steps_;
};

/// Bookkeeping of one tram at one stop.
struct StopEventRecord {
  double time = 0.0;  ///< arrival at the stop (departure for an origin event)
  VertexId vertex;
  EdgeId in_edge;   ///< invalid for the origin of a trip
  EdgeId out_edge;  ///< invalid where the trip ends
  TripIndex trip;
  std::size_t position = 0;  ///< vertex index along the trip, 0 = origin
  QueueIndex queue;          ///< invalid where nothing boards
  std::size_t arrivals_since_last = 0;
  double queue_before = 0.0;
  double queue_after = 0.0;
  double onboard_before = 0.0;
  double alighted = 0.0;
  double alighting_fraction = 0.0;
  double boarded = 0.0;
  double onboard_after = 0.0;
  double dwell_delay = 0.0;
  double failure_delay = 0.0;
  double push_delay = 0.0;
  double departure = 0.0;  ///< when the tram leaves onto out_edge
};

}  // namespace tramflow
