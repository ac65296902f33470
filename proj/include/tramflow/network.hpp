#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tramflow {

/// Event times closer than this (minutes) are treated as simultaneous.
inline constexpr double kTimeTolerance = 1e-9;

/// Typed index into one of the network's tables.
template <class Tag>
struct Index {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t value = npos;

  constexpr Index() = default;
  constexpr explicit Index(std::size_t v) : value(v) {}
  [[nodiscard]] constexpr bool valid() const { return value != npos; }
  friend constexpr auto operator<=>(Index, Index) = default;
};

using VertexId = Index<struct VertexTag>;
using EdgeId = Index<struct EdgeTag>;
using TripIndex = Index<struct TripTag>;

struct Vertex {
  std::string id;
  bool start_flag = false;
  bool terminal_flag = false;
  std::vector<EdgeId> incoming;
  std::vector<EdgeId> outgoing;
};

struct Edge {
  std::string id;
  VertexId tail;
  VertexId head;
  double length_km = 0.0;
  double velocity_km_per_min = 0.0;

  [[nodiscard]] double travel_time() const { return length_km / velocity_km_per_min; }
};

/// Directed metric graph of stops (vertices) and tracks (edges).
///
/// Sources are always start vertices and sinks are always terminal vertices;
/// inner vertices may carry either flag explicitly.
class TramNetwork {
 public:
  VertexId add_vertex(std::string id, bool is_start = false, bool is_terminal = false);
  EdgeId add_edge(std::string id, std::string_view tail, std::string_view head,
                  double length_km, double velocity_km_per_min);

  [[nodiscard]] const Vertex& vertex(VertexId v) const { return vertices_.at(v.value); }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
  [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

  [[nodiscard]] bool is_start(VertexId v) const;
  [[nodiscard]] bool is_terminal(VertexId v) const;

  [[nodiscard]] std::optional<VertexId> find_vertex(std::string_view id) const;
  [[nodiscard]] std::optional<EdgeId> find_edge(std::string_view id) const;
  /// Throws ConfigError for unknown ids.
  [[nodiscard]] VertexId vertex_id(std::string_view id) const;
  [[nodiscard]] EdgeId edge_id(std::string_view id) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> vertex_lookup_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
};

/// One scheduled tram journey along a connected edge path.
struct Trip {
  std::string id;
  std::string line;
  std::vector<EdgeId> edges;
  double departure = 0.0;  ///< minutes from midnight, at the tail of edges.front()
  double capacity = 0.0;   ///< total capacity (seats + standing)
  double seat_capacity = 0.0;
  bool peak = false;  ///< generated by a peak-window service pattern
};

struct Timetable {
  std::vector<Trip> trips;
  double horizon = 1440.0;
};

/// Nominal departure time of `trip` onto each of its edges.
std::vector<double> nominal_departures(const TramNetwork& net, const Trip& trip);

struct CapacityEntry {
  double time = 0.0;
  double capacity = 0.0;
  double seat_capacity = 0.0;
  TripIndex trip;
};

/// Materializes the capacity function of `edge` as its nonzero atoms,
/// sorted by departure time.
std::vector<CapacityEntry> derive_capacity_function(const TramNetwork& net,
                                                    const Timetable& timetable, EdgeId edge);

enum class RouteKind { Continue, Terminate, NoArrival };

struct RouteResult {
  RouteKind kind = RouteKind::NoArrival;
  EdgeId edge;  ///< valid only for RouteKind::Continue
  TripIndex trip;
};

/// Derived routing views over an immutable (network, timetable) pair.
class RoutingTable {
 public:
  RoutingTable(const TramNetwork& net, const Timetable& timetable);

  /// The continuation of the trip arriving at `vertex` via `in_edge` at time `t`.
  /// Throws AdmissibilityViolation when two trips claim the same arrival or
  /// departure slot.
  [[nodiscard]] RouteResult route(VertexId vertex, EdgeId in_edge, double t) const;

  /// The unique incoming edge feeding `out_edge` at time `t`, or nullopt for a
  /// trip originating at `vertex` or when nothing departs.
  [[nodiscard]] std::optional<EdgeId> inverse_route(VertexId vertex, EdgeId out_edge,
                                                    double t) const;

  [[nodiscard]] const std::vector<CapacityEntry>& capacity_function(EdgeId e) const {
    return by_edge_.at(e.value);
  }

 private:
  struct Passage {
    double time;
    TripIndex trip;
    std::size_t position;
  };
  [[nodiscard]] std::vector<Passage> passages_at(EdgeId e, double t) const;

  const TramNetwork* net_;
  const Timetable* timetable_;
  std::vector<std::vector<CapacityEntry>> by_edge_;
  std::vector<std::vector<Passage>> passages_;
};

enum class AdmissibilityRule {
  InvalidCapacity,
  DisconnectedPath,
  NegativeDeparture,
  Injectivity,
  DepartureConflict,
  CapacityConservation,
  TerminationNotPermitted,
};

std::string_view to_string(AdmissibilityRule rule);

struct Violation {
  AdmissibilityRule rule;
  std::string vertex;
  double time = 0.0;
  std::vector<std::string> trips;
  std::string message;
};

struct AdmissibilityReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool admissible() const { return violations.empty(); }
};

AdmissibilityReport validate_schedule(const TramNetwork& net, const Timetable& timetable);

}  // namespace tramflow
