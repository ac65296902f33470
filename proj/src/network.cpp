#include "tramflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"

namespace tramflow {

VertexId TramNetwork::add_vertex(std::string id, bool is_start, bool is_terminal) {
  if (vertex_lookup_.contains(id)) throw ConfigError("duplicate vertex id '" + id + "'");
  VertexId v{vertices_.size()};
  vertex_lookup_.emplace(id, v.value);
  vertices_.push_back(Vertex{std::move(id), is_start, is_terminal, {}, {}});
  return v;
}

EdgeId TramNetwork::add_edge(std::string id, std::string_view tail, std::string_view head,
                             double length_km, double velocity_km_per_min) {
  if (edge_lookup_.contains(id)) throw ConfigError("duplicate edge id '" + id + "'");
  if (!(length_km > 0.0) || !std::isfinite(length_km))
    throw ConfigError("edge '" + id + "': l_e must be positive and finite");
  if (!(velocity_km_per_min > 0.0) || !std::isfinite(velocity_km_per_min))
    throw ConfigError("edge '" + id + "': w_e must be positive and finite");
  const VertexId t = vertex_id(tail);
  const VertexId h = vertex_id(head);
  EdgeId e{edges_.size()};
  edge_lookup_.emplace(id, e.value);
  edges_.push_back(Edge{std::move(id), t, h, length_km, velocity_km_per_min});
  vertices_[t.value].outgoing.push_back(e);
  vertices_[h.value].incoming.push_back(e);
  return e;
}

bool TramNetwork::is_start(VertexId v) const {
  const auto& vx = vertex(v);
  return vx.start_flag || vx.incoming.empty();
}

bool TramNetwork::is_terminal(VertexId v) const {
  const auto& vx = vertex(v);
  return vx.terminal_flag || vx.outgoing.empty();
}

std::optional<VertexId> TramNetwork::find_vertex(std::string_view id) const {
  auto it = vertex_lookup_.find(std::string(id));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return VertexId{it->second};
}

std::optional<EdgeId> TramNetwork::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return EdgeId{it->second};
}

VertexId TramNetwork::vertex_id(std::string_view id) const {
  if (auto v = find_vertex(id)) return *v;
  throw ConfigError("unknown vertex id '" + std::string(id) + "'");
}

EdgeId TramNetwork::edge_id(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw ConfigError("unknown edge id '" + std::string(id) + "'");
}

std::vector<double> nominal_departures(const TramNetwork& net, const Trip& trip) {
  std::vector<double> out;
  out.reserve(trip.edges.size());
  double t = trip.departure;
  for (EdgeId e : trip.edges) {
    out.push_back(t);
    t += net.edge(e).travel_time();
  }
  return out;
}

std::vector<CapacityEntry> derive_capacity_function(const TramNetwork& net,
                                                    const Timetable& timetable, EdgeId edge) {
  if (!edge.valid() || edge.value >= net.edge_count())
    throw ConfigError("derive_capacity_function: unknown edge");
  std::vector<CapacityEntry> out;
  for (std::size_t i = 0; i < timetable.trips.size(); ++i) {
    const Trip& trip = timetable.trips[i];
    double t = trip.departure;
    for (EdgeId e : trip.edges) {
      if (e == edge) out.push_back({t, trip.capacity, trip.seat_capacity, TripIndex{i}});
      t += net.edge(e).travel_time();
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CapacityEntry& a, const CapacityEntry& b) { return a.time < b.time; });
  return out;
}

RoutingTable::RoutingTable(const TramNetwork& net, const Timetable& timetable)
    : net_(&net), timetable_(&timetable), passages_(net.edge_count()) {
  by_edge_.reserve(net.edge_count());
  for (std::size_t e = 0; e < net.edge_count(); ++e)
    by_edge_.push_back(derive_capacity_function(net, timetable, EdgeId{e}));
  for (std::size_t i = 0; i < timetable.trips.size(); ++i) {
    const Trip& trip = timetable.trips[i];
    const auto deps = nominal_departures(net, trip);
    for (std::size_t k = 0; k < trip.edges.size(); ++k)
      passages_[trip.edges[k].value].push_back({deps[k], TripIndex{i}, k});
  }
  for (auto& list : passages_)
    std::stable_sort(list.begin(), list.end(),
                     [](const Passage& a, const Passage& b) { return a.time < b.time; });
}

std::vector<RoutingTable::Passage> RoutingTable::passages_at(EdgeId e, double t) const {
  const auto& list = passages_.at(e.value);
  auto it = std::lower_bound(list.begin(), list.end(), t - kTimeTolerance,
                             [](const Passage& p, double x) { return p.time < x; });
  std::vector<Passage> out;
  for (; it != list.end() && it->time <= t + kTimeTolerance; ++it) out.push_back(*it);
  return out;
}

RouteResult RoutingTable::route(VertexId vertex, EdgeId in_edge, double t) const {
  const Edge& in = net_->edge(in_edge);
  if (in.head != vertex)
    throw ConfigError("route: edge '" + in.id + "' does not enter vertex '" +
                      net_->vertex(vertex).id + "'");
  // A trip arrives at time t iff it departed onto in_edge at t - l/w.
  const auto arriving = passages_at(in_edge, t - in.travel_time());
  if (arriving.empty()) return {};
  if (arriving.size() > 1)
    throw AdmissibilityViolation("two trips arrive at '" + net_->vertex(vertex).id +
                                 "' via '" + in.id + "' at t=" + fmt9(t));
  const Passage& p = arriving.front();
  const Trip& trip = timetable_->trips[p.trip.value];
  if (p.position + 1 == trip.edges.size()) return {RouteKind::Terminate, EdgeId{}, p.trip};
  const EdgeId out = trip.edges[p.position + 1];
  if (passages_at(out, t).size() > 1)
    throw AdmissibilityViolation("two trips leave '" + net_->vertex(vertex).id + "' onto '" +
                                 net_->edge(out).id + "' at t=" + fmt9(t));
  return {RouteKind::Continue, out, p.trip};
}

std::optional<EdgeId> RoutingTable::inverse_route(VertexId vertex, EdgeId out_edge,
                                                  double t) const {
  const Edge& out = net_->edge(out_edge);
  if (out.tail != vertex)
    throw ConfigError("inverse_route: edge '" + out.id + "' does not leave vertex '" +
                      net_->vertex(vertex).id + "'");
  const auto departing = passages_at(out_edge, t);
  if (departing.empty()) return std::nullopt;
  if (departing.size() > 1)
    throw AdmissibilityViolation("two trips leave '" + net_->vertex(vertex).id + "' onto '" +
                                 out.id + "' at t=" + fmt9(t));
  const Passage& p = departing.front();
  if (p.position == 0) return std::nullopt;
  return timetable_->trips[p.trip.value].edges[p.position - 1];
}

std::string_view to_string(AdmissibilityRule rule) {
  switch (rule) {
    case AdmissibilityRule::InvalidCapacity: return "invalid-capacity";
    case AdmissibilityRule::DisconnectedPath: return "disconnected-path";
    case AdmissibilityRule::NegativeDeparture: return "negative-departure";
    case AdmissibilityRule::Injectivity: return "injectivity-except-empty-set";
    case AdmissibilityRule::DepartureConflict: return "departure-conflict";
    case AdmissibilityRule::CapacityConservation: return "capacity-conservation";
    case AdmissibilityRule::TerminationNotPermitted: return "termination-not-permitted";
  }
  return "unknown";
}

namespace {

const CapacityEntry* unique_entry_at(const std::vector<CapacityEntry>& fn, double t) {
  auto it = std::lower_bound(fn.begin(), fn.end(), t - kTimeTolerance,
                             [](const CapacityEntry& c, double x) { return c.time < x; });
  if (it == fn.end() || it->time > t + kTimeTolerance) return nullptr;
  auto next = std::next(it);
  if (next != fn.end() && next->time <= t + kTimeTolerance) return nullptr;
  return &*it;
}

}  // namespace

AdmissibilityReport validate_schedule(const TramNetwork& net, const Timetable& timetable) {
  AdmissibilityReport report;
  auto add = [&](AdmissibilityRule rule, std::string vertex, double t,
                 std::vector<std::string> trips, std::string message) {
    report.violations.push_back(
        {rule, std::move(vertex), t, std::move(trips), std::move(message)});
  };

  std::vector<bool> path_ok(timetable.trips.size(), true);
  for (const Trip& trip : timetable.trips) {
    const std::size_t i = static_cast<std::size_t>(&trip - timetable.trips.data());
    if (!std::isfinite(trip.capacity) || !(trip.capacity > 0.0) ||
        !std::isfinite(trip.seat_capacity) || trip.seat_capacity < 0.0 ||
        trip.seat_capacity > trip.capacity) {
      add(AdmissibilityRule::InvalidCapacity, "", trip.departure, {trip.id},
          "capacity must satisfy 0 < tau < inf and 0 <= tau_seat <= tau");
    }
    if (!(trip.departure >= 0.0)) {
      add(AdmissibilityRule::NegativeDeparture, "", trip.departure, {trip.id},
          "departure time must be nonnegative");
    }
    if (trip.edges.empty()) {
      path_ok[i] = false;
      add(AdmissibilityRule::DisconnectedPath, "", trip.departure, {trip.id}, "empty edge list");
      continue;
    }
    for (std::size_t k = 0; k + 1 < trip.edges.size(); ++k) {
      if (net.edge(trip.edges[k]).head != net.edge(trip.edges[k + 1]).tail) {
        path_ok[i] = false;
        add(AdmissibilityRule::DisconnectedPath, net.vertex(net.edge(trip.edges[k]).head).id,
            trip.departure, {trip.id},
            "edge '" + net.edge(trip.edges[k + 1]).id + "' does not continue '" +
                net.edge(trip.edges[k]).id + "'");
      }
    }
    const VertexId end = net.edge(trip.edges.back()).head;
    if (!net.is_terminal(end)) {
      const auto deps = nominal_departures(net, trip);
      add(AdmissibilityRule::TerminationNotPermitted, net.vertex(end).id,
          deps.back() + net.edge(trip.edges.back()).travel_time(), {trip.id},
          "trip ends at a vertex that is not terminal");
    }
  }

  // Injectivity except for the empty set: at most one departure per edge and instant.
  RoutingTable routing(net, timetable);
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const auto& fn = routing.capacity_function(EdgeId{e});
    for (std::size_t a = 0; a < fn.size();) {
      std::size_t b = a + 1;
      while (b < fn.size() && fn[b].time - fn[a].time <= kTimeTolerance) ++b;
      if (b - a > 1) {
        std::vector<std::string> ids;
        std::size_t through = 0;
        for (std::size_t k = a; k < b; ++k) {
          const Trip& trip = timetable.trips[fn[k].trip.value];
          ids.push_back(trip.id);
          if (trip.edges.front() != EdgeId{e}) ++through;
        }
        const bool injective_failure = through >= 2;
        const auto& edge = net.edge(EdgeId{e});
        add(injective_failure ? AdmissibilityRule::Injectivity
                              : AdmissibilityRule::DepartureConflict,
            net.vertex(edge.tail).id, fn[a].time, std::move(ids),
            injective_failure
                ? "two arriving trams are routed onto '" + edge.id + "' at the same time"
                : "two trams depart onto '" + edge.id + "' at the same time");
      }
      a = b;
    }
  }

  // Capacity conservation through every vertex a trip passes.
  for (std::size_t i = 0; i < timetable.trips.size(); ++i) {
    const Trip& trip = timetable.trips[i];
    if (!path_ok[i]) continue;
    const auto deps = nominal_departures(net, trip);
    for (std::size_t k = 0; k + 1 < trip.edges.size(); ++k) {
      const CapacityEntry* in = unique_entry_at(routing.capacity_function(trip.edges[k]), deps[k]);
      const CapacityEntry* out =
          unique_entry_at(routing.capacity_function(trip.edges[k + 1]), deps[k + 1]);
      if (in == nullptr || out == nullptr) continue;  // reported as a conflict above
      if (in->capacity != out->capacity) {
        add(AdmissibilityRule::CapacityConservation,
            net.vertex(net.edge(trip.edges[k]).head).id, deps[k + 1], {trip.id},
            "capacity changes across the vertex");
      }
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.time < b.time; });
  return report;
}

}  // namespace tramflow
