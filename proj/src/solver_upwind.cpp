#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "tramflow/errors.hpp"
#include "tramflow/solver.hpp"

namespace tramflow {

namespace {

std::vector<std::size_t> succession_order(const TramNetwork& net, const Timetable& timetable) {
  const std::size_t n = net.edge_count();
  std::vector<std::set<std::size_t>> next(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const Trip& trip : timetable.trips)
    for (std::size_t k = 0; k + 1 < trip.edges.size(); ++k)
      if (next[trip.edges[k].value].insert(trip.edges[k + 1].value).second)
        ++indegree[trip.edges[k + 1].value];

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t e = 0; e < n; ++e)
    if (indegree[e] == 0) ready.push(e);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t e = ready.top();
    ready.pop();
    order.push_back(e);
    for (std::size_t f : next[e])
      if (--indegree[f] == 0) ready.push(f);
  }
  if (order.size() != n)
    throw ConfigError("upwind solver: trips form a cycle in the edge succession graph");
  return order;
}

struct Injection {
  double time;
  double mass;
};

}  // namespace

GridField run_upwind(const TramNetwork& net, const Timetable& timetable, const RunResult& exact,
                     const GridParams& params) {
  if (!(params.cfl > 0.0 && params.cfl <= 1.0))
    throw DomainError("upwind solver: CFL number must lie in (0, 1]");
  if (!(params.dx_fraction > 0.0 && params.dx_fraction <= 1.0))
    throw DomainError("upwind solver: dx_fraction must lie in (0, 1]");

  const std::size_t n_edges = net.edge_count();
  const double horizon = exact.horizon;
  const auto cells = static_cast<std::size_t>(std::llround(1.0 / params.dx_fraction));

  // Realized arrivals at each edge's head, for attributing outflow to trams.
  std::vector<std::vector<std::pair<double, TripIndex>>> exits(n_edges);
  for (const Traversal& tr : exact.traversals) exits[tr.edge.value].push_back({tr.exit, tr.trip});
  for (auto& list : exits) std::sort(list.begin(), list.end());

  std::vector<std::vector<const StopEventRecord*>> departures(n_edges);
  for (const StopEventRecord& rec : exact.events)
    if (rec.out_edge.valid()) departures[rec.out_edge.value].push_back(&rec);

  std::vector<std::map<std::size_t, double>> delivered(n_edges);  // per edge, per trip
  GridField field;
  field.edges.resize(n_edges);

  for (std::size_t e : succession_order(net, timetable)) {
    const Edge& edge = net.edge(EdgeId{e});
    EdgeGrid& g = field.edges[e];
    g.edge = EdgeId{e};
    g.cells = cells;
    g.dx = edge.length_km / static_cast<double>(cells);
    g.cfl = params.cfl;
    g.dt = params.cfl * g.dx / edge.velocity_km_per_min;
    g.t0 = -0.5 * g.dt;
    g.steps = static_cast<std::size_t>(std::ceil((horizon - g.t0) / g.dt));

    std::vector<Injection> inflow;
    for (const StopEventRecord* rec : departures[e]) {
      double carried = 0.0;
      if (rec->in_edge.valid()) {
        const auto& up = delivered[rec->in_edge.value];
        if (auto it = up.find(rec->trip.value); it != up.end())
          carried = it->second * (1.0 - rec->alighting_fraction);
      }
      inflow.push_back({rec->departure, carried + rec->boarded});
    }
    std::vector<double> boundary(g.steps, 0.0);
    for (const Injection& in : inflow) {
      if (in.mass == 0.0) continue;
      const double slot = std::ceil((in.time - g.t0) / g.dt) - 1.0;
      if (slot < 0.0 || slot >= static_cast<double>(g.steps)) continue;
      const auto j = static_cast<std::size_t>(slot);
      boundary[j] += in.mass / (edge.velocity_km_per_min * g.dt);
      g.injected += in.mass;
    }

    const double c = params.cfl;
    std::vector<double> nu(cells + 1, 0.0);
    g.mass.assign(g.steps + 1, 0.0);
    if (params.keep_field) g.field.push_back(nu);
    const auto& arrivals = exits[e];
    for (std::size_t j = 0; j < g.steps; ++j) {
      nu[0] = boundary[j];
      const double out = c * nu[cells] * g.dx;
      for (std::size_t i = cells; i >= 1; --i) nu[i] -= c * (nu[i] - nu[i - 1]);
      double total = 0.0;
      for (std::size_t i = 1; i <= cells; ++i) {
        total += nu[i];
        g.min_value = std::min(g.min_value, nu[i]);
      }
      g.mass[j + 1] = total * g.dx;
      if (params.keep_field) g.field.push_back(nu);
      if (out > 0.0) {
        const double t = g.time(j + 1);
        OutflowRecord rec{t, out, TripIndex{}};
        if (!arrivals.empty()) {
          auto it = std::lower_bound(arrivals.begin(), arrivals.end(),
                                     std::pair<double, TripIndex>{t, TripIndex{0}});
          if (it == arrivals.end() ||
              (it != arrivals.begin() && t - std::prev(it)->first <= it->first - t))
            --it;
          rec.trip = it->second;
          delivered[e][rec.trip.value] += out;
        }
        g.outflow.push_back(rec);
      }
    }
    nu[0] = 0.0;
    g.final_nodes = std::move(nu);
  }
  return field;
}

}  // namespace tramflow
