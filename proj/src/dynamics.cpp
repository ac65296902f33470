#include "tramflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "tramflow/errors.hpp"

namespace tramflow {

Alighting alight(double onboard, double r_a, bool is_trip_end) {
  if (!(r_a >= 0.0 && r_a <= 1.0)) throw ConfigError("alighting fraction must lie in [0, 1]");
  if (!(onboard >= 0.0)) throw DomainError("alight: negative onboard count");
  if (is_trip_end) return {onboard, 0.0};
  const double alighted = r_a * onboard;
  return {alighted, onboard - alighted};
}

double board(double queue_left_limit, double capacity, double onboard_after_alight) {
  if (!(queue_left_limit >= 0.0)) throw DomainError("board: negative queue");
  if (onboard_after_alight > capacity)
    throw InternalError("board: onboard count exceeds tram capacity");
  return std::max(0.0, std::min(queue_left_limit, capacity - onboard_after_alight));
}

QueueState advance_queue(QueueState queue, const ArrivalStream& arrivals, double from_t,
                         double to_t) {
  if (to_t < from_t) throw DomainError("advance_queue: time reversal");
  queue.level += static_cast<double>(cumulative_arrivals(arrivals, to_t)) -
                 static_cast<double>(cumulative_arrivals(arrivals, from_t));
  queue.last_update = to_t;
  return queue;
}

QueueLayout::QueueLayout(const TramNetwork& net, const std::vector<QueuePool>& pools)
    : by_edge_(net.edge_count()) {
  for (const QueuePool& pool : pools) {
    if (pool.edges.empty()) continue;
    Queue q{pool.stop, {}, net.vertex(pool.stop).id + "["};
    for (EdgeId e : pool.edges) {
      if (net.edge(e).tail != pool.stop)
        throw ConfigError("queue pool at '" + net.vertex(pool.stop).id + "': edge '" +
                          net.edge(e).id + "' does not leave this stop");
      if (by_edge_[e.value].valid())
        throw ConfigError("edge '" + net.edge(e).id + "' belongs to two queue pools");
      by_edge_[e.value] = QueueIndex{queues_.size()};
      q.edges.push_back(e);
      q.name += (q.edges.size() > 1 ? "+" : "") + net.edge(e).id;
    }
    q.name += "]";
    queues_.push_back(std::move(q));
  }
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    if (by_edge_[e].valid()) continue;
    const Edge& edge = net.edge(EdgeId{e});
    by_edge_[e] = QueueIndex{queues_.size()};
    queues_.push_back({edge.tail, {EdgeId{e}}, net.vertex(edge.tail).id + "[" + edge.id + "]"});
  }
}

double DemandTables::alighting_fraction(EdgeId in_edge, double t) const {
  auto it = alighting.find(in_edge);
  return it == alighting.end() ? 0.0 : it->second.at(t);
}

QueueTracker::QueueTracker(QueueIndex id, double initial_level, std::vector<double> arrival_times,
                           bool record)
    : id_(id),
      initial_(initial_level),
      level_(initial_level),
      arrivals_(std::move(arrival_times)),
      record_(record) {
  if (!(initial_level >= 0.0)) throw DomainError("initial queue must be nonnegative");
  if (record_) {
    steps_.reserve(arrivals_.size() + 16);
    push_step();
  }
}

void QueueTracker::push_step() {
  if (!steps_.empty() && steps_.back().time == time_)
    steps_.back().level = level_;
  else
    steps_.push_back({time_, level_});
}

std::size_t QueueTracker::advance_to(double t) {
  if (t < time_) throw DomainError("queue tracker: time reversal");
  const std::size_t before = cursor_;
  while (cursor_ < arrivals_.size() && arrivals_[cursor_] <= t) {
    time_ = arrivals_[cursor_++];
    level_ += 1.0;
    if (record_) push_step();
  }
  time_ = t;
  return cursor_ - before;
}

void QueueTracker::remove(double boarded) {
  if (boarded == 0.0) return;
  level_ -= boarded;
  if (level_ < 0.0) {
    if (level_ < -1e-9) throw InternalError("queue became negative");
    level_ = 0.0;
  }
  if (record_) push_step();
}

void QueueTracker::finish(double horizon) {
  advance_to(std::max(horizon, time_));
  if (record_ && steps_.back().time < horizon) steps_.push_back({horizon, level_});
}

}  // namespace tramflow
