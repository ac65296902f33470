#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "tramflow/io.hpp"
#include "tramflow/metrics.hpp"
#include "tramflow/network.hpp"
#include "tramflow/stochastic.hpp"

namespace tftest {

inline std::filesystem::path data_dir() { return TRAMFLOW_DATA_DIR; }

inline tramflow::Model load_dataset(const std::string& name) {
  return tramflow::load_model(tramflow::load_config(data_dir() / name / "config.json"));
}

/// Rate profile of the morning-peak queue plot: 0.1/min at night, 1.5/min from 6 to 9.
inline tramflow::HourlyRates morning_profile() {
  std::array<double, 24> r{};
  for (std::size_t h = 0; h < 24; ++h) {
    if (h < 5) r[h] = 0.1;
    else if (h == 5) r[h] = 0.6;
    else if (h < 9) r[h] = 1.5;
    else if (h < 16) r[h] = 0.8;
    else if (h < 19) r[h] = 1.2;
    else r[h] = 0.4;
  }
  return tramflow::HourlyRates(r);
}

/// A straight line s0 -> ... -> s{n-1}; edge i has travel time lengths[i] (w = 1).
inline tramflow::TramNetwork chain(const std::vector<double>& lengths) {
  tramflow::TramNetwork net;
  const std::size_t n = lengths.size() + 1;
  for (std::size_t i = 0; i < n; ++i)
    net.add_vertex("s" + std::to_string(i), i == 0, i + 1 == n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    net.add_edge("s" + std::to_string(i) + "-s" + std::to_string(i + 1), "s" + std::to_string(i),
                 "s" + std::to_string(i + 1), lengths[i], 1.0);
  return net;
}

inline tramflow::Trip trip_over_all(const tramflow::TramNetwork& net, std::string id, double dep,
                                    double tau = 250.0, double seats = 114.0) {
  tramflow::Trip t;
  t.id = std::move(id);
  t.line = "1";
  for (std::size_t e = 0; e < net.edge_count(); ++e) t.edges.push_back(tramflow::EdgeId{e});
  t.departure = dep;
  t.capacity = tau;
  t.seat_capacity = seats;
  return t;
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace tftest
