#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tramflow/metrics.hpp"
#include "tramflow/scenarios.hpp"
#include "tramflow/solver.hpp"

namespace tramflow {

/// Throws ConfigError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

enum class SolverChoice { Exact, Upwind, Both };
std::string_view to_string(SolverChoice s);
SolverChoice parse_solver(std::string_view text);

struct SimulationConfig {
  std::filesystem::path network;
  std::optional<std::filesystem::path> rates;
  std::optional<std::filesystem::path> alighting;
  std::optional<std::filesystem::path> scenario;
  std::optional<double> horizon;  ///< overrides the network document; default 1440
  std::size_t runs = 1000;
  std::uint64_t seed = 0;
  SolverChoice solver = SolverChoice::Exact;
  GridParams grid{};
  std::optional<std::filesystem::path> output_dir;
};

/// JSON documents reject duplicate and unknown keys; errors carry
/// "<origin>:<line>: ..." diagnostics where a position is known.
///
/// Paths in the document are resolved against `base_dir`.
SimulationConfig parse_config(const std::string& text, const std::string& origin,
                              const std::filesystem::path& base_dir);
SimulationConfig load_config(const std::filesystem::path& path);

/// A network document: vertices, edges, trips or service patterns, queue
/// pools, initial queues and the optional measurement stop.
Model parse_network(const std::string& text, const std::string& origin);
Model load_network(const std::filesystem::path& path);

/// Rate table columns: stop_id, [edge_id], hour, rate, [unit]. Rows without an
/// edge apply to the stop and are split evenly over its outgoing edges.
/// Rates are returned in passengers per minute.
std::map<EdgeId, HourlyRates> parse_rate_table(const std::string& text, const std::string& origin,
                                               const TramNetwork& net);
/// Alighting table columns: stop_id, [edge_id], hour, fraction. The edge is
/// the incoming edge; rows without one apply to every incoming edge.
std::map<EdgeId, HourlyProfile> parse_alighting_table(const std::string& text,
                                                      const std::string& origin,
                                                      const TramNetwork& net);

Scenario parse_scenario(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::filesystem::path& path);

/// Network plus demand tables named by the config.
Model load_model(const SimulationConfig& config);

}  // namespace tramflow
