#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tramflow/metrics.hpp"
#include "tramflow/scenarios.hpp"
#include "tramflow/solver.hpp"

namespace tramflow {

struct ReportEntry {
  std::string label;
  Scenario scenario;
  MetricsReport metrics;
  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

/// Machine-readable result of `simulate` (one entry) or `sweep` (one entry
/// per grid point).
struct Report {
  std::string command;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::string solver;
  std::vector<ReportEntry> entries;
  friend bool operator==(const Report&, const Report&) = default;
};

/// Every floating-point value rounded to 9 significant digits, i.e. what
/// survives a write/parse cycle.
Report rounded(const Report& report);

std::string render_json(const Report& report);
Report parse_report(const std::string& text, const std::string& origin);

/// Plot-ready CSV tables: totals, waiting per stop and per hour, standing per
/// hour, utilization per line and hour.
void write_tables(const Report& report, const std::filesystem::path& dir);

/// Short human-readable summary.
std::string render_summary(const Report& report);

/// Tram positions sampled every `dt_plot` minutes: t, trip_id, edge_id, x, onboard, delay.
std::string render_trajectories(const TramNetwork& net, const Timetable& timetable,
                                const RunResult& run, double dt_plot = 0.5);
/// One row per stop event.
std::string render_events(const TramNetwork& net, const Timetable& timetable, const RunResult& run);
/// Per edge: injected, delivered and remaining mass of the grid solver, and
/// the largest deviation from the exact edge mass over all steps.
std::string render_upwind_summary(const TramNetwork& net, const RunResult& exact,
                                  const GridField& field);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tramflow
