#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tramflow/network.hpp"
#include "tramflow/rng.hpp"

namespace tramflow {

enum class DwellMode {
  Sum,           ///< excess of b + a over the threshold
  PaperLiteral,  ///< (b - a - threshold) * slope under the b + a > threshold case, clamped at 0
};

std::string_view to_string(DwellMode mode);
DwellMode parse_dwell_mode(std::string_view text);

struct DwellDelayModel {
  double threshold = 50.0;
  double slope = 1.0 / 50.0;
  DwellMode mode = DwellMode::Sum;
  friend bool operator==(const DwellDelayModel&, const DwellDelayModel&) = default;
};

struct DwellDelay {
  double minutes = 0.0;
  bool clamped = false;  ///< a negative value was raised to zero
};

/// Extra stop time caused by a large passenger exchange.
DwellDelay dwell_delay(double boarded, double alighted, const DwellDelayModel& model);

struct FailureSpec {
  double probability = 0.0;  ///< per stop event
  double delay = 0.0;        ///< minutes
  friend bool operator==(const FailureSpec&, const FailureSpec&) = default;
};

struct DisruptionPlan {
  double cancellation_rate = 0.0;
  std::vector<FailureSpec> failures;

  /// 0.5 % of stop events break down for 8 min, a further 1 % for 4 min.
  static std::vector<FailureSpec> default_failures() { return {{0.005, 8.0}, {0.01, 4.0}}; }
  friend bool operator==(const DisruptionPlan&, const DisruptionPlan&) = default;
};

/// Removes floor(rate * |trips|) trips. Half of them are spread evenly over the
/// day's departure order (fixed stride, random offset); the rest are drawn
/// uniformly without replacement from the remaining trips.
Timetable apply_cancellations(const Timetable& timetable, double rate, RngStream& rng);

/// Extra delay per (trip, vertex position along the trip).
struct FailureSchedule {
  std::vector<std::vector<double>> delays;
  std::size_t failure_count = 0;
  std::size_t event_count = 0;

  [[nodiscard]] double delay_at(TripIndex trip, std::size_t position) const;
};

/// Draws independent breakdowns for every stop event at which a trip departs.
FailureSchedule inject_failures(const DisruptionPlan& plan, const Timetable& timetable,
                                RngStream& rng);

/// Regenerates the peak-window trips of every line at `headway` minutes; trips
/// outside the peak window are kept. Each block of evenly spaced peak trips
/// keeps its first departure and its span; a trailing partial slot is dropped.
Timetable build_frequency_scenario(const TramNetwork& net, const Timetable& base, double headway);

/// Moves every trip of `line` by `minutes`.
Timetable shift_line(const Timetable& base, std::string_view line, double minutes);

/// Trip id used by generated services.
std::string service_trip_id(std::string_view line, std::string_view first_edge, double departure);

/// Everything that perturbs a nominal day.
struct Scenario {
  std::optional<DwellDelayModel> dwell;  ///< passenger-exchange delays, off when empty
  DisruptionPlan disruptions;
  std::optional<double> headway;
  std::map<std::string, double> line_shifts;

  [[nodiscard]] bool has_failures() const { return !disruptions.failures.empty(); }
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Applies the deterministic parts of a scenario (headway, line shifts).
Timetable prepare_timetable(const TramNetwork& net, const Timetable& base,
                            const Scenario& scenario);

}  // namespace tramflow
