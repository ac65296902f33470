#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"
#include "tramflow/metrics.hpp"

namespace tramflow {

RunStreams run_streams(std::uint64_t master_seed, std::size_t index) {
  const RngStream run = RngStream(master_seed).split(index);
  return {run.split(0), run.split(1), run.split(2)};
}

ScenarioRun run_scenario(const Model& model, const Timetable& prepared, const Scenario& scenario,
                         std::uint64_t master_seed, std::size_t index, bool validate) {
  RunStreams streams = run_streams(master_seed, index);
  ScenarioRun out;
  out.timetable = scenario.disruptions.cancellation_rate > 0.0
                      ? apply_cancellations(prepared, scenario.disruptions.cancellation_rate,
                                            streams.cancellations)
                      : prepared;
  RunOptions options;
  options.dwell = scenario.dwell;
  options.validate = validate;
  if (scenario.has_failures()) {
    out.failures = inject_failures(scenario.disruptions, out.timetable, streams.failures);
    options.failures = &out.failures;
  }
  out.result = run_exact(model.network, out.timetable, model.demand, out.timetable.horizon,
                         streams.arrivals, options);
  out.metrics =
      compute_run_metrics(model.network, out.timetable, out.result, model.measurement_stop);
  return out;
}

namespace {

const char* const kScalarNames[] = {"waiting_time_h", "standing_time_h", "dwell_delay_min",
                                    "failure_delay_min", "failures",     "boarded",
                                    "residual_queue"};

std::vector<double> scalars(const RunMetrics& m) {
  return {m.waiting.total_hours, m.standing.total_hours,
          m.dwell_delay,         m.failure_delay,
          static_cast<double>(m.failures), m.boarded,
          m.residual_queue};
}

struct Outcome {
  bool ok = false;
  std::string error;
  RunMetrics metrics;
};

struct Accumulator {
  std::map<std::string, std::vector<double>> samples;
  std::map<std::string, double> waiting_by_stop;
  std::vector<double> waiting_by_hour;
  std::vector<double> standing_by_hour;
  std::map<std::string, std::vector<double>> cu_sum;
  std::map<std::string, std::vector<double>> cu_count;
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;

  void add(Outcome&& o) {
    if (!o.ok) {
      ++failed;
      if (errors.size() < 5) errors.push_back(std::move(o.error));
      return;
    }
    ++ok;
    const RunMetrics& m = o.metrics;
    const auto values = scalars(m);
    for (std::size_t i = 0; i < values.size(); ++i) samples[kScalarNames[i]].push_back(values[i]);
    for (const auto& [stop, h] : m.waiting.by_location) waiting_by_stop[stop] += h;
    add_into(waiting_by_hour, m.waiting.by_hour);
    add_into(standing_by_hour, m.standing.by_hour);
    for (const UtilizationSample& s : m.utilization) {
      if (!s.cu) continue;
      auto& sum = cu_sum[s.line];
      auto& count = cu_count[s.line];
      const std::size_t bins = waiting_by_hour.size();
      sum.resize(bins, 0.0);
      count.resize(bins, 0.0);
      const auto h = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, s.time) / 60.0));
      sum[h] += *s.cu;
      count[h] += 1.0;
    }
  }

  static void add_into(std::vector<double>& acc, const std::vector<double>& v) {
    if (acc.size() < v.size()) acc.resize(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
  }
};

}  // namespace

MetricsReport monte_carlo(const Model& model, const Scenario& scenario,
                          const MonteCarloConfig& config) {
  if (config.runs == 0) throw DomainError("monte_carlo: at least one run is required");
  const Timetable prepared = prepare_timetable(model.network, model.timetable, scenario);
  const AdmissibilityReport admissibility = validate_schedule(model.network, prepared);

  Accumulator acc;
  std::map<std::size_t, Outcome> pending;
  std::size_t next_fold = 0;
  std::mutex mutex;
  std::atomic<std::size_t> next_run{0};

  auto work = [&] {
    for (;;) {
      const std::size_t index = next_run.fetch_add(1);
      if (index >= config.runs) return;
      Outcome o;
      if (!admissibility.admissible()) {
        const Violation& v = admissibility.violations.front();
        o.error = std::string(to_string(v.rule)) + " at '" + v.vertex + "' t=" + fmt9(v.time);
      } else {
        try {
          o.metrics =
              run_scenario(model, prepared, scenario, config.master_seed, index, false).metrics;
          o.ok = true;
        } catch (const AdmissibilityViolation& e) {
          o.error = e.what();
        } catch (const DomainError& e) {
          o.error = e.what();
        }
      }
      std::lock_guard lock(mutex);
      pending.emplace(index, std::move(o));
      for (auto it = pending.find(next_fold); it != pending.end(); it = pending.find(next_fold)) {
        acc.add(std::move(it->second));
        pending.erase(it);
        ++next_fold;
      }
    }
  };

  std::size_t threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, config.runs);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  MetricsReport report;
  report.runs = config.runs;
  report.failed = acc.failed;
  report.master_seed = config.master_seed;
  report.valid = static_cast<double>(acc.failed) <= 0.1 * static_cast<double>(config.runs);
  report.failure_messages = std::move(acc.errors);
  const double n = acc.ok > 0 ? static_cast<double>(acc.ok) : 1.0;
  for (const char* name : kScalarNames) {
    auto& values = acc.samples[name];
    report.metrics[name] = summarize(values);
    report.samples[name] = std::move(values);
  }
  for (const auto& [stop, h] : acc.waiting_by_stop) report.mean_waiting_by_stop[stop] = h / n;
  for (double h : acc.waiting_by_hour) report.mean_waiting_by_hour.push_back(h / n);
  for (double h : acc.standing_by_hour) report.mean_standing_by_hour.push_back(h / n);
  for (const auto& [line, sum] : acc.cu_sum) {
    const auto& count = acc.cu_count[line];
    std::vector<double> mean(sum.size(), 0.0);
    for (std::size_t h = 0; h < sum.size(); ++h)
      if (count[h] > 0.0) mean[h] = sum[h] / count[h];
    report.mean_cu_by_hour[line] = std::move(mean);
  }
  return report;
}

}  // namespace tramflow
