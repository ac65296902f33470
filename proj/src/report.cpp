#include "tramflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"

namespace tramflow {

using nlohmann::ordered_json;

namespace {

void round_all(std::vector<double>& v) {
  for (double& x : v) x = round9(x);
}

MetricSummary round_summary(MetricSummary s) {
  s.mean = round9(s.mean);
  s.p20 = round9(s.p20);
  s.p80 = round9(s.p80);
  s.min = round9(s.min);
  s.max = round9(s.max);
  return s;
}

Scenario round_scenario(Scenario s) {
  if (s.dwell) {
    s.dwell->threshold = round9(s.dwell->threshold);
    s.dwell->slope = round9(s.dwell->slope);
  }
  s.disruptions.cancellation_rate = round9(s.disruptions.cancellation_rate);
  for (FailureSpec& f : s.disruptions.failures) {
    f.probability = round9(f.probability);
    f.delay = round9(f.delay);
  }
  if (s.headway) s.headway = round9(*s.headway);
  for (auto& [_, m] : s.line_shifts) m = round9(m);
  return s;
}

ordered_json scenario_json(const Scenario& s) {
  ordered_json j = ordered_json::object();
  if (s.dwell)
    j["dwell"] = {{"threshold", s.dwell->threshold},
                  {"slope", s.dwell->slope},
                  {"mode", std::string(to_string(s.dwell->mode))}};
  else
    j["dwell"] = nullptr;
  j["cancellation_rate"] = s.disruptions.cancellation_rate;
  j["failures"] = ordered_json::array();
  for (const FailureSpec& f : s.disruptions.failures)
    j["failures"].push_back({{"probability", f.probability}, {"delay", f.delay}});
  j["headway"] = s.headway ? ordered_json(*s.headway) : ordered_json(nullptr);
  j["line_shifts"] = ordered_json::object();
  for (const auto& [line, m] : s.line_shifts) j["line_shifts"][line] = m;
  return j;
}

Scenario scenario_from(const ordered_json& j) {
  Scenario s;
  if (!j.at("dwell").is_null()) {
    const auto& d = j.at("dwell");
    s.dwell = DwellDelayModel{d.at("threshold").get<double>(), d.at("slope").get<double>(),
                              parse_dwell_mode(d.at("mode").get<std::string>())};
  }
  s.disruptions.cancellation_rate = j.at("cancellation_rate").get<double>();
  for (const auto& f : j.at("failures"))
    s.disruptions.failures.push_back({f.at("probability").get<double>(), f.at("delay").get<double>()});
  if (!j.at("headway").is_null()) s.headway = j.at("headway").get<double>();
  for (const auto& [line, m] : j.at("line_shifts").items()) s.line_shifts[line] = m.get<double>();
  return s;
}

ordered_json summary_json(const MetricSummary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"p20", s.p20},
          {"p80", s.p80},     {"min", s.min},   {"max", s.max}};
}

MetricSummary summary_from(const ordered_json& j) {
  return {j.at("count").get<std::size_t>(), j.at("mean").get<double>(), j.at("p20").get<double>(),
          j.at("p80").get<double>(),        j.at("min").get<double>(),  j.at("max").get<double>()};
}

ordered_json metrics_json(const MetricsReport& m) {
  ordered_json j;
  j["runs"] = m.runs;
  j["failed"] = m.failed;
  j["valid"] = m.valid;
  j["master_seed"] = m.master_seed;
  j["failure_messages"] = m.failure_messages;
  j["metrics"] = ordered_json::object();
  for (const auto& [name, s] : m.metrics) j["metrics"][name] = summary_json(s);
  j["mean_waiting_by_stop"] = m.mean_waiting_by_stop;
  j["mean_waiting_by_hour"] = m.mean_waiting_by_hour;
  j["mean_standing_by_hour"] = m.mean_standing_by_hour;
  j["mean_cu_by_hour"] = m.mean_cu_by_hour;
  j["samples"] = m.samples;
  return j;
}

MetricsReport metrics_from(const ordered_json& j) {
  MetricsReport m;
  m.runs = j.at("runs").get<std::size_t>();
  m.failed = j.at("failed").get<std::size_t>();
  m.valid = j.at("valid").get<bool>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.failure_messages = j.at("failure_messages").get<std::vector<std::string>>();
  for (const auto& [name, s] : j.at("metrics").items()) m.metrics[name] = summary_from(s);
  m.mean_waiting_by_stop = j.at("mean_waiting_by_stop").get<std::map<std::string, double>>();
  m.mean_waiting_by_hour = j.at("mean_waiting_by_hour").get<std::vector<double>>();
  m.mean_standing_by_hour = j.at("mean_standing_by_hour").get<std::vector<double>>();
  m.mean_cu_by_hour = j.at("mean_cu_by_hour").get<std::map<std::string, std::vector<double>>>();
  m.samples = j.at("samples").get<std::map<std::string, std::vector<double>>>();
  return m;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string opt_number(const std::optional<double>& v) { return v ? fmt9(*v) : ""; }

}  // namespace

Report rounded(const Report& report) {
  Report r = report;
  for (ReportEntry& e : r.entries) {
    e.scenario = round_scenario(e.scenario);
    MetricsReport& m = e.metrics;
    for (auto& [_, s] : m.metrics) s = round_summary(s);
    for (auto& [_, v] : m.samples) round_all(v);
    for (auto& [_, v] : m.mean_waiting_by_stop) v = round9(v);
    round_all(m.mean_waiting_by_hour);
    round_all(m.mean_standing_by_hour);
    for (auto& [_, v] : m.mean_cu_by_hour) round_all(v);
  }
  return r;
}

std::string render_json(const Report& report) {
  const Report r = rounded(report);
  ordered_json j;
  j["format"] = "tramflow-report/1";
  j["command"] = r.command;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["runs"] = r.runs;
  j["solver"] = r.solver;
  j["entries"] = ordered_json::array();
  for (const ReportEntry& e : r.entries)
    j["entries"].push_back(
        {{"label", e.label}, {"scenario", scenario_json(e.scenario)}, {"results", metrics_json(e.metrics)}});
  return j.dump(1) + "\n";
}

Report parse_report(const std::string& text, const std::string& origin) {
  try {
    const ordered_json j = ordered_json::parse(text);
    if (j.at("format") != "tramflow-report/1")
      throw ConfigError(origin + ": not a tramflow report");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.runs = j.at("runs").get<std::size_t>();
    r.solver = j.at("solver").get<std::string>();
    for (const auto& e : j.at("entries"))
      r.entries.push_back({e.at("label").get<std::string>(), scenario_from(e.at("scenario")),
                           metrics_from(e.at("results"))});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": malformed report (" + e.what() + ")");
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_tables(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Report r = rounded(report);

  std::ostringstream totals;
  totals << "label,headway,cancellation_rate,runs,failed,waiting_mean_h,waiting_p20_h,"
            "waiting_p80_h,standing_mean_h,standing_p20_h,standing_p80_h,dwell_delay_mean_min,"
            "failure_delay_mean_min,residual_queue_mean\n";
  for (const ReportEntry& e : r.entries) {
    const auto& m = e.metrics.metrics;
    auto get = [&](const char* name) {
      auto it = m.find(name);
      return it == m.end() ? MetricSummary{} : it->second;
    };
    const auto w = get("waiting_time_h");
    const auto s = get("standing_time_h");
    totals << csv_cell(e.label) << ',' << opt_number(e.scenario.headway) << ','
           << fmt9(e.scenario.disruptions.cancellation_rate) << ',' << e.metrics.runs << ','
           << e.metrics.failed << ',' << fmt9(w.mean) << ',' << fmt9(w.p20) << ',' << fmt9(w.p80)
           << ',' << fmt9(s.mean) << ',' << fmt9(s.p20) << ',' << fmt9(s.p80) << ','
           << fmt9(get("dwell_delay_min").mean) << ',' << fmt9(get("failure_delay_min").mean) << ','
           << fmt9(get("residual_queue").mean) << '\n';
  }
  write_text_file(dir / "totals.csv", totals.str());

  std::ostringstream by_stop;
  by_stop << "label,stop_id,waiting_mean_h\n";
  for (const ReportEntry& e : r.entries)
    for (const auto& [stop, h] : e.metrics.mean_waiting_by_stop)
      by_stop << csv_cell(e.label) << ',' << csv_cell(stop) << ',' << fmt9(h) << '\n';
  write_text_file(dir / "waiting_by_stop.csv", by_stop.str());

  std::ostringstream by_hour;
  by_hour << "label,hour,waiting_mean_h,standing_mean_h\n";
  for (const ReportEntry& e : r.entries) {
    const auto& w = e.metrics.mean_waiting_by_hour;
    const auto& s = e.metrics.mean_standing_by_hour;
    for (std::size_t h = 0; h < std::max(w.size(), s.size()); ++h)
      by_hour << csv_cell(e.label) << ',' << h << ',' << fmt9(h < w.size() ? w[h] : 0.0) << ','
              << fmt9(h < s.size() ? s[h] : 0.0) << '\n';
  }
  write_text_file(dir / "by_hour.csv", by_hour.str());

  std::ostringstream cu;
  cu << "label,line,hour,cu_mean\n";
  for (const ReportEntry& e : r.entries)
    for (const auto& [line, series] : e.metrics.mean_cu_by_hour)
      for (std::size_t h = 0; h < series.size(); ++h)
        cu << csv_cell(e.label) << ',' << csv_cell(line) << ',' << h << ',' << fmt9(series[h])
           << '\n';
  write_text_file(dir / "utilization.csv", cu.str());
}

std::string render_summary(const Report& report) {
  std::ostringstream out;
  out << report.command << " " << report.model << "  runs=" << report.runs
      << " seed=" << report.seed << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %14s %14s %14s %14s %8s\n", "scenario", "waiting [h]",
                "p20-p80", "standing [h]", "p20-p80", "failed");
  out << line;
  for (const ReportEntry& e : report.entries) {
    const auto& m = e.metrics.metrics;
    const MetricSummary w = m.contains("waiting_time_h") ? m.at("waiting_time_h") : MetricSummary{};
    const MetricSummary s =
        m.contains("standing_time_h") ? m.at("standing_time_h") : MetricSummary{};
    char wb[64];
    char sb[64];
    std::snprintf(wb, sizeof wb, "%.2f-%.2f", w.p20, w.p80);
    std::snprintf(sb, sizeof sb, "%.2f-%.2f", s.p20, s.p80);
    std::snprintf(line, sizeof line, "%-28s %14.3f %14s %14.3f %14s %8zu%s\n", e.label.c_str(),
                  w.mean, wb, s.mean, sb, e.metrics.failed,
                  e.metrics.valid ? "" : "  INVALID");
    out << line;
  }
  return out.str();
}

std::string render_trajectories(const TramNetwork& net, const Timetable& timetable,
                                const RunResult& run, double dt_plot) {
  if (!(dt_plot > 0.0)) throw DomainError("trajectory sampling step must be positive");
  std::ostringstream out;
  out << "t,trip_id,edge_id,x,onboard,delay\n";
  std::vector<const Traversal*> order;
  for (const Traversal& tr : run.traversals) order.push_back(&tr);
  std::stable_sort(order.begin(), order.end(), [](const Traversal* a, const Traversal* b) {
    return a->trip.value != b->trip.value ? a->trip.value < b->trip.value : a->entry < b->entry;
  });
  for (const Traversal* tr : order) {
    const Edge& edge = net.edge(tr->edge);
    const double end = std::min(tr->exit, run.horizon);
    for (double k = std::ceil(tr->entry / dt_plot); k * dt_plot <= end; k += 1.0) {
      const double t = k * dt_plot;
      const double x = std::min(edge.length_km, edge.velocity_km_per_min * (t - tr->entry));
      out << fmt9(t) << ',' << csv_cell(timetable.trips[tr->trip.value].id) << ','
          << csv_cell(edge.id) << ',' << fmt9(x) << ',' << fmt9(tr->onboard) << ','
          << fmt9(tr->accrued_delay) << '\n';
    }
  }
  return out.str();
}

std::string render_events(const TramNetwork& net, const Timetable& timetable,
                          const RunResult& run) {
  std::ostringstream out;
  out << "time,stop_id,trip_id,in_edge,out_edge,queue_before,boarded,alighted,onboard_before,"
         "onboard_after,dwell_delay,failure_delay,push_delay,departure\n";
  for (const StopEventRecord& e : run.events) {
    out << fmt9(e.time) << ',' << csv_cell(net.vertex(e.vertex).id) << ','
        << csv_cell(timetable.trips[e.trip.value].id) << ','
        << (e.in_edge.valid() ? csv_cell(net.edge(e.in_edge).id) : "") << ','
        << (e.out_edge.valid() ? csv_cell(net.edge(e.out_edge).id) : "") << ','
        << fmt9(e.queue_before) << ',' << fmt9(e.boarded) << ',' << fmt9(e.alighted) << ','
        << fmt9(e.onboard_before) << ',' << fmt9(e.onboard_after) << ',' << fmt9(e.dwell_delay)
        << ',' << fmt9(e.failure_delay) << ',' << fmt9(e.push_delay) << ',' << fmt9(e.departure)
        << '\n';
  }
  return out.str();
}

std::string render_upwind_summary(const TramNetwork& net, const RunResult& exact,
                                  const GridField& field) {
  std::ostringstream out;
  out << "edge_id,cells,dx_km,dt_min,cfl,steps,injected,outflow,final_mass,max_abs_deviation\n";
  for (const EdgeGrid& g : field.edges) {
    double outflow = 0.0;
    for (const OutflowRecord& o : g.outflow) outflow += o.mass;
    const auto reference = exact_mass_series(exact, g);
    double deviation = 0.0;
    for (std::size_t k = 0; k < g.mass.size(); ++k)
      deviation = std::max(deviation, std::abs(g.mass[k] - reference[k]));
    out << csv_cell(net.edge(g.edge).id) << ',' << g.cells << ',' << fmt9(g.dx) << ','
        << fmt9(g.dt) << ',' << fmt9(g.cfl) << ',' << g.steps << ',' << fmt9(g.injected) << ','
        << fmt9(outflow) << ',' << fmt9(g.mass.empty() ? 0.0 : g.mass.back()) << ','
        << fmt9(deviation) << '\n';
  }
  return out.str();
}

}  // namespace tramflow
