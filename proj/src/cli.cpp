#include "tramflow/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"
#include "tramflow/io.hpp"
#include "tramflow/report.hpp"

namespace tramflow {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string input;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> solver;
  std::optional<std::string> scenario;
  std::optional<std::string> out;
  bool trajectories = false;
  std::optional<std::string> dwell_mode;
  std::size_t threads = 0;
  std::string kind = "frequency";
  std::vector<double> headways;
  std::vector<double> rates;
};

bool looks_like_config(const std::string& text) {
  // Network documents always declare vertices; configs name a network file.
  return text.find("\"vertices\"") == std::string::npos &&
         text.find("\"network\"") != std::string::npos;
}

fs::path output_dir(const Options& o, const SimulationConfig& c) {
  if (o.out) return *o.out;
  if (c.output_dir) return *c.output_dir;
  if (const char* env = std::getenv("TRAMFLOW_OUTPUT_DIR"); env != nullptr && *env != '\0')
    return env;
  return "tramflow-out";
}

int cmd_validate(const Options& o, std::ostream& out) {
  const std::string text = read_text_file(o.input);
  Model model;
  if (looks_like_config(text)) {
    model = load_model(load_config(o.input));
  } else {
    model = parse_network(text, o.input);
  }
  Timetable timetable = model.timetable;
  if (o.scenario) timetable = prepare_timetable(model.network, timetable, load_scenario(*o.scenario));
  const AdmissibilityReport report = validate_schedule(model.network, timetable);
  out << (model.name.empty() ? o.input : model.name) << ": " << timetable.trips.size()
      << " trips, " << report.violations.size() << " violation(s)\n";
  for (const Violation& v : report.violations) {
    out << "  " << to_string(v.rule) << " at '" << v.vertex << "' t=" << fmt9(v.time) << " trips=";
    for (std::size_t i = 0; i < v.trips.size(); ++i) out << (i ? "," : "") << v.trips[i];
    out << ": " << v.message << "\n";
  }
  out << (report.admissible() ? "admissible\n" : "not admissible\n");
  return report.admissible() ? kExitOk : kExitValidation;
}

struct Loaded {
  SimulationConfig config;
  Model model;
  Scenario scenario;
  std::string scenario_label = "baseline";
};

Loaded load_inputs(const Options& o) {
  Loaded l;
  l.config = load_config(o.input);
  if (o.seed) l.config.seed = *o.seed;
  if (o.runs) {
    if (*o.runs == 0) throw ConfigError("--runs must be at least 1");
    l.config.runs = *o.runs;
  }
  if (o.solver) l.config.solver = parse_solver(*o.solver);
  if (o.scenario) l.config.scenario = fs::path(*o.scenario);
  l.model = load_model(l.config);
  if (l.config.scenario) {
    l.scenario = load_scenario(*l.config.scenario);
    l.scenario_label = l.config.scenario->stem().string();
  }
  if (o.dwell_mode) {
    const DwellMode mode = parse_dwell_mode(*o.dwell_mode);
    if (!l.scenario.dwell) l.scenario.dwell = DwellDelayModel{};
    l.scenario.dwell->mode = mode;
  }
  return l;
}

int check_admissible(const Model& model, const Scenario& scenario, std::ostream& err) {
  const Timetable prepared = prepare_timetable(model.network, model.timetable, scenario);
  const AdmissibilityReport report = validate_schedule(model.network, prepared);
  if (report.admissible()) return kExitOk;
  for (const Violation& v : report.violations)
    err << "error: " << to_string(v.rule) << " at '" << v.vertex << "' t=" << fmt9(v.time)
        << ": " << v.message << "\n";
  return kExitValidation;
}

int finish_report(const Report& report, const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  write_text_file(dir / "report.json", render_json(report));
  write_tables(report, dir);
  out << render_summary(report);
  out << "wrote " << (dir / "report.json").string() << "\n";
  for (const ReportEntry& e : report.entries)
    if (!e.metrics.valid) return kExitRuntime;
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load_inputs(o);
  if (int rc = check_admissible(l.model, l.scenario, err); rc != kExitOk) return rc;
  const fs::path dir = output_dir(o, l.config);
  fs::create_directories(dir);

  const bool wants_grid = l.config.solver != SolverChoice::Exact;
  if (o.trajectories || wants_grid) {
    const Timetable prepared = prepare_timetable(l.model.network, l.model.timetable, l.scenario);
    const ScenarioRun run = run_scenario(l.model, prepared, l.scenario, l.config.seed, 0);
    if (o.trajectories) {
      write_text_file(dir / "trajectories.csv",
                      render_trajectories(l.model.network, run.timetable, run.result));
      write_text_file(dir / "events.csv", render_events(l.model.network, run.timetable, run.result));
    }
    if (wants_grid) {
      const GridField field = run_upwind(l.model.network, run.timetable, run.result, l.config.grid);
      write_text_file(dir / "upwind.csv", render_upwind_summary(l.model.network, run.result, field));
    }
    for (const std::string& w : run.result.warnings) err << "warning: " << w << "\n";
  }

  Report report;
  report.command = "simulate";
  report.model = l.model.name;
  report.seed = l.config.seed;
  report.runs = l.config.runs;
  report.solver = std::string(to_string(l.config.solver));
  const MetricsReport metrics =
      monte_carlo(l.model, l.scenario, {l.config.runs, l.config.seed, o.threads});
  report.entries.push_back({l.scenario_label, l.scenario, metrics});
  return finish_report(report, dir, out);
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load_inputs(o);
  Report report;
  report.command = "sweep-" + o.kind;
  report.model = l.model.name;
  report.seed = l.config.seed;
  report.runs = l.config.runs;
  report.solver = std::string(to_string(l.config.solver));

  std::vector<std::pair<std::string, Scenario>> grid;
  if (o.kind == "frequency") {
    const std::vector<double> headways =
        o.headways.empty() ? std::vector<double>{5, 10, 20, 30, 40} : o.headways;
    for (double h : headways) {
      Scenario s = l.scenario;
      s.headway = h;
      grid.emplace_back("headway=" + fmt9(h), s);
    }
  } else if (o.kind == "cancellation") {
    const std::vector<double> headways =
        o.headways.empty() ? std::vector<double>{10, 20, 30} : o.headways;
    const std::vector<double> rates =
        o.rates.empty() ? std::vector<double>{0.0, 0.1, 0.2, 0.3} : o.rates;
    for (double h : headways)
      for (double r : rates) {
        Scenario s = l.scenario;
        s.headway = h;
        s.disruptions.cancellation_rate = r;
        grid.emplace_back("headway=" + fmt9(h) + " rate=" + fmt9(r), s);
      }
  } else {
    throw ConfigError("unknown sweep kind '" + o.kind + "' (expected frequency|cancellation)");
  }

  for (const auto& [label, s] : grid)
    if (int rc = check_admissible(l.model, s, err); rc != kExitOk) return rc;
  for (const auto& [label, s] : grid)
    report.entries.push_back(
        {label, s, monte_carlo(l.model, s, {l.config.runs, l.config.seed, o.threads})});
  return finish_report(report, output_dir(o, l.config), out);
}

int cmd_report(const Options& o, std::ostream& out) {
  const Report report = parse_report(read_text_file(o.input), o.input);
  out << render_summary(report);
  if (o.out) {
    write_tables(report, *o.out);
    out << "wrote tables to " << *o.out << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passenger-flow simulation on tram networks", "tramflow"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a schedule for admissibility");
  validate->add_option("input", o.input, "network document or simulation config")->required();
  validate->add_option("--scenario", o.scenario, "scenario file (headway, line shifts)");

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("config", o.input, "simulation config")->required();
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--runs", o.runs, "Monte Carlo runs");
    cmd->add_option("--solver", o.solver, "exact | upwind | both");
    cmd->add_option("--scenario", o.scenario, "scenario file");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--dwell-mode", o.dwell_mode, "sum | paper");
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one scenario");
  add_run_options(simulate);
  simulate->add_flag("--emit-trajectories", o.trajectories,
                     "write tram trajectories and the event log of run 0");
  auto* sweep = app.add_subcommand("sweep", "Run a frequency or cancellation-rate grid");
  add_run_options(sweep);
  sweep->add_option("--kind", o.kind, "frequency | cancellation");
  sweep->add_option("--headways", o.headways, "headways in minutes")->delimiter(',');
  sweep->add_option("--rates", o.rates, "cancellation rates")->delimiter(',');
  auto* report = app.add_subcommand("report", "Re-render a saved report");
  report->add_option("report", o.input, "report.json")->required();
  report->add_option("--out", o.out, "directory for the CSV tables");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (report->parsed()) return cmd_report(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const AdmissibilityViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace tramflow
