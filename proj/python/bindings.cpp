#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tramflow/cli.hpp"
#include "tramflow/errors.hpp"
#include "tramflow/io.hpp"
#include "tramflow/metrics.hpp"
#include "tramflow/report.hpp"
#include "tramflow/scenarios.hpp"
#include "tramflow/stochastic.hpp"

namespace py = pybind11;
using namespace tramflow;

namespace {

py::list violations(const AdmissibilityReport& report) {
  py::list out;
  for (const Violation& v : report.violations) {
    py::dict d;
    d["rule"] = std::string(to_string(v.rule));
    d["vertex"] = v.vertex;
    d["time"] = v.time;
    d["trips"] = v.trips;
    d["message"] = v.message;
    out.append(d);
  }
  return out;
}

Scenario make_scenario(std::optional<std::string> path, std::optional<double> headway,
                       std::optional<double> cancellation_rate, std::optional<std::string> dwell_mode) {
  Scenario s = path ? load_scenario(*path) : Scenario{};
  if (headway) s.headway = *headway;
  if (cancellation_rate) s.disruptions.cancellation_rate = *cancellation_rate;
  if (dwell_mode) {
    if (!s.dwell) s.dwell = DwellDelayModel{};
    s.dwell->mode = parse_dwell_mode(*dwell_mode);
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_tramflow, m) {
  m.doc() = "Passenger-flow simulation on tram networks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<AdmissibilityViolation>(m, "AdmissibilityViolation", PyExc_RuntimeError);

  py::class_<Model>(m, "Model")
      .def_readonly("name", &Model::name)
      .def_property_readonly("trip_count", [](const Model& md) { return md.timetable.trips.size(); })
      .def_property_readonly("stops", [](const Model& md) {
        std::vector<std::string> ids;
        for (const Vertex& v : md.network.vertices()) ids.push_back(v.id);
        return ids;
      })
      .def_property_readonly("horizon", [](const Model& md) { return md.timetable.horizon; });

  m.def("load_network", [](const std::string& path) { return load_network(path); },
        py::arg("path"), "Load a network document.");
  m.def("load_model", [](const std::string& config) { return load_model(load_config(config)); },
        py::arg("config"), "Load the network and demand tables named by a config file.");

  m.def("validate", [](const Model& model) { return violations(validate_schedule(model.network, model.timetable)); },
        py::arg("model"), "Admissibility violations of the model's timetable (empty when admissible).");

  m.def(
      "simulate",
      [](const Model& model, std::size_t runs, std::uint64_t seed, std::optional<std::string> scenario,
         std::optional<double> headway, std::optional<double> cancellation_rate,
         std::optional<std::string> dwell_mode, std::size_t threads) {
        const Scenario s = make_scenario(scenario, headway, cancellation_rate, dwell_mode);
        Report report;
        report.command = "simulate";
        report.model = model.name;
        report.seed = seed;
        report.runs = runs;
        report.solver = "exact";
        {
          py::gil_scoped_release release;
          report.entries.push_back({"python", s, monte_carlo(model, s, {runs, seed, threads})});
        }
        return render_json(report);
      },
      py::arg("model"), py::arg("runs") = 100, py::arg("seed") = 0, py::arg("scenario") = py::none(),
      py::arg("headway") = py::none(), py::arg("cancellation_rate") = py::none(),
      py::arg("dwell_mode") = py::none(), py::arg("threads") = 0,
      "Monte Carlo simulation; returns the JSON report text.");

  m.def(
      "sample_arrivals",
      [](const std::vector<double>& hourly_rates, double horizon, std::uint64_t seed) {
        if (hourly_rates.size() != 24) throw ConfigError("expected 24 hourly rates");
        std::array<double, 24> values{};
        std::copy(hourly_rates.begin(), hourly_rates.end(), values.begin());
        RngStream rng(seed);
        return sample_arrivals(HourlyRates(values), "python", horizon, rng).times;
      },
      py::arg("hourly_rates"), py::arg("horizon"), py::arg("seed"),
      "Poisson arrival times (minutes) for 24 hourly rates in passengers per minute.");

  m.def(
      "dwell_delay",
      [](double boarded, double alighted, const std::string& mode) {
        DwellDelayModel model;
        model.mode = parse_dwell_mode(mode);
        return dwell_delay(boarded, alighted, model).minutes;
      },
      py::arg("boarded"), py::arg("alighted"), py::arg("mode") = "sum");

  m.def("capacity_utilization", &capacity_utilization, py::arg("onboard"), py::arg("seats"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "tramflow");
        std::ostringstream out;
        std::ostringstream err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line; returns (exit code, stdout, stderr).");
}
