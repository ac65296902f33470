#include <functional>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "tramflow/errors.hpp"
#include "tramflow/io.hpp"
#include "tramflow/report.hpp"

using namespace tramflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("tramflow-test-" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kTinyNetwork = R"({
  "vertices": [{"id": "a", "start": true}, {"id": "b"}, {"id": "c", "terminal": true}],
  "edges": [
    {"id": "ab", "tail": "a", "head": "b", "l_e": 1, "w_e": 0.5},
    {"id": "bc", "tail": "b", "head": "c", "l_e": 2, "w_e": 0.5}
  ],
  "trips": [{"id": "x", "line": "1", "edges": ["ab", "bc"], "departure": 10, "tau": 250, "tau_seat": 114}]
})";

}  // namespace

TEST_CASE("a config with only paths gets every default") {
  TempDir dir("cfg-min");
  dir.write("net.json", kTinyNetwork);
  const SimulationConfig c = parse_config(R"({"network": "net.json"})", "cfg.json", dir.path);
  CHECK(c.network == dir.path / "net.json");
  CHECK(c.runs == 1000);
  CHECK(c.seed == 0);
  CHECK(c.solver == SolverChoice::Exact);
  CHECK(c.grid.cfl == 1.0);
  CHECK_FALSE(c.horizon.has_value());
  CHECK_FALSE(c.rates.has_value());
  const Model m = load_model(c);
  CHECK(m.timetable.horizon == 1440.0);
  CHECK(m.timetable.trips.size() == 1);
}

TEST_CASE("config errors carry the file and line") {
  TempDir dir("cfg-err");
  dir.write("net.json", kTinyNetwork);
  const std::string dup = "{\n  \"network\": \"net.json\",\n  \"runs\": 5,\n  \"runs\": 6\n}";
  CHECK(error_of([&] { parse_config(dup, "cfg.json", dir.path); }) ==
        "cfg.json:4: duplicate key 'runs'");

  const std::string unknown = "{\n  \"network\": \"net.json\",\n  \"rnus\": 5\n}";
  CHECK(error_of([&] { parse_config(unknown, "cfg.json", dir.path); }) ==
        "cfg.json:3: unknown key 'rnus'");

  const std::string missing = "{\n  \"network\": \"nowhere.json\"\n}";
  CHECK(error_of([&] { parse_config(missing, "cfg.json", dir.path); }).starts_with("cfg.json:2: cannot read"));

  CHECK(error_of([&] { parse_config("{\"runs\": 3}", "cfg.json", dir.path); }) ==
        "cfg.json: missing required key 'network'");
  CHECK(error_of([&] { parse_config("{\n\"network\": \"net.json\",\n\"runs\": 0}", "c", dir.path); }) ==
        "c:3: runs must be at least 1");
  CHECK(error_of([&] { parse_config("{\"network\": \"net.json\",\n\"grid\": {\"cfl\": 2}}", "c", dir.path); })
            .find("cfl must lie in (0, 1]") != std::string::npos);
  CHECK(error_of([&] { parse_config("{\n\"network\": ", "c", dir.path); }) == "c:2: malformed JSON");
}

TEST_CASE("network document errors") {
  std::string bad_edge = kTinyNetwork;
  bad_edge.replace(bad_edge.find("\"head\": \"c\""), 11, "\"head\": \"q\"");
  CHECK(error_of([&] { parse_network(bad_edge, "n.json"); }).starts_with("n.json:5:"));

  std::string typo = kTinyNetwork;
  typo.replace(typo.find("\"tau_seat\""), 10, "\"tau_seats\"");
  CHECK(error_of([&] { parse_network(typo, "n.json"); }) == "n.json:7: missing required key 'tau_seat'");

  std::string unknown_edge = kTinyNetwork;
  unknown_edge.replace(unknown_edge.find("[\"ab\", \"bc\"]"), 12, "[\"ab\", \"zz\"]");
  CHECK(error_of([&] { parse_network(unknown_edge, "n.json"); }).find("zz") != std::string::npos);
}

TEST_CASE("rate tables") {
  const Model m = parse_network(kTinyNetwork, "n.json");
  const auto rates = parse_rate_table("# unit: per_hour\nstop_id,hour,rate\na,7,90\nb,7,30\n", "r.csv", m.network);
  CHECK(rates.at(m.network.edge_id("ab"))[7] == 1.5);
  CHECK(rates.at(m.network.edge_id("bc"))[7] == 0.5);

  CHECK(error_of([&] { parse_rate_table("stop_id,hour,rate\na,7,90\n", "r.csv", m.network); })
            .starts_with("r.csv:2: no unit given"));
  CHECK(error_of([&] { parse_rate_table("stop_id,hour,rate,unit\na,7,90,per_day\n", "r.csv", m.network); }) ==
        "r.csv:2: unit must be per_min or per_hour");
  CHECK(error_of([&] {
          parse_rate_table("stop_id,hour,rate,unit\na,7,1,per_min\na,7,2,per_min\n", "r.csv", m.network);
        }) == "r.csv:3: duplicate row for this stop, edge and hour");
  CHECK(error_of([&] { parse_rate_table("stop_id,hour,rate,unit\na,24,1,per_min\n", "r.csv", m.network); })
            .find("hour must be an integer") != std::string::npos);
  CHECK(error_of([&] { parse_rate_table("stop_id,rate\na,1\n", "r.csv", m.network); }).find("hour") !=
        std::string::npos);
}

TEST_CASE("alighting tables apply to incoming edges") {
  const Model m = parse_network(kTinyNetwork, "n.json");
  const auto a = parse_alighting_table("stop_id,hour,fraction\nb,16,0.26\n", "a.csv", m.network);
  CHECK(a.at(m.network.edge_id("ab"))[16] == 0.26);
  CHECK_THROWS_AS(parse_alighting_table("stop_id,hour,fraction\nb,16,1.2\n", "a.csv", m.network),
                  ConfigError);
}

TEST_CASE("scenario documents") {
  const Scenario s = parse_scenario(R"({"name": "x", "dwell": {"mode": "paper"}, "cancellation_rate": 0.1,
    "failures": "default", "headway": 20, "line_shifts": {"1": 1}})", "s.json");
  REQUIRE(s.dwell.has_value());
  CHECK(s.dwell->mode == DwellMode::PaperLiteral);
  CHECK(s.dwell->threshold == 50.0);
  CHECK(s.disruptions.cancellation_rate == 0.1);
  CHECK(s.disruptions.failures == DisruptionPlan::default_failures());
  CHECK(*s.headway == 20.0);
  CHECK(s.line_shifts.at("1") == 1.0);
  CHECK(parse_scenario("{}", "s.json") == Scenario{});
  CHECK_THROWS_AS(parse_scenario(R"({"failures": "sometimes"})", "s.json"), ConfigError);
}

TEST_CASE("the line-1 sample carries its stop data") {
  const Model m = tftest::load_dataset("mannheim-line1");
  CHECK(validate_schedule(m.network, m.timetable).admissible());
  auto out_edge = [&](const char* stop) { return m.network.vertex(m.network.vertex_id(stop)).outgoing.front(); };
  auto in_edge = [&](const char* stop) { return m.network.vertex(m.network.vertex_id(stop)).incoming.front(); };
  const double four_pm = 16 * 60 + 30;
  CHECK(m.demand.arrival_rates.at(out_edge("paradeplatz")).at(four_pm) * 60.0 == doctest::Approx(142.0));
  CHECK(m.demand.arrival_rates.at(out_edge("hauptbahnhof")).at(four_pm) * 60.0 == doctest::Approx(169.0));
  CHECK(m.demand.alighting_fraction(in_edge("paradeplatz"), four_pm) == doctest::Approx(0.26));
  CHECK(m.demand.alighting_fraction(in_edge("hauptbahnhof"), four_pm) == doctest::Approx(0.36));
  for (const Trip& t : m.timetable.trips) {
    CHECK(t.seat_capacity == 114.0);
    CHECK(t.capacity - t.seat_capacity == 136.0);
  }
}

TEST_CASE("every bundled dataset loads") {
  for (const char* name : {"toy-line", "mannheim-line1", "feuerwache-network"}) {
    CAPTURE(name);
    const Model m = tftest::load_dataset(name);
    CHECK(validate_schedule(m.network, m.timetable).admissible());
  }
}

TEST_CASE("reports survive a write and parse cycle") {
  const Model m = tftest::load_dataset("toy-line");
  Scenario s;
  s.dwell = DwellDelayModel{};
  s.disruptions.cancellation_rate = 0.2;
  s.line_shifts["1"] = 0.5;
  Report r;
  r.command = "simulate";
  r.model = m.name;
  r.seed = 42;
  r.runs = 12;
  r.solver = "exact";
  r.entries.push_back({"a", s, monte_carlo(m, s, {12, 42, 1})});
  r.entries.push_back({"b", Scenario{}, monte_carlo(m, Scenario{}, {12, 42, 1})});
  const std::string text = render_json(r);
  const Report back = parse_report(text, "report.json");
  CHECK(back == rounded(r));
  CHECK(render_json(back) == text);
  CHECK(back.seed == 42);
  CHECK_THROWS_AS(parse_report("{\"format\": \"other\"}", "r.json"), ConfigError);
}

TEST_CASE("tables are written next to the report") {
  TempDir dir("tables");
  const Model m = tftest::load_dataset("toy-line");
  Report r;
  r.command = "simulate";
  r.entries.push_back({"base", Scenario{}, monte_carlo(m, Scenario{}, {5, 1, 1})});
  write_tables(r, dir.path);
  for (const char* f : {"totals.csv", "waiting_by_stop.csv", "by_hour.csv", "utilization.csv"})
    CHECK(fs::exists(dir.path / f));
  const std::string totals = read_text_file(dir.path / "totals.csv");
  CHECK(std::count(totals.begin(), totals.end(), '\n') == 2);
}
