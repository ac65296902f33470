#include "tramflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "tramflow/errors.hpp"
#include "tramflow/format.hpp"

namespace tramflow {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::Exact: return "exact";
    case SolverChoice::Upwind: return "upwind";
    case SolverChoice::Both: return "both";
  }
  return "exact";
}

SolverChoice parse_solver(std::string_view text) {
  if (text == "exact") return SolverChoice::Exact;
  if (text == "upwind") return SolverChoice::Upwind;
  if (text == "both") return SolverChoice::Both;
  throw ConfigError("unknown solver '" + std::string(text) + "' (expected exact|upwind|both)");
}

namespace {

// Line of every key and array element, keyed by JSON pointer. Also rejects
// duplicate keys, which the JSON parser would silently merge.
std::unordered_map<std::string, int> scan_lines(const std::string& text,
                                                const std::string& origin) {
  struct Frame {
    bool object;
    std::string path;
    std::set<std::string> keys;
    std::string last_key;
    bool expecting_key = true;
    std::size_t index = 0;
    bool value_started = false;
  };
  std::unordered_map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;
  auto child_path = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& top = stack.back();
    return top.path + "/" + (top.object ? top.last_key : std::to_string(top.index));
  };
  auto value_start = [&] {
    if (!stack.empty() && !stack.back().object && !stack.back().value_started) {
      lines.emplace(child_path(), line);
      stack.back().value_started = true;
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    switch (c) {
      case '\n': ++line; break;
      case '{':
      case '[': {
        value_start();
        const std::string path = child_path();
        stack.push_back({c == '{', path, {}, {}, true, 0, false});
        break;
      }
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        break;
      case ',':
        if (!stack.empty()) {
          if (stack.back().object) {
            stack.back().expecting_key = true;
          } else {
            ++stack.back().index;
            stack.back().value_started = false;
          }
        }
        break;
      case '"': {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          if (text[i] == '\n') ++line;
          s += text[i];
        }
        if (!stack.empty() && stack.back().object && stack.back().expecting_key) {
          Frame& top = stack.back();
          if (!top.keys.insert(s).second)
            throw ConfigError(origin + ":" + std::to_string(line) + ": duplicate key '" + s + "'");
          top.last_key = s;
          top.expecting_key = false;
          lines.emplace(top.path + "/" + s, line);
        } else {
          value_start();
        }
        break;
      }
      default:
        if (c != ' ' && c != '\t' && c != '\r' && c != ':') value_start();
        break;
    }
  }
  return lines;
}

struct Document {
  json root;
  std::string origin;
  std::unordered_map<std::string, int> lines;

  Document(const std::string& text, std::string name) : origin(std::move(name)) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
      throw ConfigError(origin + ":" + std::to_string(line) + ": malformed JSON");
    }
    lines = scan_lines(text, origin);
  }

  [[nodiscard]] std::string where(const std::string& path) const {
    for (std::string p = path;; p = p.substr(0, p.rfind('/'))) {
      if (auto it = lines.find(p); it != lines.end())
        return origin + ":" + std::to_string(it->second);
      if (p.empty()) return origin;
    }
  }
};

// Typed access to one JSON object; every key must be consumed.
class Node {
 public:
  Node(const Document& doc, const json& value, std::string path)
      : doc_(&doc), value_(&value), path_(std::move(path)) {
    if (!value.is_object()) fail("", "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const {
    return value_->contains(key) && !value_->at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!value_->contains(key)) fail("", "missing required key '" + key + "'");
    return value_->at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "'" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "'" + key + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    return has(key) ? number(key) : fallback;
  }
  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned()) fail(key, "'" + key + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::optional<std::string> optional_text(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return text(key);
  }
  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = value_->at(key);
    if (!v.is_boolean()) fail(key, "'" + key + "' must be true or false");
    return v.get<bool>();
  }
  std::vector<std::string> texts(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail(key, "'" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(key + "/" + std::to_string(i), "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }
  std::vector<Node> objects(const std::string& key) {
    seen_.insert(key);
    std::vector<Node> out;
    if (!has(key)) return out;
    const json& v = value_->at(key);
    if (!v.is_array()) fail(key, "'" + key + "' must be an array");
    for (std::size_t i = 0; i < v.size(); ++i)
      out.emplace_back(*doc_, v[i], path_ + "/" + key + "/" + std::to_string(i));
    return out;
  }
  Node object(const std::string& key) { return Node(*doc_, raw(key), path_ + "/" + key); }
  /// Marks an optional key as handled.
  void allow(const std::string& key) { seen_.insert(key); }

  /// Throws for keys that were never read.
  void finish() const {
    for (const auto& [key, _] : value_->items())
      if (!seen_.contains(key)) fail(key, "unknown key '" + key + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(doc_->where(key.empty() ? path_ : path_ + "/" + key) + ": " + message);
  }
  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] const json& value() const { return *value_; }
  [[nodiscard]] const Document& doc() const { return *doc_; }

 private:
  const Document* doc_;
  const json* value_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<EdgeId> edge_list(const TramNetwork& net, Node& node, const std::string& key) {
  std::vector<EdgeId> out;
  for (const std::string& id : node.texts(key)) {
    auto e = net.find_edge(id);
    if (!e) node.fail(key, "unknown edge id '" + id + "'");
    out.push_back(*e);
  }
  if (out.empty()) node.fail(key, "'" + key + "' must not be empty");
  return out;
}

double positive_modulo(double x, double m) {
  const double r = std::fmod(x, m);
  return r < 0.0 ? r + m : r;
}

void add_services(Model& model, Node& svc) {
  const TramNetwork& net = model.network;
  const std::string line = svc.text("line");
  const auto edges = edge_list(net, svc, "edges");
  const double tau = svc.number("tau");
  const double tau_seat = svc.number("tau_seat");

  double anchor_offset = 0.0;
  std::optional<double> anchor_minute;
  if (svc.has("anchor")) {
    Node anchor = svc.object("anchor");
    const std::string vertex = anchor.text("vertex");
    anchor_minute = anchor.number("minute");
    anchor.finish();
    const auto v = net.find_vertex(vertex);
    if (!v) anchor.fail("vertex", "unknown vertex id '" + vertex + "'");
    bool found = net.edge(edges.front()).tail == *v;
    for (std::size_t k = 0; !found && k < edges.size(); ++k) {
      anchor_offset += net.edge(edges[k]).travel_time();
      found = net.edge(edges[k]).head == *v;
    }
    if (!found) anchor.fail("vertex", "anchor vertex '" + vertex + "' is not on the route");
  } else {
    svc.allow("anchor");
  }

  for (Node& w : svc.objects("windows")) {
    const double from = w.number("from");
    const double to = w.number("to");
    const double headway = w.number("headway");
    const bool peak = w.boolean("peak", false);
    w.finish();
    if (!(headway > 0.0)) w.fail("headway", "headway must be positive");
    if (!(to > from)) w.fail("to", "window must satisfy from < to");
    double first = from;
    if (anchor_minute) first = from + positive_modulo(*anchor_minute - anchor_offset - from, headway);
    for (double d = first; d < to - 1e-9; d += headway) {
      const double dep = std::round(d * 1e9) / 1e9;
      model.timetable.trips.push_back(
          {service_trip_id(line, net.edge(edges.front()).id, dep), line, edges, dep, tau, tau_seat,
           peak});
    }
  }
  svc.finish();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct CsvRow {
  int line;
  std::map<std::string, std::string> cells;
};

struct Csv {
  std::vector<CsvRow> rows;
  std::map<std::string, std::string> directives;  ///< "# key: value" comment lines
};

Csv read_csv(const std::string& text, const std::string& origin,
             const std::vector<std::string>& required, const std::vector<std::string>& optional) {
  Csv csv;
  std::vector<std::string> header;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    if (raw[raw.find_first_not_of(" \t")] == '#') {
      const auto colon = raw.find(':');
      if (colon != std::string::npos) {
        auto key = split_csv(raw.substr(raw.find('#') + 1, colon - raw.find('#') - 1));
        auto value = split_csv(raw.substr(colon + 1));
        if (!key.empty() && !value.empty()) csv.directives[key.front()] = value.front();
      }
      continue;
    }
    auto cells = split_csv(raw);
    if (header.empty()) {
      header = cells;
      std::set<std::string> names;
      for (const auto& h : header) {
        if (std::find(required.begin(), required.end(), h) == required.end() &&
            std::find(optional.begin(), optional.end(), h) == optional.end())
          throw ConfigError(origin + ":" + std::to_string(line) + ": unknown column '" + h + "'");
        if (!names.insert(h).second)
          throw ConfigError(origin + ":" + std::to_string(line) + ": duplicate column '" + h + "'");
      }
      for (const auto& r : required)
        if (!names.contains(r))
          throw ConfigError(origin + ":" + std::to_string(line) + ": missing column '" + r + "'");
      continue;
    }
    if (cells.size() != header.size())
      throw ConfigError(origin + ":" + std::to_string(line) + ": expected " +
                        std::to_string(header.size()) + " cells, found " +
                        std::to_string(cells.size()));
    CsvRow row{line, {}};
    for (std::size_t i = 0; i < header.size(); ++i) row.cells[header[i]] = cells[i];
    csv.rows.push_back(std::move(row));
  }
  if (header.empty()) throw ConfigError(origin + ": missing header row");
  return csv;
}

double parse_number(const std::string& cell, const std::string& where, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
    throw ConfigError(where + ": '" + column + "' is not a number: '" + cell + "'");
  return v;
}

std::size_t parse_hour(const std::string& cell, const std::string& where) {
  const double h = parse_number(cell, where, "hour");
  if (h < 0.0 || h > 23.0 || h != std::floor(h))
    throw ConfigError(where + ": hour must be an integer in 0..23");
  return static_cast<std::size_t>(h);
}

std::string cell_or_empty(const CsvRow& row, const std::string& column) {
  auto it = row.cells.find(column);
  return it == row.cells.end() ? "" : it->second;
}

}  // namespace

std::map<EdgeId, HourlyRates> parse_rate_table(const std::string& text, const std::string& origin,
                                               const TramNetwork& net) {
  const Csv csv = read_csv(text, origin, {"stop_id", "hour", "rate"}, {"edge_id", "unit"});
  std::string default_unit;
  if (auto it = csv.directives.find("unit"); it != csv.directives.end()) default_unit = it->second;
  std::map<EdgeId, HourlyRates> out;
  std::set<std::tuple<std::string, std::string, std::size_t>> seen;
  for (const CsvRow& row : csv.rows) {
    const std::string where = origin + ":" + std::to_string(row.line);
    const std::string stop = cell_or_empty(row, "stop_id");
    const std::string edge = cell_or_empty(row, "edge_id");
    const std::size_t hour = parse_hour(cell_or_empty(row, "hour"), where);
    double rate = parse_number(cell_or_empty(row, "rate"), where, "rate");
    std::string unit = cell_or_empty(row, "unit");
    if (unit.empty()) unit = default_unit;
    if (unit.empty())
      throw ConfigError(where + ": no unit given (add a unit column or a '# unit: per_min' line)");
    if (unit == "per_hour")
      rate /= 60.0;
    else if (unit != "per_min")
      throw ConfigError(where + ": unit must be per_min or per_hour");
    if (rate < 0.0) throw ConfigError(where + ": rate must be nonnegative");
    if (!seen.insert({stop, edge, hour}).second)
      throw ConfigError(where + ": duplicate row for this stop, edge and hour");
    const auto v = net.find_vertex(stop);
    if (!v) throw ConfigError(where + ": unknown stop '" + stop + "'");
    std::vector<EdgeId> targets;
    if (edge.empty()) {
      targets = net.vertex(*v).outgoing;
      if (targets.empty()) throw ConfigError(where + ": stop '" + stop + "' has no outgoing edge");
    } else {
      const auto e = net.find_edge(edge);
      if (!e) throw ConfigError(where + ": unknown edge '" + edge + "'");
      if (net.edge(*e).tail != *v)
        throw ConfigError(where + ": edge '" + edge + "' does not leave stop '" + stop + "'");
      targets.push_back(*e);
    }
    const double share = rate / static_cast<double>(targets.size());
    for (EdgeId e : targets) {
      HourlyRates& r = out[e];
      r.set(hour, r[hour] + share);
    }
  }
  return out;
}

std::map<EdgeId, HourlyProfile> parse_alighting_table(const std::string& text,
                                                      const std::string& origin,
                                                      const TramNetwork& net) {
  const Csv csv = read_csv(text, origin, {"stop_id", "hour", "fraction"}, {"edge_id"});
  std::map<EdgeId, HourlyProfile> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const CsvRow& row : csv.rows) {
    const std::string where = origin + ":" + std::to_string(row.line);
    const std::string stop = cell_or_empty(row, "stop_id");
    const std::string edge = cell_or_empty(row, "edge_id");
    const std::size_t hour = parse_hour(cell_or_empty(row, "hour"), where);
    const double r = parse_number(cell_or_empty(row, "fraction"), where, "fraction");
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError(where + ": fraction must lie in [0, 1]");
    const auto v = net.find_vertex(stop);
    if (!v) throw ConfigError(where + ": unknown stop '" + stop + "'");
    std::vector<EdgeId> targets;
    if (edge.empty()) {
      targets = net.vertex(*v).incoming;
    } else {
      const auto e = net.find_edge(edge);
      if (!e) throw ConfigError(where + ": unknown edge '" + edge + "'");
      if (net.edge(*e).head != *v)
        throw ConfigError(where + ": edge '" + edge + "' does not enter stop '" + stop + "'");
      targets.push_back(*e);
    }
    for (EdgeId e : targets) {
      if (!seen.insert({e.value, hour}).second)
        throw ConfigError(where + ": alighting fraction for edge '" + net.edge(e).id +
                          "' and hour " + std::to_string(hour) + " given twice");
      out[e].set(hour, r);
    }
  }
  return out;
}

Model parse_network(const std::string& text, const std::string& origin) {
  const Document doc(text, origin);
  Node root(doc, doc.root, "");
  Model model;
  model.name = root.optional_text("name").value_or("");
  root.optional_text("description");
  model.timetable.horizon = root.number("horizon", 1440.0);
  if (!(model.timetable.horizon > 0.0)) root.fail("horizon", "horizon must be positive");

  for (Node& v : root.objects("vertices")) {
    const std::string id = v.text("id");
    const bool start = v.boolean("start", false);
    const bool terminal = v.boolean("terminal", false);
    v.finish();
    try {
      model.network.add_vertex(id, start, terminal);
    } catch (const ConfigError& e) {
      v.fail("id", e.what());
    }
  }
  for (Node& e : root.objects("edges")) {
    const std::string id = e.text("id");
    const std::string tail = e.text("tail");
    const std::string head = e.text("head");
    const double l = e.number("l_e");
    const double w = e.number("w_e");
    e.finish();
    try {
      model.network.add_edge(id, tail, head, l, w);
    } catch (const ConfigError& err) {
      e.fail("", err.what());
    }
  }
  const TramNetwork& net = model.network;
  std::set<std::string> trip_ids;
  for (Node& t : root.objects("trips")) {
    Trip trip;
    trip.id = t.text("id");
    trip.line = t.text("line");
    trip.edges = edge_list(net, t, "edges");
    trip.departure = t.number("departure");
    trip.capacity = t.number("tau");
    trip.seat_capacity = t.number("tau_seat");
    trip.peak = t.boolean("peak", false);
    t.finish();
    model.timetable.trips.push_back(std::move(trip));
  }
  for (Node& s : root.objects("services")) add_services(model, s);
  for (const Trip& trip : model.timetable.trips)
    if (!trip_ids.insert(trip.id).second)
      throw ConfigError(origin + ": duplicate trip id '" + trip.id + "'");
  std::stable_sort(model.timetable.trips.begin(), model.timetable.trips.end(),
                   [](const Trip& a, const Trip& b) { return a.departure < b.departure; });

  for (Node& p : root.objects("queue_pools")) {
    const std::string stop = p.text("stop");
    const auto v = net.find_vertex(stop);
    if (!v) p.fail("stop", "unknown stop '" + stop + "'");
    model.demand.pools.push_back({*v, edge_list(net, p, "edges")});
    p.finish();
  }
  for (Node& q : root.objects("initial_queue")) {
    const std::string stop = q.text("stop");
    const auto edge = q.optional_text("edge");
    const double q0 = q.number("q0");
    q.finish();
    if (q0 < 0.0) q.fail("q0", "initial queue must be nonnegative");
    const auto v = net.find_vertex(stop);
    if (!v) q.fail("stop", "unknown stop '" + stop + "'");
    std::vector<EdgeId> targets = net.vertex(*v).outgoing;
    if (edge) {
      const auto e = net.find_edge(*edge);
      if (!e || net.edge(*e).tail != *v) q.fail("edge", "edge '" + *edge + "' does not leave '" + stop + "'");
      targets = {*e};
    }
    for (EdgeId e : targets)
      model.demand.initial_queue[e] += q0 / static_cast<double>(targets.size());
  }
  model.measurement_stop = root.optional_text("measurement_stop");
  if (model.measurement_stop && !net.find_vertex(*model.measurement_stop))
    root.fail("measurement_stop", "unknown stop '" + *model.measurement_stop + "'");
  QueueLayout check(net, model.demand.pools);
  root.finish();
  return model;
}

Model load_network(const std::filesystem::path& path) {
  return parse_network(read_text_file(path), path.string());
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const Document doc(text, origin);
  Node root(doc, doc.root, "");
  Scenario s;
  root.optional_text("name");
  root.optional_text("description");
  if (root.has("dwell")) {
    Node d = root.object("dwell");
    DwellDelayModel m;
    m.threshold = d.number("threshold", m.threshold);
    m.slope = d.number("slope", m.slope);
    if (auto mode = d.optional_text("mode")) {
      try {
        m.mode = parse_dwell_mode(*mode);
      } catch (const ConfigError& e) {
        d.fail("mode", e.what());
      }
    }
    d.finish();
    if (m.threshold < 0.0 || m.slope < 0.0) d.fail("", "dwell threshold and slope must be >= 0");
    s.dwell = m;
  } else {
    root.allow("dwell");
  }
  s.disruptions.cancellation_rate = root.number("cancellation_rate", 0.0);
  if (!(s.disruptions.cancellation_rate >= 0.0 && s.disruptions.cancellation_rate <= 1.0))
    root.fail("cancellation_rate", "cancellation_rate must lie in [0, 1]");
  if (root.has("failures")) {
    const json& f = root.value().at("failures");
    if (f.is_string()) {
      const std::string which = root.text("failures");
      if (which == "default")
        s.disruptions.failures = DisruptionPlan::default_failures();
      else if (which != "none")
        root.fail("failures", "failures must be \"default\", \"none\" or a list");
    } else {
      for (Node& spec : root.objects("failures")) {
        FailureSpec fs{spec.number("probability"), spec.number("delay")};
        spec.finish();
        if (!(fs.probability >= 0.0 && fs.probability <= 1.0) || fs.delay < 0.0)
          spec.fail("", "failure needs probability in [0, 1] and delay >= 0");
        s.disruptions.failures.push_back(fs);
      }
    }
  } else {
    root.allow("failures");
  }
  if (root.has("headway")) {
    s.headway = root.number("headway");
    if (!(*s.headway > 0.0)) root.fail("headway", "headway must be positive");
  } else {
    root.allow("headway");
  }
  if (root.has("line_shifts")) {
    const json& shifts = root.raw("line_shifts");
    if (!shifts.is_object()) root.fail("line_shifts", "line_shifts must map line ids to minutes");
    for (const auto& [line, minutes] : shifts.items()) {
      if (!minutes.is_number()) root.fail("line_shifts/" + line, "shift must be a number");
      s.line_shifts[line] = minutes.get<double>();
    }
  } else {
    root.allow("line_shifts");
  }
  root.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path), path.string());
}

SimulationConfig parse_config(const std::string& text, const std::string& origin,
                              const std::filesystem::path& base_dir) {
  const Document doc(text, origin);
  Node root(doc, doc.root, "");
  SimulationConfig c;
  auto resolve = [&](const std::string& key) -> std::optional<std::filesystem::path> {
    auto value = root.optional_text(key);
    if (!value) return std::nullopt;
    std::filesystem::path p(*value);
    if (p.is_relative()) p = base_dir / p;
    std::ifstream probe(p);
    if (!probe) root.fail(key, "cannot read referenced file '" + p.string() + "'");
    return p;
  };
  root.optional_text("name");
  root.optional_text("description");
  root.raw("network");
  c.network = *resolve("network");
  c.rates = resolve("rates");
  c.alighting = resolve("alighting");
  c.scenario = resolve("scenario");
  if (root.has("horizon")) {
    c.horizon = root.number("horizon");
    if (!(*c.horizon > 0.0)) root.fail("horizon", "horizon must be positive");
  } else {
    root.allow("horizon");
  }
  if (root.has("runs")) {
    c.runs = root.unsigned_integer("runs");
    if (c.runs == 0) root.fail("runs", "runs must be at least 1");
  } else {
    root.allow("runs");
  }
  if (root.has("seed")) c.seed = root.unsigned_integer("seed");
  else root.allow("seed");
  if (auto solver = root.optional_text("solver")) {
    try {
      c.solver = parse_solver(*solver);
    } catch (const ConfigError& e) {
      root.fail("solver", e.what());
    }
  }
  if (root.has("grid")) {
    Node g = root.object("grid");
    c.grid.dx_fraction = g.number("dx_fraction", c.grid.dx_fraction);
    c.grid.cfl = g.number("cfl", c.grid.cfl);
    g.finish();
    if (!(c.grid.cfl > 0.0 && c.grid.cfl <= 1.0)) g.fail("cfl", "cfl must lie in (0, 1]");
    if (!(c.grid.dx_fraction > 0.0 && c.grid.dx_fraction <= 1.0))
      g.fail("dx_fraction", "dx_fraction must lie in (0, 1]");
  } else {
    root.allow("grid");
  }
  if (auto out = root.optional_text("output_dir")) {
    std::filesystem::path p(*out);
    c.output_dir = p.is_relative() ? base_dir / p : p;
  }
  root.finish();
  return c;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string(), path.parent_path());
}

Model load_model(const SimulationConfig& config) {
  Model model = load_network(config.network);
  if (config.horizon) model.timetable.horizon = *config.horizon;
  if (config.rates)
    model.demand.arrival_rates =
        parse_rate_table(read_text_file(*config.rates), config.rates->string(), model.network);
  if (config.alighting)
    model.demand.alighting = parse_alighting_table(read_text_file(*config.alighting),
                                                   config.alighting->string(), model.network);
  return model;
}

}  // namespace tramflow
