#include "neseek/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace neseek {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(fmt::format("{}: {}", path, msg), path);
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string child(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) fail(child(path, key), "unknown field");
  }
}

const json& required(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(child(path, key), "missing required field");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number(const json& j, const std::string& path, const char* key) { return number(required(j, path, key), child(path, key)); }

double number_or(const json& j, const std::string& path, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), child(path, key)) : fallback;
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vector vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], child(path, i));
  return v;
}

Matrix matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector(j[r], child(path, r));
    if (static_cast<std::size_t>(row.size()) != cols) fail(child(path, r), fmt::format("expected {} columns", cols));
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json to_array(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_array(m.row(r).transpose()));
  return rows;
}

TurbineParameters turbine_params(const json& j, const std::string& path) {
  check_object(j, path, {"tm", "te", "km", "ke", "d", "h", "r", "w0"});
  TurbineParameters p;
  p.tm = number(j, path, "tm");
  p.te = number(j, path, "te");
  p.km = number(j, path, "km");
  p.ke = number(j, path, "ke");
  p.d = number(j, path, "d");
  p.h = number(j, path, "h");
  p.r = number(j, path, "r");
  p.w0 = number(j, path, "w0");
  for (double v : {p.tm, p.te, p.h, p.r, p.w0}) {
    if (!(v > 0.0)) fail(path, "tm, te, h, r and w0 must be positive");
  }
  return p;
}

void read_plant(const json& j, const std::string& path, AgentConfig& agent) {
  if (j.contains("preset")) {
    check_object(j, path, {"preset", "params"});
    agent.plant_preset = string(j.at("preset"), child(path, "preset"));
    if (agent.plant_preset == "double_integrator") {
      if (j.contains("params")) fail(child(path, "params"), "double_integrator takes no parameters");
      agent.plant = double_integrator();
    } else if (agent.plant_preset == "turbine_generator") {
      agent.turbine = turbine_params(required(j, path, "params"), child(path, "params"));
      agent.plant = turbine_generator(*agent.turbine);
    } else {
      fail(child(path, "preset"), fmt::format("unknown preset '{}' (expected double_integrator or turbine_generator)", agent.plant_preset));
    }
    return;
  }
  check_object(j, path, {"a", "b", "c"});
  agent.plant.a = matrix(required(j, path, "a"), child(path, "a"));
  agent.plant.b = vector(required(j, path, "b"), child(path, "b"));
  agent.plant.c = vector(required(j, path, "c"), child(path, "c")).transpose();
}

void read_gains(const json& j, const std::string& path, AgentConfig& agent) {
  check_object(j, path, {"k", "kp", "ki", "ko"});
  agent.gains.k = vector(required(j, path, "k"), child(path, "k")).transpose();
  agent.gains.kp = number(j, path, "kp");
  agent.gains.ki = number(j, path, "ki");
  agent.gains.ko = vector(required(j, path, "ko"), child(path, "ko"));
}

void read_initial(const json& j, const std::string& path, InitialOverrides& init) {
  check_object(j, path, {"x", "gamma", "z", "eta", "omega"});
  if (j.contains("x")) init.x = vector(j.at("x"), child(path, "x"));
  if (j.contains("gamma")) init.gamma = number(j.at("gamma"), child(path, "gamma"));
  if (j.contains("z")) init.z = vector(j.at("z"), child(path, "z"));
  if (j.contains("eta")) init.eta = number(j.at("eta"), child(path, "eta"));
  if (j.contains("omega")) init.omega = number(j.at("omega"), child(path, "omega"));
}

AgentConfig read_agent(const json& j, const std::string& path) {
  check_object(j, path, {"plant", "gains", "disturbance", "exosystem", "initial"});
  AgentConfig agent;
  read_plant(required(j, path, "plant"), child(path, "plant"), agent);
  read_gains(required(j, path, "gains"), child(path, "gains"), agent);

  if (j.contains("disturbance") == j.contains("exosystem")) {
    fail(path, "exactly one of 'disturbance' or 'exosystem' is required");
  }
  if (j.contains("disturbance")) {
    const std::string p = child(path, "disturbance");
    const json& d = j.at("disturbance");
    check_object(d, p, {"frequency_hz", "amplitude", "phase"});
    SinusoidDisturbance s;
    s.frequency_hz = number(d, p, "frequency_hz");
    s.amplitude = number(d, p, "amplitude");
    s.phase = number_or(d, p, "phase", 0.0);
    if (!(s.frequency_hz > 0.0)) fail(child(p, "frequency_hz"), "must be positive");
    agent.sinusoid = s;
    try {
      agent.exosystem = sinusoid_exosystem(s.frequency_hz, s.amplitude, s.phase);
    } catch (const std::invalid_argument& e) {
      fail(p, e.what());
    }
  } else {
    const std::string p = child(path, "exosystem");
    const json& e = j.at("exosystem");
    check_object(e, p, {"s", "u", "nu0"});
    agent.exosystem.s = matrix(required(e, p, "s"), child(p, "s"));
    agent.exosystem.u = vector(required(e, p, "u"), child(p, "u")).transpose();
    agent.exosystem.nu0 = vector(required(e, p, "nu0"), child(p, "nu0"));
  }
  if (j.contains("initial")) read_initial(j.at("initial"), child(path, "initial"), agent.initial);

  try {
    check_dimensions(agent.plant, agent.gains, agent.exosystem);
  } catch (const DimensionError& e) {
    fail(path, e.what());
  }
  const auto& init = agent.initial;
  if (init.x && init.x->size() != agent.plant.order()) fail(child(path, "initial.x"), "length must equal the plant order");
  if (init.z && init.z->size() != agent.exosystem.order()) fail(child(path, "initial.z"), "length must equal the exosystem order");
  return agent;
}

void read_game(const json& j, const std::string& path, ScenarioConfig& cfg) {
  const std::string form = j.is_object() && j.contains("form") ? string(j.at("form"), child(path, "form")) : "canonical";
  const std::string players_path = child(path, "players");
  try {
    if (form == "canonical") {
      check_object(j, path, {"form", "p0", "a", "players"});
      const json& players = required(j, path, "players");
      if (!players.is_array()) fail(players_path, "expected an array");
      std::vector<AggregativeCost> costs;
      for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string p = child(players_path, i);
        check_object(players[i], p, {"xi", "beta", "alpha"});
        costs.push_back({number(players[i], p, "xi"), number_or(players[i], p, "beta", 0.0), number_or(players[i], p, "alpha", 0.0)});
      }
      cfg.game = GameModel(number(j, path, "p0"), number(j, path, "a"), std::move(costs));
    } else if (form == "tracking") {
      check_object(j, path, {"form", "c0", "C", "players"});
      const json& players = required(j, path, "players");
      if (!players.is_array()) fail(players_path, "expected an array");
      TrackingGame t;
      t.price_intercept = number(j, path, "c0");
      t.price_slope = number(j, path, "C");
      for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string p = child(players_path, i);
        check_object(players[i], p, {"a", "b"});
        t.weights.push_back(number(players[i], p, "a"));
        t.targets.push_back(number(players[i], p, "b"));
      }
      cfg.game = GameModel::from_tracking(t.weights, t.targets, t.price_intercept, t.price_slope);
      cfg.tracking = std::move(t);
    } else {
      fail(child(path, "form"), fmt::format("unknown game form '{}' (expected canonical or tracking)", form));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void read_graph(const json& j, const std::string& path, ScenarioConfig& cfg) {
  check_object(j, path, {"nodes", "edges"});
  const json& nodes = required(j, path, "nodes");
  if (!nodes.is_number_unsigned()) fail(child(path, "nodes"), "expected a non-negative integer");
  const auto n = nodes.get<std::size_t>();
  const json& edges = required(j, path, "edges");
  const std::string edges_path = child(path, "edges");
  if (!edges.is_array()) fail(edges_path, "expected an array of [i, j] pairs");
  std::vector<Graph::Edge> list;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const json& e = edges[k];
    const std::string p = child(edges_path, k);
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      fail(p, "expected a pair of 1-based node labels");
    }
    const auto a = e[0].get<std::size_t>(), b = e[1].get<std::size_t>();
    if (a < 1 || b < 1 || a > n || b > n) fail(p, fmt::format("node labels must lie in 1..{}", n));
    if (a == b) fail(p, "self-loops are not allowed");
    list.emplace_back(a - 1, b - 1);
  }
  cfg.graph = Graph(n, list);
}

void read_rule(const json& j, const std::string& path, ScenarioConfig& cfg) {
  check_object(j, path, {"mode", "delta", "observer"});
  try {
    cfg.mode = parse_mode(string(required(j, path, "mode"), child(path, "mode")));
  } catch (const std::invalid_argument& e) {
    fail(child(path, "mode"), e.what());
  }
  cfg.delta = number_or(j, path, "delta", cfg.delta);
  if (j.contains("observer")) {
    if (!j.at("observer").is_boolean()) fail(child(path, "observer"), "expected true or false");
    cfg.observer_enabled = j.at("observer").get<bool>();
  }
  if (!(cfg.delta > 0.0)) fail(child(path, "delta"), "must be positive");
}

void read_integrator(const json& j, const std::string& path, ScenarioConfig& cfg) {
  check_object(j, path, {"step", "horizon", "record_every"});
  cfg.step = number(j, path, "step");
  cfg.horizon = number(j, path, "horizon");
  if (j.contains("record_every")) {
    const json& r = j.at("record_every");
    if (!r.is_number_unsigned() || r.get<std::size_t>() == 0) fail(child(path, "record_every"), "expected a positive integer");
    cfg.record_every = r.get<std::size_t>();
  }
  if (!(cfg.step > 0.0)) fail(child(path, "step"), "must be positive");
  if (!(cfg.horizon >= cfg.step)) fail(child(path, "horizon"), "must be at least one step");
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(fmt::format("{}:{}: syntax error: {}", source, line, e.what()), "", line);
  }

  check_object(doc, "", {"name", "agents", "game", "graph", "rule", "integrator", "assumptions"});
  ScenarioConfig cfg;
  if (doc.contains("name")) cfg.name = string(doc.at("name"), "name");

  const json& agents = required(doc, "", "agents");
  if (!agents.is_array() || agents.empty()) fail("agents", "expected a non-empty array");
  for (std::size_t i = 0; i < agents.size(); ++i) cfg.agents.push_back(read_agent(agents[i], child("agents", i)));

  read_game(required(doc, "", "game"), "game", cfg);
  read_graph(required(doc, "", "graph"), "graph", cfg);
  read_rule(required(doc, "", "rule"), "rule", cfg);
  read_integrator(required(doc, "", "integrator"), "integrator", cfg);

  if (doc.contains("assumptions")) {
    const json& a = doc.at("assumptions");
    if (!a.is_object()) fail("assumptions", "expected an object of strings");
    for (const auto& [key, value] : a.items()) cfg.assumptions[key] = string(value, child("assumptions", key));
  }

  const std::size_t n = cfg.agents.size();
  if (cfg.game.size() != n) fail("game.players", fmt::format("{} players for {} agents", cfg.game.size(), n));
  if (cfg.graph.size() != n) fail("graph.nodes", fmt::format("{} nodes for {} agents", cfg.graph.size(), n));
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string to_json(const ScenarioConfig& cfg) {
  json doc = json::object();
  doc["name"] = cfg.name;

  json agents = json::array();
  for (const auto& a : cfg.agents) {
    json agent;
    if (a.plant_preset.empty()) {
      agent["plant"] = {{"a", to_rows(a.plant.a)}, {"b", to_array(a.plant.b.col(0))}, {"c", to_array(a.plant.c.row(0).transpose())}};
    } else {
      agent["plant"] = {{"preset", a.plant_preset}};
      if (a.turbine) {
        const auto& t = *a.turbine;
        agent["plant"]["params"] = {{"tm", t.tm}, {"te", t.te}, {"km", t.km}, {"ke", t.ke},
                                    {"d", t.d},   {"h", t.h},   {"r", t.r},   {"w0", t.w0}};
      }
    }
    agent["gains"] = {{"k", to_array(a.gains.k.row(0).transpose())}, {"kp", a.gains.kp}, {"ki", a.gains.ki}, {"ko", to_array(a.gains.ko)}};
    if (a.sinusoid) {
      agent["disturbance"] = {{"frequency_hz", a.sinusoid->frequency_hz}, {"amplitude", a.sinusoid->amplitude}, {"phase", a.sinusoid->phase}};
    } else {
      agent["exosystem"] = {{"s", to_rows(a.exosystem.s)}, {"u", to_array(a.exosystem.u.row(0).transpose())}, {"nu0", to_array(a.exosystem.nu0)}};
    }
    json init = json::object();
    if (a.initial.x) init["x"] = to_array(*a.initial.x);
    if (a.initial.gamma) init["gamma"] = *a.initial.gamma;
    if (a.initial.z) init["z"] = to_array(*a.initial.z);
    if (a.initial.eta) init["eta"] = *a.initial.eta;
    if (a.initial.omega) init["omega"] = *a.initial.omega;
    if (!init.empty()) agent["initial"] = init;
    agents.push_back(agent);
  }
  doc["agents"] = agents;

  json players = json::array();
  if (cfg.tracking) {
    for (std::size_t i = 0; i < cfg.tracking->weights.size(); ++i) {
      players.push_back({{"a", cfg.tracking->weights[i]}, {"b", cfg.tracking->targets[i]}});
    }
    doc["game"] = {{"form", "tracking"}, {"c0", cfg.tracking->price_intercept}, {"C", cfg.tracking->price_slope}, {"players", players}};
  } else {
    for (const auto& c : cfg.game.costs()) players.push_back({{"xi", c.xi}, {"beta", c.beta}, {"alpha", c.alpha}});
    doc["game"] = {{"form", "canonical"}, {"p0", cfg.game.price_intercept()}, {"a", cfg.game.price_slope()}, {"players", players}};
  }

  json edges = json::array();
  for (const auto& [i, j] : cfg.graph.edges()) edges.push_back({i + 1, j + 1});
  doc["graph"] = {{"nodes", cfg.graph.size()}, {"edges", edges}};
  doc["rule"] = {{"mode", to_string(cfg.mode)}, {"delta", cfg.delta}, {"observer", cfg.observer_enabled}};
  doc["integrator"] = {{"step", cfg.step}, {"horizon", cfg.horizon}, {"record_every", cfg.record_every}};
  doc["assumptions"] = cfg.assumptions;
  return doc.dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << to_json(cfg);
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace neseek
