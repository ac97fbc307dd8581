#include "crplan/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crplan {

using nlohmann::json;

namespace {

json parse_document(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "syntax error at byte " << e.byte << ": " << e.what();
    throw InputError(msg.str());
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) throw InputError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::optional<int> optional_id(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return integer(j, key, where);
}

Polyline polyline(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of [x, y] points");
  Polyline out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InputError(where + ": malformed point");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

json polyline_json(const Polyline& line) {
  json arr = json::array();
  for (const auto& p : line) arr.push_back({p.x(), p.y()});
  return arr;
}

VehicleState vehicle_state(const json& j, const std::string& where) {
  return VehicleState{number(j, "x", where), number(j, "y", where), number(j, "delta", where),
                      number(j, "v", where), number(j, "psi", where)};
}

json vehicle_state_json(const VehicleState& s) {
  return json{{"x", s.x}, {"y", s.y}, {"delta", s.delta}, {"v", s.v}, {"psi", s.psi}};
}

std::pair<double, double> interval(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError(where + ": '" + key + "' must be a [lo, hi] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

Scenario parse_scenario(std::string_view document) {
  const json root = parse_document(document);
  const std::string top = "scenario";
  Scenario sc;
  if (root.contains("id") && root.at("id").is_string()) sc.id = root.at("id").get<std::string>();
  sc.dt = number(root, "dt", top);
  if (!(sc.dt > 0.0)) throw InputError("scenario: dt must be positive");
  sc.horizon = integer(root, "horizon", top);

  const json& lanelets = require(root, "lanelets", top);
  if (!lanelets.is_array()) throw InputError("scenario: 'lanelets' must be an array");
  for (const auto& jl : lanelets) {
    Lanelet l;
    l.id = integer(jl, "id", "lanelet");
    const std::string where = "lanelet " + std::to_string(l.id);
    l.left_boundary = polyline(require(jl, "left", where), where + " left");
    l.right_boundary = polyline(require(jl, "right", where), where + " right");
    if (jl.contains("successors")) {
      for (const auto& s : jl.at("successors")) {
        if (!s.is_number_integer()) throw InputError(where + ": successor ids must be integers");
        l.successors.push_back(s.get<int>());
      }
    }
    l.adjacent_left = optional_id(jl, "adj_left", where);
    l.adjacent_right = optional_id(jl, "adj_right", where);
    if (jl.contains("speed_limit") && !jl.at("speed_limit").is_null()) {
      l.speed_limit = number(jl, "speed_limit", where);
    }
    if (!sc.network.lanelets.emplace(l.id, l).second) throw InputError(where + ": duplicate id");
  }

  if (root.contains("obstacles")) {
    for (const auto& jo : root.at("obstacles")) {
      Obstacle o;
      o.id = integer(jo, "id", "obstacle");
      const std::string where = "obstacle " + std::to_string(o.id);
      o.length = number(jo, "length", where);
      o.width = number(jo, "width", where);
      int expected = 0;
      for (const auto& js : require(jo, "states", where)) {
        const int t = integer(js, "t", where);
        if (t != expected) {
          throw InputError(where + ": states must be indexed by consecutive time steps from 0 (got t=" +
                           std::to_string(t) + ", expected " + std::to_string(expected) + ")");
        }
        ++expected;
        o.states.push_back(
            {number(js, "x", where), number(js, "y", where), number(js, "psi", where), number(js, "v", where)});
      }
      sc.obstacles.push_back(std::move(o));
    }
  }

  const json& jp = require(root, "problem", top);
  sc.problem.initial_state = vehicle_state(require(jp, "initial", "problem"), "problem.initial");
  if (jp.contains("initial_time")) sc.problem.initial_time = integer(jp, "initial_time", "problem");
  const json& jg = require(jp, "goal", "problem");
  if (jg.contains("lanelets")) {
    std::vector<LaneletId> ids;
    for (const auto& id : jg.at("lanelets")) {
      if (!id.is_number_integer()) throw InputError("goal: lanelet ids must be integers");
      ids.push_back(id.get<int>());
    }
    sc.problem.goal.region = ids;
  } else if (jg.contains("polygon")) {
    sc.problem.goal.region = polyline(jg.at("polygon"), "goal polygon");
  } else {
    throw InputError("goal: needs 'lanelets' or 'polygon'");
  }
  std::tie(sc.problem.goal.v_lo, sc.problem.goal.v_hi) = interval(jg, "v", "goal");
  const auto [t_lo, t_hi] = interval(jg, "t", "goal");
  sc.problem.goal.t_lo = static_cast<int>(t_lo);
  sc.problem.goal.t_hi = static_cast<int>(t_hi);

  validate_scenario(sc);
  return sc;
}

std::string serialize_scenario(const Scenario& sc) {
  json root;
  if (!sc.id.empty()) root["id"] = sc.id;
  root["dt"] = sc.dt;
  root["horizon"] = sc.horizon;
  json lanelets = json::array();
  for (const auto& [id, l] : sc.network.lanelets) {
    json jl{{"id", l.id},
            {"left", polyline_json(l.left_boundary)},
            {"right", polyline_json(l.right_boundary)},
            {"successors", l.successors},
            {"adj_left", l.adjacent_left ? json(*l.adjacent_left) : json(nullptr)},
            {"adj_right", l.adjacent_right ? json(*l.adjacent_right) : json(nullptr)},
            {"speed_limit", l.speed_limit ? json(*l.speed_limit) : json(nullptr)}};
    lanelets.push_back(std::move(jl));
  }
  root["lanelets"] = std::move(lanelets);
  json obstacles = json::array();
  for (const auto& o : sc.obstacles) {
    json states = json::array();
    for (std::size_t t = 0; t < o.states.size(); ++t) {
      const auto& s = o.states[t];
      states.push_back({{"t", t}, {"x", s.x}, {"y", s.y}, {"psi", s.psi}, {"v", s.v}});
    }
    obstacles.push_back({{"id", o.id}, {"length", o.length}, {"width", o.width}, {"states", std::move(states)}});
  }
  root["obstacles"] = std::move(obstacles);
  const auto& g = sc.problem.goal;
  json goal;
  if (g.has_lanelets()) {
    goal["lanelets"] = g.lanelet_ids();
  } else {
    goal["polygon"] = polyline_json(g.polygon());
  }
  goal["v"] = {g.v_lo, g.v_hi};
  goal["t"] = {g.t_lo, g.t_hi};
  root["problem"] = {{"initial", vehicle_state_json(sc.problem.initial_state)},
                     {"initial_time", sc.problem.initial_time},
                     {"goal", std::move(goal)}};
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario sc = parse_scenario(read_text_file(path));
  if (sc.id.empty()) sc.id = path.stem().string();
  return sc;
}

Solution parse_solution(std::string_view document) {
  const json root = parse_document(document);
  Solution sol;
  const std::string where = "solution";
  if (root.contains("scenario_id")) sol.scenario_id = require(root, "scenario_id", where).get<std::string>();
  if (root.contains("planner")) sol.planner = require(root, "planner", where).get<std::string>();
  sol.dt = number(root, "dt", where);
  if (!(sol.dt > 0.0)) throw InputError("solution: dt must be positive");
  for (const auto& js : require(root, "states", where)) sol.states.push_back(vehicle_state(js, "solution state"));
  if (root.contains("inputs")) {
    for (const auto& ju : root.at("inputs")) {
      sol.inputs.push_back({number(ju, "v_delta", "solution input"), number(ju, "a", "solution input")});
    }
  }
  if (sol.states.empty()) throw InputError("solution: no states");
  if (!sol.inputs.empty() && sol.inputs.size() + 1 != sol.states.size()) {
    throw InputError("solution: |inputs| must equal |states| - 1");
  }
  return sol;
}

std::string serialize_solution(const Solution& sol) {
  json states = json::array();
  for (const auto& s : sol.states) states.push_back(vehicle_state_json(s));
  json inputs = json::array();
  for (const auto& u : sol.inputs) inputs.push_back({{"v_delta", u.v_delta}, {"a", u.a}});
  json root{{"scenario_id", sol.scenario_id},
            {"planner", sol.planner},
            {"dt", sol.dt},
            {"states", std::move(states)},
            {"inputs", std::move(inputs)}};
  return root.dump(2) + "\n";
}

VehicleParameters parse_vehicle_parameters(std::string_view document) {
  const json root = parse_document(document);
  VehicleParameters p;
  auto field = [&](const char* key, double& target) {
    if (root.contains(key)) target = number(root, key, "vehicle");
  };
  field("wheelbase", p.wheelbase);
  field("length", p.length);
  field("width", p.width);
  field("a_max", p.a_max);
  field("v_max", p.v_max);
  field("v_switch", p.v_switch);
  field("delta_max", p.delta_max);
  field("v_delta_max", p.v_delta_max);
  if (root.contains("power_limit")) {
    const json& v = root.at("power_limit");
    if (v.is_boolean()) {
      p.power_limit = v.get<bool>();
    } else if (v.is_string() && (v == "on" || v == "off")) {
      p.power_limit = v == "on";
    } else {
      throw InputError("vehicle: 'power_limit' must be true/false or \"on\"/\"off\"");
    }
  }
  p.validate();
  return p;
}

std::string serialize_vehicle_parameters(const VehicleParameters& p) {
  json root{{"wheelbase", p.wheelbase}, {"length", p.length},     {"width", p.width},
            {"a_max", p.a_max},         {"v_max", p.v_max},       {"v_switch", p.v_switch},
            {"delta_max", p.delta_max}, {"v_delta_max", p.v_delta_max}, {"power_limit", p.power_limit ? "on" : "off"}};
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace crplan
