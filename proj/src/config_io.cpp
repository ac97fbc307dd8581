#include "crplan/config_io.hpp"

#include <sstream>

#include <json.hpp>

#include "crplan/scenario_io.hpp"

namespace crplan {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InputError(where_ + ": expected an object");
  }

  void number(const char* key, double& target) const {
    if (!j_.contains(key)) return;
    if (!j_.at(key).is_number()) throw InputError(where_ + ": '" + key + "' must be a number");
    target = j_.at(key).get<double>();
  }

  void integer(const char* key, int& target) const {
    if (!j_.contains(key)) return;
    if (!j_.at(key).is_number_integer()) throw InputError(where_ + ": '" + key + "' must be an integer");
    target = j_.at(key).get<int>();
  }

  void numbers(const char* key, std::vector<double>& target) const {
    if (!j_.contains(key)) return;
    const json& a = j_.at(key);
    if (!a.is_array() || a.empty()) throw InputError(where_ + ": '" + key + "' must be a nonempty number array");
    target.clear();
    for (const auto& v : a) {
      if (!v.is_number()) throw InputError(where_ + ": '" + key + "' must be a nonempty number array");
      target.push_back(v.get<double>());
    }
  }

  void pair(const char* key, std::array<double, 2>& target) const {
    std::vector<double> v;
    numbers(key, v);
    if (v.empty()) return;
    if (v.size() != 2) throw InputError(where_ + ": '" + key + "' must have two entries");
    target = {v[0], v[1]};
  }

  std::optional<Reader> block(const char* key) const {
    if (!j_.contains(key)) return std::nullopt;
    return Reader(j_.at(key), where_ + "." + key);
  }

 private:
  const json& j_;
  std::string where_;
};

json parse(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "config: syntax error at byte " << e.byte;
    throw InputError(msg.str());
  }
}

}  // namespace

PlannerConfig parse_planner_config(std::string_view document) {
  const json root = parse(document);
  const Reader top(root, "config");
  PlannerConfig cfg;
  if (root.contains("vehicle")) cfg.vehicle = parse_vehicle_parameters(root.at("vehicle").dump());

  if (auto r = top.block("reach")) {
    ReachConfig& c = cfg.reach;
    r->number("v_desired", c.v_desired);
    r->number("c_lc", c.c_lc);
    r->number("safety_margin", c.safety_margin);
    r->integer("max_corridors", c.max_corridors);
    r->integer("lane_change_spawn_interval", c.lane_change_spawn_interval);
    r->integer("max_attempts", c.max_attempts);
    if (auto o = r->block("ocp")) {
      o->integer("max_iter", c.ocp.max_iter);
      o->number("tol", c.ocp.tol);
      o->pair("q_diag", c.ocp.q_diag);
      o->pair("r_diag", c.ocp.r_diag);
    }
    if (c.max_corridors < 1) throw InputError("config.reach: max_corridors must be at least 1");
    if (c.v_desired <= 0.0) throw InputError("config.reach: v_desired must be positive");
  }

  if (auto f = top.block("frenet")) {
    FrenetConfig& c = cfg.frenet;
    if (auto s = f->block("scheme")) {
      s->numbers("d_targets", c.d_targets);
      s->numbers("v_targets_frac", c.v_targets_frac);
      s->numbers("t_targets", c.t_targets);
    }
    f->number("v_desired", c.v_desired);
    if (auto w = f->block("weights")) {
      w->number("jerk", c.weights.jerk);
      w->number("lane_center", c.weights.lane_center);
      w->number("velocity", c.weights.velocity);
      w->number("proximity", c.weights.proximity);
      w->number("w_dist", c.weights.w_dist);
    }
    f->integer("replan_stride", c.replan_stride);
    f->integer("threads", c.threads);
    if (c.replan_stride < 1) throw InputError("config.frenet: replan_stride must be at least 1");
    try {
      c.scheme().validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("config.frenet: ") + e.what());
    }
  }
  return cfg;
}

std::string serialize_planner_config(const PlannerConfig& cfg) {
  const ReachConfig& r = cfg.reach;
  const FrenetConfig& f = cfg.frenet;
  json root;
  root["vehicle"] = json::parse(serialize_vehicle_parameters(cfg.vehicle));
  root["reach"] = {{"v_desired", r.v_desired},
                   {"c_lc", r.c_lc},
                   {"safety_margin", r.safety_margin},
                   {"max_corridors", r.max_corridors},
                   {"lane_change_spawn_interval", r.lane_change_spawn_interval},
                   {"max_attempts", r.max_attempts},
                   {"ocp",
                    {{"max_iter", r.ocp.max_iter},
                     {"tol", r.ocp.tol},
                     {"q_diag", r.ocp.q_diag},
                     {"r_diag", r.ocp.r_diag}}}};
  root["frenet"] = {{"scheme", {{"d_targets", f.d_targets}, {"v_targets_frac", f.v_targets_frac}, {"t_targets", f.t_targets}}},
                    {"v_desired", f.v_desired},
                    {"weights",
                     {{"jerk", f.weights.jerk},
                      {"lane_center", f.weights.lane_center},
                      {"velocity", f.weights.velocity},
                      {"proximity", f.weights.proximity},
                      {"w_dist", f.weights.w_dist}}},
                    {"replan_stride", f.replan_stride},
                    {"threads", f.threads}};
  return root.dump(2) + "\n";
}

}  // namespace crplan
