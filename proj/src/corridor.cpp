#include "crplan/corridor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "crplan/vehicle.hpp"

namespace crplan {

std::vector<LaneletId> DrivingCorridor::lanelet_sequence() const {
  std::vector<LaneletId> out;
  for (const auto& c : cells) {
    if (out.empty() || out.back() != c.lanelet) out.push_back(c.lanelet);
  }
  if (!cells.empty()) {
    const auto& tail = cells.back().chain;
    for (std::size_t i = 1; i < tail.size(); ++i) out.push_back(tail[i]);
  }
  return out;
}

std::optional<Interval> goal_interval_on(const RoadIndex& road, LaneletId id, const GoalSpec& goal) {
  const double len = road.length(id);
  if (goal.has_lanelets()) {
    const auto& ids = goal.lanelet_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) return std::nullopt;
    return Interval{0.0, len};
  }
  const CurvilinearFrame& frame = road.center_frame(id);
  const int n = std::max(2, static_cast<int>(std::ceil(len / 0.25)) + 1);
  std::optional<Interval> out;
  for (int i = 0; i < n; ++i) {
    const double s = len * i / (n - 1);
    if (!point_in_polygon(goal.polygon(), frame.to_cartesian(s, 0.0))) continue;
    if (!out) out = Interval{s, s};
    out->lo = std::min(out->lo, s);
    out->hi = std::max(out->hi, s);
  }
  return out;
}

namespace {

struct Branch {
  std::vector<LaneletId> visited;
  /// chain[0] hosts the local xi origin.
  std::vector<LaneletId> chain;
  PVSet set;
  double offset = 0.0;
  std::vector<CorridorCell> cells;
  std::map<LaneletId, int> last_spawn;
  bool alive = true;
};

bool visited(const Branch& b, LaneletId id) {
  return std::find(b.visited.begin(), b.visited.end(), id) != b.visited.end();
}

class Enumerator {
 public:
  Enumerator(const Scenario& sc, const RoadIndex& road, const VehicleParameters& p, const CorridorParams& params)
      : sc_(sc), road_(road), p_(p), params_(params) {
    for (LaneletId id : road.ids()) {
      if (auto iv = goal_interval_on(road, id, sc.problem.goal)) goal_xi_[id] = *iv;
    }
    // Full-throttle speed envelope of the vehicle model.
    VehicleState s = sc.problem.initial_state;
    s.v = std::max(0.0, s.v);
    v_up_.push_back(s.v);
    for (int k = sc.problem.initial_time; k < sc.horizon; ++k) {
      s.v += admissible_input(s, {0.0, p.a_max}, sc.dt, p).a * sc.dt;
      v_up_.push_back(s.v);
    }
  }

  std::vector<DrivingCorridor> run(const Deadline& deadline) {
    const VehicleState& x0 = sc_.problem.initial_state;
    const auto start = road_.best_lanelet(x0.position());
    if (!start) throw InputError("initial state is not on any lanelet");
    const double xi0 = road_.center_frame(*start).project_clamped(x0.position()).s;

    Branch root;
    root.visited = {*start};
    root.chain = {*start};
    root.set = PVSet::point(xi0, std::max(0.0, x0.v));
    root.cells.push_back(make_cell(root, sc_.problem.initial_time));
    branches_.push_back(std::move(root));

    const int t0 = sc_.problem.initial_time;
    const int last = std::min(sc_.horizon, sc_.problem.goal.t_hi);
    for (int k = t0 + 1; k <= last; ++k) {
      deadline.check();
      const std::size_t count = branches_.size();
      for (std::size_t i = 0; i < count; ++i) {
        if (branches_[i].alive) advance(i, k);
      }
      const std::size_t after = branches_.size();
      for (std::size_t i = 0; i < after; ++i) {
        if (branches_[i].alive && branches_[i].cells.back().step == k) spawn_lane_changes(i, k);
      }
    }
    return finish();
  }

 private:
  bool budget_left() const { return static_cast<int>(branches_.size()) < params_.max_corridors; }

  double chain_length(const std::vector<LaneletId>& chain) const {
    double len = 0.0;
    for (LaneletId id : chain) len += road_.length(id);
    return len;
  }

  /// Velocity limits of every chain lanelet the set reaches.
  PVSet prune(const PVSet& s, const std::vector<LaneletId>& chain) const {
    PVSet out = prune_speed_limit(s, p_.v_max);
    double start = 0.0;
    for (LaneletId id : chain) {
      if (out.empty() || out.xi_max() < start) break;
      if (const auto& lim = road_.lanelet(id).speed_limit) out = prune_speed_limit(out, *lim);
      out = prune_friction(out, road_.center_frame(id).max_abs_curvature(), p_.a_max);
      start += road_.length(id);
    }
    return out;
  }

  double speed_cap(int k) const {
    const auto i = static_cast<std::size_t>(std::max(0, k - sc_.problem.initial_time));
    return v_up_[std::min(i, v_up_.size() - 1)] + 1e-9;
  }

  double inflation() const { return 0.5 * p_.length + params_.safety_margin; }

  CorridorCell make_cell(const Branch& b, int step) const {
    CorridorCell c{step, b.chain.front(), b.chain, b.set, b.offset, std::nullopt, std::nullopt};
    const GoalSpec& g = sc_.problem.goal;
    if (step < g.t_lo || step > g.t_hi) return c;
    if (std::max(g.v_lo, b.set.v_min()) > std::min(g.v_hi, b.set.v_max())) return c;
    double start = 0.0;
    for (LaneletId id : b.chain) {
      if (auto it = goal_xi_.find(id); it != goal_xi_.end()) {
        const Interval iv{it->second.lo + start, it->second.hi + start};
        if (!intersect(b.set.polygon, ConvexPolygon::box(iv.lo, iv.hi, g.v_lo, g.v_hi)).empty()) {
          c.goal_xi = iv;
          return c;
        }
      }
      start += road_.length(id);
    }
    return c;
  }

  /// Chains covering xi_max, one per successor choice along simple paths.
  std::vector<std::vector<LaneletId>> extend_chains(const Branch& b, double xi_max) const {
    std::vector<std::vector<LaneletId>> done;
    std::vector<std::vector<LaneletId>> open{b.chain};
    while (!open.empty()) {
      auto chain = std::move(open.back());
      open.pop_back();
      if (xi_max <= chain_length(chain)) {
        done.push_back(std::move(chain));
        continue;
      }
      bool extended = false;
      const auto& succ = road_.lanelet(chain.back()).successors;
      for (auto it = succ.rbegin(); it != succ.rend(); ++it) {
        if (visited(b, *it) || std::find(chain.begin(), chain.end(), *it) != chain.end()) continue;
        auto next = chain;
        next.push_back(*it);
        open.push_back(std::move(next));
        extended = true;
      }
      if (!extended) done.push_back(std::move(chain));
    }
    return done;
  }

  void advance(std::size_t index, int k) {
    const Branch parent = branches_[index];
    const PVSet s = propagate(parent.set, p_.a_max, sc_.dt);

    bool reused = false;
    for (const auto& chain : extend_chains(parent, s.empty() ? 0.0 : s.xi_max())) {
      if (reused && !budget_left()) break;
      const PVSet t = prune_speed_limit(prune(s, chain), speed_cap(k));
      std::vector<Interval> blocked;
      double start = 0.0;
      for (LaneletId id : chain) {
        for (auto iv : blocked_intervals(road_, id, sc_.obstacles, k, inflation())) {
          blocked.push_back({iv.lo + start, iv.hi + start});
        }
        start += road_.length(id);
      }
      for (auto& piece : split_free(t, blocked, 0.0, start)) {
        if (reused && !budget_left()) break;
        Branch child = parent;
        child.chain = chain;
        child.set = std::move(piece);
        for (LaneletId id : chain) {
          if (!visited(child, id)) child.visited.push_back(id);
        }
        while (child.chain.size() > 1 && child.set.xi_min() >= road_.length(child.chain.front())) {
          const double len = road_.length(child.chain.front());
          child.set = child.set.shifted(-len);
          child.offset += len;
          child.chain.erase(child.chain.begin());
        }
        child.cells.push_back(make_cell(child, k));
        if (!reused) {
          branches_[index] = std::move(child);
          reused = true;
        } else {
          branches_.push_back(std::move(child));
        }
      }
    }
    if (!reused) branches_[index].alive = false;
  }

  void spawn_lane_changes(std::size_t index, int k) {
    double start = 0.0;
    const std::vector<LaneletId> chain = branches_[index].chain;
    for (LaneletId from : chain) {
      const double len = road_.length(from);
      const PVSet part = clip_xi(branches_[index].set, start, start + len).shifted(-start);
      const Lanelet& l = road_.lanelet(from);
      for (const auto& adj : {l.adjacent_left, l.adjacent_right}) {
        if (part.empty() || !adj || visited(branches_[index], *adj) || !budget_left()) continue;
        if (auto it = branches_[index].last_spawn.find(*adj);
            it != branches_[index].last_spawn.end() && k - it->second < params_.lane_change_spawn_interval) {
          continue;
        }
        const double mid = 0.5 * (part.xi_min() + part.xi_max());
        const Vec2 anchor = road_.center_frame(from).to_cartesian(std::clamp(mid, 0.0, len), 0.0);
        const double shift = road_.center_frame(*adj).project_clamped(anchor).s - mid;
        const PVSet mapped = prune(part.shifted(shift), {*adj});
        const auto pieces =
            constrain_free_space(mapped, road_, *adj, sc_.obstacles, k, p_.length, params_.safety_margin);
        if (pieces.empty()) continue;
        branches_[index].last_spawn[*adj] = k;
        for (const auto& piece : pieces) {
          if (!budget_left()) break;
          Branch child = branches_[index];
          child.visited.push_back(*adj);
          child.chain = {*adj};
          child.set = piece;
          child.offset += start - shift;
          child.last_spawn.clear();
          child.cells.back() = make_cell(child, k);
          child.cells.back().changed_from = from;
          branches_.push_back(std::move(child));
        }
      }
      start += len;
    }
  }

  std::vector<DrivingCorridor> finish() const {
    std::vector<DrivingCorridor> out;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      const Branch& b = branches_[i];
      DrivingCorridor c;
      c.id = static_cast<int>(i);
      c.cells = b.cells;
      c.terminal_reaches_goal = c.cells.back().goal_xi.has_value();
      c.lane_change_count = 0;
      for (std::size_t j = 1; j < c.cells.size(); ++j) {
        if (c.cells[j].changed_from) ++c.lane_change_count;
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  const Scenario& sc_;
  const RoadIndex& road_;
  const VehicleParameters& p_;
  const CorridorParams& params_;
  std::map<LaneletId, Interval> goal_xi_;
  std::vector<Branch> branches_;
  std::vector<double> v_up_;
};

}  // namespace

std::vector<DrivingCorridor> enumerate_corridors(const Scenario& sc, const RoadIndex& road,
                                                 const VehicleParameters& p, const CorridorParams& params,
                                                 const Deadline& deadline) {
  return Enumerator(sc, road, p, params).run(deadline);
}

double corridor_cost(const DrivingCorridor& c, const RoadIndex& road, const SelectionParams& params) {
  double cost = params.c_lc * c.lane_change_count;
  for (const auto& cell : c.cells) {
    double v_des = params.v_desired;
    if (const auto& lim = road.lanelet(cell.lanelet).speed_limit) v_des = std::min(v_des, *lim);
    const double v_mid = 0.5 * (cell.set.v_min() + cell.set.v_max());
    cost += std::abs(v_mid - v_des) * params.dt;
  }
  return cost;
}

std::vector<const DrivingCorridor*> rank_corridors(const std::vector<DrivingCorridor>& corridors,
                                                   const RoadIndex& road, const SelectionParams& params) {
  std::vector<std::pair<double, const DrivingCorridor*>> scored;
  for (const auto& c : corridors) {
    if (c.terminal_reaches_goal) scored.emplace_back(corridor_cost(c, road, params), &c);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second->lane_change_count != b.second->lane_change_count) {
      return a.second->lane_change_count < b.second->lane_change_count;
    }
    return a.second->id < b.second->id;
  });
  std::vector<const DrivingCorridor*> out;
  for (const auto& [cost, c] : scored) out.push_back(c);
  return out;
}

const DrivingCorridor& select_corridor(const std::vector<DrivingCorridor>& corridors, const RoadIndex& road,
                                       const SelectionParams& params) {
  const auto ranked = rank_corridors(corridors, road, params);
  if (ranked.empty()) throw std::invalid_argument("select_corridor: no goal-reaching corridor");
  return *ranked.front();
}

// ---------------------------------------------------------------------------
// Reference extraction

namespace {

ConvexPolygon global_set(const CorridorCell& c) { return c.set.polygon.translated({c.offset, 0.0}); }

/// S_k = G_k ∩ A^-1 (S_k+1 ⊕ B[-a, a]), S_n = G_n ∩ terminal.
std::optional<std::vector<ConvexPolygon>> backward_sets(const std::vector<CorridorCell>& cells, std::size_t n,
                                                        const std::optional<ConvexPolygon>& terminal, double dt,
                                                        double a) {
  std::vector<ConvexPolygon> s(n + 1);
  s[n] = terminal ? intersect(global_set(cells[n]), *terminal) : global_set(cells[n]);
  if (s[n].empty()) return std::nullopt;
  Mat2 a_inv;
  a_inv << 1.0, -dt, 0.0, 1.0;
  for (std::size_t k = n; k-- > 1;) {
    const ConvexPolygon pre = affine_transform(minkowski_segment(s[k + 1], input_direction(dt), a), a_inv);
    s[k] = intersect(global_set(cells[k]), pre);
    if (s[k].empty()) return std::nullopt;
  }
  s[0] = affine_transform(minkowski_segment(s[1], input_direction(dt), a), a_inv);
  return s;
}

/// Acceleration interval keeping A x + B a inside the set.
Interval feasible_accel(const Vec2& x, const ConvexPolygon& target, double dt, double a) {
  const Vec2 ax = transition_matrix(dt) * x;
  const Vec2 b = input_direction(dt);
  Interval iv{-a, a};
  constexpr double tol = 1e-9;
  for (const auto& h : target.halfplanes(tol)) {
    const double nb = h.normal.dot(b);
    const double rest = h.offset + tol - h.normal.dot(ax);
    if (std::abs(nb) < 1e-15) continue;
    if (nb > 0.0) {
      iv.hi = std::min(iv.hi, rest / nb);
    } else {
      iv.lo = std::max(iv.lo, rest / nb);
    }
  }
  return iv;
}

struct Profile {
  std::vector<double> xi;
  std::vector<double> v;
};

Profile forward_pass(const std::vector<CorridorCell>& cells, const std::vector<ConvexPolygon>& sets,
                     const Vec2& x0, const RoadIndex& road, double v_desired, double dt, double a) {
  Profile out;
  Vec2 x = x0;
  out.xi.push_back(x.x());
  out.v.push_back(x.y());
  for (std::size_t k = 0; k + 1 < sets.size(); ++k) {
    double v_des = v_desired;
    if (const auto& lim = road.lanelet(cells[k + 1].lanelet).speed_limit) v_des = std::min(v_des, *lim);
    Interval iv = feasible_accel(x, sets[k + 1], dt, a);
    if (iv.lo > iv.hi) iv = {0.5 * (iv.lo + iv.hi), 0.5 * (iv.lo + iv.hi)};
    const double acc = std::clamp((v_des - x.y()) / dt, iv.lo, iv.hi);
    x = transition_matrix(dt) * x + input_direction(dt) * acc;
    out.xi.push_back(x.x());
    out.v.push_back(x.y());
  }
  return out;
}

std::optional<ConvexPolygon> goal_box(const CorridorCell& c, const GoalSpec& g, const ReferenceParams& params) {
  if (!c.goal_xi) return std::nullopt;
  const double mx = std::min(params.goal_xi_margin, 0.25 * (c.goal_xi->hi - c.goal_xi->lo));
  const double mv = std::min(params.goal_v_margin, 0.25 * (g.v_hi - g.v_lo));
  return ConvexPolygon::box(c.goal_xi->lo + mx + c.offset, c.goal_xi->hi - mx + c.offset, g.v_lo + mv,
                            g.v_hi - mv);
}

std::optional<Profile> longitudinal_profile(const DrivingCorridor& c, const RoadIndex& road, const Scenario& sc,
                                            const ReferenceParams& params, double a) {
  const auto& cells = c.cells;
  const Vec2 x0{cells[0].set.xi_min() + cells[0].offset, cells[0].set.v_min()};
  const double dt = sc.dt;
  const auto& g = sc.problem.goal;

  if (auto sets = backward_sets(cells, cells.size() - 1, std::nullopt, dt, a);
      sets && (*sets)[0].contains(x0, 1e-6)) {
    Profile prof = forward_pass(cells, *sets, x0, road, params.v_desired, dt, a);
    const bool any_goal = std::any_of(cells.begin(), cells.end(), [](const CorridorCell& cell) { return cell.goal_xi.has_value(); });
    if (!any_goal) return prof;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto box = goal_box(cells[k], g, params);
      if (box && box->contains({prof.xi[k], prof.v[k]}, 1e-9)) {
        prof.xi.resize(k + 1);
        prof.v.resize(k + 1);
        return prof;
      }
    }
  }
  for (std::size_t k = cells.size(); k-- > 1;) {
    const auto box = goal_box(cells[k], g, params);
    if (!box) continue;
    auto sets = backward_sets(cells, k, box, dt, a);
    if (!sets || !(*sets)[0].contains(x0, 1e-6)) continue;
    Profile prof = forward_pass(cells, *sets, x0, road, params.v_desired, dt, a);
    for (std::size_t j = 1; j < k; ++j) {
      const auto early = goal_box(cells[j], g, params);
      if (early && early->contains({prof.xi[j], prof.v[j]}, 1e-9)) {
        prof.xi.resize(j + 1);
        prof.v.resize(j + 1);
        break;
      }
    }
    return prof;
  }
  return std::nullopt;
}

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

/// Lanelet and local arc length hosting global xi at a cell.
std::pair<LaneletId, double> locate_on_cell(const CorridorCell& cell, const RoadIndex& road, double xi) {
  double local = xi - cell.offset;
  for (std::size_t i = 0; i + 1 < cell.chain.size(); ++i) {
    const double len = road.length(cell.chain[i]);
    if (local <= len) return {cell.chain[i], std::max(0.0, local)};
    local -= len;
  }
  const LaneletId id = cell.chain.empty() ? cell.lanelet : cell.chain.back();
  return {id, std::clamp(local, 0.0, road.length(id))};
}

}  // namespace

std::optional<ReferencePlan> extract_reference(const DrivingCorridor& c, const RoadIndex& road,
                                               const Scenario& sc, const VehicleParameters& p,
                                               const ReferenceParams& params) {
  if (c.cells.empty()) return std::nullopt;
  std::optional<Profile> prof = longitudinal_profile(c, road, sc, params, std::min(params.a_comfort, p.a_max));
  if (!prof && !params.comfort_only) prof = longitudinal_profile(c, road, sc, params, p.a_max);
  if (!prof) return std::nullopt;

  const std::size_t n = prof->xi.size();
  std::vector<double> lateral(n, 0.0);

  const auto [id0, s0] = locate_on_cell(c.cells[0], road, prof->xi[0]);
  const double d0 = road.center_frame(id0).project_clamped(sc.problem.initial_state.position()).d;
  for (std::size_t k = 0; k < n; ++k) {
    lateral[k] += d0 * (1.0 - smoothstep(static_cast<double>(k) / std::max(1, params.initial_offset_steps)));
  }

  const int half = params.lane_change_steps / 2;
  for (std::size_t m = 1; m < n; ++m) {
    if (!c.cells[m].changed_from) continue;
    const Lanelet& prev = road.lanelet(*c.cells[m].changed_from);
    const auto [id_b, s_b] = locate_on_cell(c.cells[m], road, prof->xi[m]);
    const Vec2 center_b = road.center_frame(id_b).to_cartesian(s_b, 0.0);
    const double delta = road.center_frame(prev.id).project_clamped(center_b).d;
    const int start = std::max(0, static_cast<int>(m) - half);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = smoothstep(static_cast<double>(static_cast<int>(k) - start) / std::max(1, params.lane_change_steps));
      if (k < m) {
        lateral[k] += w * delta;
      } else {
        lateral[k] -= (1.0 - w) * delta;
      }
    }
  }

  ReferencePlan out;
  out.xi = prof->xi;
  out.v = prof->v;
  out.trajectory.dt = sc.dt;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [id, s] = locate_on_cell(c.cells[k], road, prof->xi[k]);
    const CurvilinearFrame& frame = road.center_frame(id);
    Vec2 pt;
    try {
      pt = frame.to_cartesian(s, lateral[k]);
    } catch (const GeometryError&) {
      pt = frame.to_cartesian(s, 0.0);
    }
    out.trajectory.points.push_back(pt);
  }
  return out;
}

}  // namespace crplan
