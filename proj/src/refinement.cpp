#include "dbrp/refinement.hpp"

#include <algorithm>
#include <cmath>

#include "dbrp/geometry.hpp"

namespace dbrp {

std::string_view to_string(RefineMode m) { return m == RefineMode::Static ? "static" : "dynamic"; }

std::optional<RefineMode> parse_refine_mode(std::string_view s) {
  if (s == "static") return RefineMode::Static;
  if (s == "dynamic") return RefineMode::Dynamic;
  return std::nullopt;
}

namespace {

constexpr double kEps = 1e-12;
constexpr int kMaxRejectedReplays = 200;

struct Replayed {
  std::vector<Action> actions;
  std::vector<SceneState> states;
  double cost = 0.0;
};

std::optional<Replayed> try_replay(const CostConfig& cfg, const SceneState& s0, std::vector<Action> actions,
                                   const GridSpec& grid) {
  try {
    Replayed r;
    r.states = replay(s0, actions, grid);
    r.cost = resolved_cost(cfg, s0.manipulator, actions);
    r.actions = std::move(actions);
    return r;
  } catch (const InvalidPlan&) {
    return std::nullopt;
  }
}

Replayed must_replay(const CostConfig& cfg, const SceneState& s0, std::vector<Action> actions, const GridSpec& grid) {
  Replayed r;
  r.states = replay(s0, actions, grid);
  r.cost = resolved_cost(cfg, s0.manipulator, actions);
  r.actions = std::move(actions);
  return r;
}

// Keep the last action of every run on one object.
std::vector<Action> collapse_runs(const std::vector<Action>& actions) {
  std::vector<Action> out;
  for (std::size_t t = 0; t < actions.size(); ++t) {
    if (t + 1 < actions.size() && actions[t + 1].object == actions[t].object) continue;
    out.push_back(actions[t]);
  }
  return out;
}

Plan to_plan(Replayed r) { return Plan{std::move(r.actions), r.cost}; }

bool same_pose(const SceneState& a, const SceneState& b, std::size_t k) {
  return a.base_of[k] == b.base_of[k] && std::abs(a.positions[k].x - b.positions[k].x) < 1e-9 &&
         std::abs(a.positions[k].y - b.positions[k].y) < 1e-9;
}

// Drops the listed indices (ascending) when the rest still replays to `final_state` at no extra cost.
bool try_erase(Replayed& cur, const std::vector<std::size_t>& drop, const SceneState& s0,
               const SceneState& final_state, const CostConfig& cfg, const GridSpec& grid) {
  std::vector<Action> trial;
  for (std::size_t t = 0; t < cur.actions.size(); ++t) {
    if (std::find(drop.begin(), drop.end(), t) == drop.end()) trial.push_back(cur.actions[t]);
  }
  auto r = try_replay(cfg, s0, std::move(trial), grid);
  if (!r || !same_arrangement(r->states.back(), final_state) || r->cost > cur.cost + kEps) return false;
  cur = std::move(*r);
  return true;
}

// Actions that leave their object where it was, and away-and-back pairs on one object.
bool erase_effectless(Replayed& cur, const SceneState& s0, const SceneState& final_state, const CostConfig& cfg,
                      const GridSpec& grid) {
  for (std::size_t t = 0; t < cur.actions.size(); ++t) {
    const std::size_t k = cur.actions[t].object;
    if (same_pose(cur.states[t], cur.states[t + 1], k) && try_erase(cur, {t}, s0, final_state, cfg, grid)) return true;
  }
  for (std::size_t t = 0; t < cur.actions.size(); ++t) {
    const std::size_t k = cur.actions[t].object;
    const auto j = next_use(cur.actions, t);
    if (j && same_pose(cur.states[t], cur.states[*j + 1], k) && try_erase(cur, {t, *j}, s0, final_state, cfg, grid)) {
      return true;
    }
  }
  return false;
}

Plan optimize_greedy(const SceneState& s0, const Plan& plan, const CostConfig& cfg, RefineMode mode,
                     const GridSpec& grid) {
  Replayed cur = must_replay(cfg, s0, plan.actions, grid);
  const SceneState final_state = cur.states.back();
  for (std::size_t b = 0; b < cur.actions.size(); ++b) {
    const auto i = next_use(cur.actions, b);
    if (!i) continue;
    const bool adjacent = *i == b + 1;
    const Action& ab = cur.actions[b];
    const double current_legs =
        buffer_legs(cfg, ab.pick, adjacent ? ab.place : cur.actions[b + 1].pick, cur.actions[*i - 1].place,
                    cur.actions[*i].place, ab.place, cur.actions[*i].pick, adjacent);
    const auto cands = buffer_candidates(s0, cur.actions, b, cfg, mode, grid);
    int rejected = 0;
    for (const auto& c : cands) {
      if (c.legs >= current_legs - kEps) break;
      std::vector<Action> trial = cur.actions;
      trial[b] = c.action;
      auto r = try_replay(cfg, s0, std::move(trial), grid);
      if (!r || !same_arrangement(r->states.back(), final_state)) {
        if (++rejected >= kMaxRejectedReplays) break;
        continue;
      }
      // First valid candidate is the argmin; take it only if the whole plan does not get worse.
      if (r->cost <= cur.cost + kEps) cur = std::move(*r);
      break;
    }
  }
  return to_plan(std::move(cur));
}

}  // namespace

Plan prune_redundant(const SceneState& s0, const Plan& plan, const CostConfig& cfg, const GridSpec& grid) {
  Replayed cur = must_replay(cfg, s0, plan.actions, grid);
  const SceneState final_state = cur.states.back();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Action> collapsed = collapse_runs(cur.actions);
    if (collapsed.size() != cur.actions.size()) {
      auto r = try_replay(cfg, s0, std::move(collapsed), grid);
      if (r && same_arrangement(r->states.back(), final_state) && r->cost <= cur.cost + kEps) {
        cur = std::move(*r);
        changed = true;
      }
    }
    if (erase_effectless(cur, s0, final_state, cfg, grid)) {
      changed = true;
      continue;
    }
    // Best single removal per round; first-fit can drop a real move and keep a no-op that then does its job.
    std::optional<Replayed> best;
    for (std::size_t t = 0; t < cur.actions.size(); ++t) {
      std::vector<Action> trial = cur.actions;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(t));
      auto r = try_replay(cfg, s0, std::move(trial), grid);
      if (r && same_arrangement(r->states.back(), final_state) && r->cost <= cur.cost + kEps &&
          (!best || r->cost < best->cost - kEps)) {
        best = std::move(r);
      }
    }
    if (best) {
      cur = std::move(*best);
      changed = true;
    }
  }
  return to_plan(std::move(cur));
}

double buffer_legs(const CostConfig& cfg, Point pick_b, Point next_pick, Point prev_place, Point place_i, Point at_b,
                   Point at_i, bool adjacent) {
  if (adjacent) return travel(cfg, pick_b, at_b) + travel(cfg, at_i, place_i);
  return travel(cfg, pick_b, at_b) + travel(cfg, at_b, next_pick) + travel(cfg, prev_place, at_i) +
         travel(cfg, at_i, place_i);
}

std::optional<std::size_t> next_use(const std::vector<Action>& actions, std::size_t b) {
  for (std::size_t t = b + 1; t < actions.size(); ++t) {
    if (actions[t].object == actions[b].object) return t;
  }
  return std::nullopt;
}

std::vector<BufferCandidate> buffer_candidates(const SceneState& s0, const std::vector<Action>& actions,
                                               std::size_t b, const CostConfig& cfg, RefineMode mode,
                                               const GridSpec& grid) {
  std::vector<BufferCandidate> out;
  const auto i = next_use(actions, b);
  if (!i) return out;
  std::vector<Action> resolved = actions;
  const std::vector<SceneState> states = replay(s0, resolved, grid);
  const std::size_t k = resolved[b].object;
  const SceneState& pre = states[b];
  const bool adjacent = *i == b + 1;
  const Point pick_b = resolved[b].pick;
  const Point next_pick = adjacent ? Point{} : resolved[b + 1].pick;
  const Point prev_place = resolved[*i - 1].place;
  const Point place_i = resolved[*i].place;

  const auto& obj = pre.object(k);
  const OccupancyIndex idx = build_index(pre, k, grid);
  for (Point p : free_positions(idx, Footprint{obj.width, obj.depth})) {
    if (p == pre.positions[k]) continue;
    out.push_back({resolve(pre, Action::move(k, p)),
                   buffer_legs(cfg, pick_b, next_pick, prev_place, place_i, p, p, adjacent)});
  }

  if (mode == RefineMode::Dynamic) {
    for (std::size_t j = 0; j < pre.size(); ++j) {
      if (!can_stack(pre, k, j)) continue;
      bool clear = true;
      for (std::size_t t = b + 1; t <= *i && clear; ++t) {
        const int top = states[t].item_on(j);
        clear = top == kNoBase || static_cast<std::size_t>(top) == k;
      }
      if (!clear) continue;
      out.push_back({resolve(pre, Action::stack(k, j)),
                     buffer_legs(cfg, pick_b, next_pick, prev_place, place_i, pre.positions[j],
                                 states[*i].positions[j], adjacent)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const BufferCandidate& a, const BufferCandidate& c) { return a.legs < c.legs; });
  return out;
}

Plan optimize_buffers(const SceneState& s0, const Plan& plan, const CostConfig& cfg, RefineMode mode,
                      const GridSpec& grid) {
  Plan stat = optimize_greedy(s0, plan, cfg, RefineMode::Static, grid);
  if (mode == RefineMode::Static) return stat;
  Plan dyn = optimize_greedy(s0, plan, cfg, RefineMode::Dynamic, grid);
  return dyn.total_cost <= stat.total_cost ? dyn : stat;
}

Plan refine(const SceneState& s0, const Plan& plan, const CostConfig& cfg, RefineMode mode, const GridSpec& grid) {
  const Plan pruned = prune_redundant(s0, plan, cfg, grid);
  return prune_redundant(s0, optimize_buffers(s0, pruned, cfg, mode, grid), cfg, grid);
}

}  // namespace dbrp
