#include "dbrp/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace dbrp {

int stack_quota(const ExpansionConfig& cfg) {
  if (cfg.stacking == StackingMode::None) return 0;
  return std::max(static_cast<int>(std::floor(cfg.stack_fraction * cfg.n_buf)), 1);
}

bool can_manipulate(const SceneState& s, std::size_t object, StackingMode mode) {
  return mode == StackingMode::Dynamic || s.top_clear(object);
}

std::vector<std::size_t> valid_stack_targets(const SceneState& s, std::size_t object) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (can_stack(s, object, j)) out.push_back(j);
  }
  return out;
}

namespace {

template <typename T>
void sample_in_place(std::vector<T>& v, std::size_t k, Rng& rng) {
  if (v.size() <= k) return;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
    std::swap(v[i], v[pick(rng)]);
  }
  v.resize(k);
}

}  // namespace

void append_object_successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg,
                              std::size_t k, Rng& rng, std::vector<Action>& out) {
  if (at_goal(s, goal, k, cfg.goal_tol) || !can_manipulate(s, k, cfg.stacking)) return;

  const auto* goal_pos = std::get_if<TargetPosition>(&goal.goals[k]);
  const auto* goal_on = std::get_if<TargetStackOn>(&goal.goals[k]);

  std::size_t stacks_emitted = 0;
  if (cfg.stacking != StackingMode::None) {
    std::vector<std::size_t> targets = valid_stack_targets(s, k);
    if (!cfg.exhaustive) sample_in_place(targets, static_cast<std::size_t>(stack_quota(cfg)), rng);
    for (std::size_t j : targets) {
      if (goal_on && goal_on->base == j) continue;  // emitted below as the goal action
      out.push_back(resolve(s, Action::stack(k, j)));
      ++stacks_emitted;
    }
  }

  const int n_move = std::max(cfg.n_buf - static_cast<int>(stacks_emitted), 0);
  const auto& obj = s.object(k);
  const Footprint fp{obj.width, obj.depth};
  const OccupancyIndex idx = build_index(s, k, cfg.grid);

  bool goal_open = false;
  if (goal_pos) {
    goal_open = is_placement_free(idx, fp, goal_pos->at);
  } else {
    goal_open = can_stack(s, k, goal_on->base);
  }

  if (goal_open && !cfg.exhaustive) {
    out.push_back(resolve(s, goal_pos ? Action::move(k, goal_pos->at) : Action::stack(k, goal_on->base)));
    return;
  }
  if (goal_on && goal_open) out.push_back(resolve(s, Action::stack(k, goal_on->base)));

  std::vector<Point> targets;
  if (cfg.lattice) {
    for (Point p : *cfg.lattice) {
      if (!(p == s.positions[k]) && is_placement_free(idx, fp, p)) targets.push_back(p);
    }
    if (!cfg.exhaustive) sample_in_place(targets, static_cast<std::size_t>(n_move), rng);
  } else if (cfg.exhaustive) {
    targets = free_positions(idx, fp);
  } else {
    targets = sample_free_positions(idx, fp, static_cast<std::size_t>(n_move), rng);
  }
  for (Point p : targets) {
    if (p == s.positions[k]) continue;
    out.push_back(resolve(s, Action::move(k, p)));
  }
}

std::vector<Action> try_successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg, Rng& rng) {
  std::vector<Action> out;
  for (std::size_t k = 0; k < s.size(); ++k) append_object_successors(s, goal, cfg, k, rng, out);
  return out;
}

std::vector<Action> successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg, Rng& rng) {
  std::vector<Action> out = try_successors(s, goal, cfg, rng);
  if (out.empty()) throw NoActions("no valid successor actions");
  return out;
}

}  // namespace dbrp
