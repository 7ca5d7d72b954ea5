#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "dbrp/cost.hpp"
#include "dbrp/expansion.hpp"

namespace dbrp {

struct MctsConfig {
  int max_iterations = 2000;  // 0: no iteration cap
  double time_budget = 0.0;   // seconds, 0: no time cap
  double exploration = std::sqrt(2.0);
  int rollout_depth = 0;  // 0: 3 * number of objects
  std::uint64_t seed = 0;
  bool allow_consecutive = true;
  ExpansionConfig expansion;
  CostConfig cost;
};

/// Rollout reward: fraction of satisfied goals, plus a bonus of 1 when all are satisfied.
double rollout_reward(std::size_t satisfied, std::size_t n);

/// Feasibility-first tree search. Returns the first complete plan found, or nothing when the
/// budget runs out. Actions come from the expansion strategy; rollouts pick an object that is
/// not at its goal uniformly, then one of its actions uniformly.
std::optional<Plan> mcts_plan(const SceneState& s0, const GoalSpec& goal, const MctsConfig& cfg);

}  // namespace dbrp
