#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "dbrp/cost.hpp"
#include "dbrp/expansion.hpp"
#include "dbrp/mcts.hpp"

namespace dbrp {

/// Stacking-aware lower bound on the remaining cost.
///
/// Each object off its goal contributes the cheaper of travelling to its goal point and
/// travelling to a base it could rest on (plus one pick-and-place); every off-goal object adds
/// one more pick-and-place. The base an object currently sits on counts as a candidate, since
/// its top is clear once the object itself is lifted. For a stack goal the goal point is the
/// base's current position. With StackingMode::None only the goal term is used.
double heuristic(const SceneState& s, const GoalSpec& goal, const CostConfig& cfg,
                 StackingMode stacking = StackingMode::Dynamic, double goal_tol = kDefaultGoalTol);

struct SearchStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::size_t reopened = 0;
  std::size_t goal_attempts = 0;
  std::size_t goal_attempt_hits = 0;
  std::size_t f_decreases = 0;  // pops whose f fell below the previous pop
  bool proved_optimal = false;  // search closed with the incumbent no worse than any frontier f
  bool budget_exhausted = false;
  double seconds = 0.0;
};

struct PlannerConfig {
  double time_limit = 360.0;       // seconds
  std::size_t max_expansions = 0;  // 0: unbounded
  int goal_attempt_every = 50;     // 0: no periodic attempts
  MctsConfig goal_attempt;         // budget of one attempt; expansion and cost are overridden
  ExpansionConfig expansion;
  CostConfig cost;
  std::uint64_t seed = 0;
  /// Called on every expanded node with its state, g and h.
  std::function<void(const SceneState&, double, double)> on_expand;
};

struct SearchResult {
  Plan plan;
  SearchStats stats;
};

/// Quick completion from `s` by tree search. Empty plan at a goal state, nothing when
/// `budget_seconds` is not positive or no plan was found in time.
std::optional<Plan> goal_attempt(const SceneState& s, const GoalSpec& goal, double budget_seconds,
                                 const MctsConfig& base = {});

/// Best-first search on f = g + h with branch-and-bound against the best complete plan seen
/// (from the search itself or from goal attempts). Throws NoPlanFound.
SearchResult astar_search(const SceneState& s0, const GoalSpec& goal, const PlannerConfig& cfg);

inline Plan plan(const SceneState& s0, const GoalSpec& goal, const PlannerConfig& cfg) {
  return astar_search(s0, goal, cfg).plan;
}

/// 64-bit hash of cell-quantized positions, stacking edges and manipulator cell.
std::uint64_t state_signature(const SceneState& s, const GridSpec& grid);

}  // namespace dbrp
