#pragma once

#include <optional>
#include <vector>

#include "dbrp/geometry.hpp"
#include "dbrp/scene.hpp"

namespace dbrp {

struct ExpansionConfig {
  int n_buf = 4;                // successor budget per object
  double stack_fraction = 0.6;  // share of the budget offered to stack actions
  StackingMode stacking = StackingMode::Dynamic;
  GridSpec grid;
  double goal_tol = kDefaultGoalTol;
  /// Finite set of admissible move targets; replaces free-space sampling when present.
  std::optional<std::vector<Point>> lattice;
  /// Emit every valid stack and every free move target (lattice recommended).
  bool exhaustive = false;
};

/// Stack slots per object: max(floor(stack_fraction * n_buf), 1), or 0 without stacking.
int stack_quota(const ExpansionConfig& cfg);

/// Whether the stacking mode lets `object` be picked up. Outside dynamic stacking a base that
/// supports something is locked in place.
bool can_manipulate(const SceneState& s, std::size_t object, StackingMode mode);

/// Every base `object` could be stacked on right now, in index order.
std::vector<std::size_t> valid_stack_targets(const SceneState& s, std::size_t object);

/// Bounded successor actions for a single object (empty if it is at its goal or locked).
void append_object_successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg,
                              std::size_t object, Rng& rng, std::vector<Action>& out);

/// Successor actions over all objects not at their goal. Throws NoActions when there are none.
std::vector<Action> successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg, Rng& rng);

/// Like successors() but returns an empty list for dead ends.
std::vector<Action> try_successors(const SceneState& s, const GoalSpec& goal, const ExpansionConfig& cfg, Rng& rng);

}  // namespace dbrp
