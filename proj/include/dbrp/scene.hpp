#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dbrp/grid.hpp"
#include "dbrp/types.hpp"

namespace dbrp {

struct ObjectSpec {
  std::string id;
  Category category = Category::PrimaryBase;
  double width = 0.1;  // extent along x
  double depth = 0.1;  // extent along y
};

inline constexpr int kNoBase = -1;

/// One node of the search: object arrangement, stacking forest and manipulator position.
///
/// Every object carries its own (x, y); a stacked object shares the position of its base.
/// Only root objects (base_of == kNoBase) occupy the table. The object catalogue is shared
/// between states, so copying a state copies positions and edges only.
struct SceneState {
  std::shared_ptr<const std::vector<ObjectSpec>> objects;
  Table table;
  std::vector<Point> positions;
  std::vector<int> base_of;
  Point manipulator;

  std::size_t size() const { return positions.size(); }
  const ObjectSpec& object(std::size_t i) const { return (*objects)[i]; }
  Category category(std::size_t i) const { return (*objects)[i].category; }
  bool is_root(std::size_t i) const { return base_of[i] == kNoBase; }

  /// Object resting directly on `base`, or kNoBase.
  int item_on(std::size_t base) const;
  bool top_clear(std::size_t base) const { return item_on(base) == kNoBase; }

  /// `i` followed by everything stacked above it, bottom to top.
  std::vector<std::size_t> substack(std::size_t i) const;
  bool in_substack(std::size_t root, std::size_t other) const;

  std::optional<std::size_t> find(std::string_view id) const;

  CellRect cells(std::size_t i, const GridSpec& grid) const {
    const auto& o = object(i);
    return footprint_cells(positions[i], o.width, o.depth, grid);
  }
};

/// Build a state from a catalogue, root positions and (top, base) stack pairs. Stacked objects
/// are snapped to their base's position. Throws InvalidScene when invariants do not hold.
SceneState make_scene(std::vector<ObjectSpec> objects, Table table, std::vector<Point> positions,
                      const std::vector<std::pair<std::size_t, std::size_t>>& stacks, Point manipulator,
                      const GridSpec& grid = {});

/// Throws InvalidScene describing the first violated invariant.
void check_scene(const SceneState& s, const GridSpec& grid = {});

struct TargetPosition {
  Point at;
};
struct TargetStackOn {
  std::size_t base = 0;
};
using Goal = std::variant<TargetPosition, TargetStackOn>;

struct GoalSpec {
  std::vector<Goal> goals;  // one entry per object, indexed like SceneState::positions
};

/// One grid cell at the default resolution.
inline constexpr double kDefaultGoalTol = 0.01;

bool at_goal(const SceneState& s, const GoalSpec& goal, std::size_t i, double tol = kDefaultGoalTol);
bool is_goal(const SceneState& s, const GoalSpec& goal, double tol = kDefaultGoalTol);
std::size_t satisfied_count(const SceneState& s, const GoalSpec& goal, double tol = kDefaultGoalTol);

/// Throws InvalidScene unless the goal has one entry per object and describes a valid state.
void check_goal(const SceneState& s, const GoalSpec& goal, const GridSpec& grid = {});

/// The arrangement implied by `goal`, with the manipulator left where `s` has it.
SceneState goal_state(const SceneState& s, const GoalSpec& goal, const GridSpec& grid = {});

enum class ActionKind { Move, Stack };

struct Action {
  ActionKind kind = ActionKind::Move;
  std::size_t object = 0;
  Point to{};             // Move only
  std::size_t base = 0;   // Stack only
  Point pick{};           // derived: object position before the action
  Point place{};          // derived: `to`, or the base position at execution time

  static Action move(std::size_t object, Point to) {
    Action a;
    a.kind = ActionKind::Move;
    a.object = object;
    a.to = to;
    return a;
  }
  static Action stack(std::size_t object, std::size_t base) {
    Action a;
    a.kind = ActionKind::Stack;
    a.object = object;
    a.base = base;
    return a;
  }

  /// Same primitive and target, ignoring derived points.
  bool same_command(const Action& o) const {
    if (kind != o.kind || object != o.object) return false;
    return kind == ActionKind::Move ? to == o.to : base == o.base;
  }
};

struct Plan {
  std::vector<Action> actions;
  double total_cost = 0.0;
};

/// Stability and topology check for putting `object` (with its cargo) on `base`.
bool can_stack(const SceneState& s, std::size_t object, std::size_t base);

/// Pairwise validity test: rasterized windows of the other root objects against the target
/// window inflated by the clearance margin. Equivalent to the occupancy-index test.
bool validate_action(const SceneState& s, const Action& a, const GridSpec& grid = {});

/// Fill pick/place for `a` as it would execute in `s`.
Action resolve(const SceneState& s, Action a);

/// Transition function. Moving an object carries everything stacked on it; the manipulator ends
/// at the place point. Throws InvalidAction if `a` is not valid in `s`.
SceneState apply_action(const SceneState& s, const Action& a, const GridSpec& grid = {});

/// Apply without validation. For callers that have already validated.
SceneState apply_unchecked(const SceneState& s, const Action& a);

/// States s0, s1, ..., sT. Throws InvalidPlan on the first invalid action; `actions` gets its
/// derived points refreshed.
std::vector<SceneState> replay(const SceneState& s0, std::vector<Action>& actions, const GridSpec& grid = {});

/// Positions and forest equal (manipulator ignored).
bool same_arrangement(const SceneState& a, const SceneState& b, double tol = 1e-9);

}  // namespace dbrp
