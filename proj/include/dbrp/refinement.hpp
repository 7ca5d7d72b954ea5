#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dbrp/cost.hpp"

namespace dbrp {

enum class RefineMode { Static, Dynamic };

std::string_view to_string(RefineMode m);
std::optional<RefineMode> parse_refine_mode(std::string_view s);

/// Collapses runs of consecutive actions on one object to the last of the run, then drops every
/// action whose removal keeps the plan valid, keeps the final arrangement and does not raise the
/// cost. Repeats until nothing changes. Throws InvalidPlan if the input does not replay.
Plan prune_redundant(const SceneState& s0, const Plan& plan, const CostConfig& cfg, const GridSpec& grid = {});

/// A replacement for the buffer action at index b, scored by the four manipulator legs it
/// touches: into the buffer, out to the next pick, back from the previous place to re-pick it,
/// and on to its next place.
struct BufferCandidate {
  Action action;  // Move to a free position, or Stack on a base
  double legs = 0.0;
};

/// Four-leg objective: pick_b->at_b, at_b->next_pick, prev_place->at_i, at_i->place_i, where
/// at_b and at_i are where the buffered object sits at indices b and i. When b + 1 == i the
/// middle legs vanish.
double buffer_legs(const CostConfig& cfg, Point pick_b, Point next_pick, Point prev_place, Point place_i, Point at_b,
                   Point at_i, bool adjacent);

/// Index of the next action on the same object after `b`, if any.
std::optional<std::size_t> next_use(const std::vector<Action>& actions, std::size_t b);

/// All candidates for the buffer at `b`, ascending by legs (ties keep generation order: static
/// positions row-major, then bases by index). Bases must keep a clear top from b to i in the
/// original plan. Empty when `b` is not a buffer.
std::vector<BufferCandidate> buffer_candidates(const SceneState& s0, const std::vector<Action>& actions,
                                               std::size_t b, const CostConfig& cfg, RefineMode mode,
                                               const GridSpec& grid = {});

/// Greedy per-buffer rewrite in plan order. Each buffer moves to the lowest-legs candidate that
/// replays validly with an unchanged final arrangement, if that beats its current legs and does
/// not raise total cost. Dynamic mode returns the cheaper of its own result and the static one.
Plan optimize_buffers(const SceneState& s0, const Plan& plan, const CostConfig& cfg, RefineMode mode,
                      const GridSpec& grid = {});

/// prune_redundant, optimize_buffers, then prune_redundant again (a moved buffer can expose
/// new redundancy).
Plan refine(const SceneState& s0, const Plan& plan, const CostConfig& cfg, RefineMode mode, const GridSpec& grid = {});

}  // namespace dbrp
