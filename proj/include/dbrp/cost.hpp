#pragma once

#include "dbrp/scene.hpp"

namespace dbrp {

/// EE: stationary arm, cost is end-effector travel in the table plane.
/// MB: mobile base on a rail along the long table edge, cost is base travel.
enum class ManipulatorMode { EE, MB };

std::string_view to_string(ManipulatorMode m);
std::optional<ManipulatorMode> parse_mode(std::string_view s);

struct CostConfig {
  ManipulatorMode mode = ManipulatorMode::EE;
  double c_pp = 0.2;
  Point home{0.5, 0.0};
  Table table{1.0, 1.0};
  double rail_y = 0.0;  // MB only

  /// Normalized table and home for a mode: EE 1x1 with home at the front-edge midpoint,
  /// MB 2x1 with home at the rail origin.
  static CostConfig for_mode(ManipulatorMode mode);
};

/// Manipulator travel between two manipulation points.
double travel(const CostConfig& cfg, Point a, Point b);

/// travel(manip, pick) + travel(pick, place) + c_pp. `a` must have derived points resolved.
double action_cost(const CostConfig& cfg, Point manip_at, const Action& a);

/// Cumulative cost of executing `actions` from `s0`, threading the manipulator through each
/// place point and returning home at the end. Derived points in `actions` are refreshed.
/// Throws InvalidPlan if replay fails.
double plan_cost(const CostConfig& cfg, const SceneState& s0, std::vector<Action>& actions, const GridSpec& grid = {});
double plan_cost(const CostConfig& cfg, const SceneState& s0, const Plan& plan, const GridSpec& grid = {});

/// Replay, resolve derived points and set total_cost. Throws InvalidPlan.
Plan finalize_plan(const CostConfig& cfg, const SceneState& s0, std::vector<Action> actions, const GridSpec& grid = {});

/// Cost of already-resolved actions starting with the manipulator at `manip`.
double resolved_cost(const CostConfig& cfg, Point manip, const std::vector<Action>& actions);

}  // namespace dbrp
