#include "dbrp/cost.hpp"

#include <cmath>

namespace dbrp {

std::string_view to_string(ManipulatorMode m) { return m == ManipulatorMode::EE ? "ee" : "mb"; }

std::optional<ManipulatorMode> parse_mode(std::string_view s) {
  if (s == "ee") return ManipulatorMode::EE;
  if (s == "mb") return ManipulatorMode::MB;
  return std::nullopt;
}

CostConfig CostConfig::for_mode(ManipulatorMode mode) {
  CostConfig cfg;
  cfg.mode = mode;
  if (mode == ManipulatorMode::EE) {
    cfg.table = {1.0, 1.0};
    cfg.home = {0.5, 0.0};
  } else {
    cfg.table = {2.0, 1.0};
    cfg.rail_y = 0.0;
    cfg.home = {0.0, cfg.rail_y};
  }
  return cfg;
}

double travel(const CostConfig& cfg, Point a, Point b) {
  if (cfg.mode == ManipulatorMode::EE) return euclidean(a, b);
  // base poses are the projections (x, rail_y), so only the x offset matters
  return std::abs(a.x - b.x);
}

double action_cost(const CostConfig& cfg, Point manip_at, const Action& a) {
  return travel(cfg, manip_at, a.pick) + travel(cfg, a.pick, a.place) + cfg.c_pp;
}

double resolved_cost(const CostConfig& cfg, Point manip, const std::vector<Action>& actions) {
  double total = 0.0;
  for (const Action& a : actions) {
    total += action_cost(cfg, manip, a);
    manip = a.place;
  }
  return total + travel(cfg, manip, cfg.home);
}

double plan_cost(const CostConfig& cfg, const SceneState& s0, std::vector<Action>& actions, const GridSpec& grid) {
  replay(s0, actions, grid);
  return resolved_cost(cfg, s0.manipulator, actions);
}

double plan_cost(const CostConfig& cfg, const SceneState& s0, const Plan& plan, const GridSpec& grid) {
  std::vector<Action> actions = plan.actions;
  return plan_cost(cfg, s0, actions, grid);
}

Plan finalize_plan(const CostConfig& cfg, const SceneState& s0, std::vector<Action> actions, const GridSpec& grid) {
  Plan p;
  p.total_cost = plan_cost(cfg, s0, actions, grid);
  p.actions = std::move(actions);
  return p;
}

}  // namespace dbrp
