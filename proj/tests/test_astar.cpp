#include <doctest.h>

#include "dbrp/astar.hpp"
#include "dbrp/scene_gen.hpp"
#include "helpers.hpp"

using namespace dbrp;

namespace {

GoalSpec stay_put(const SceneState& s) {
  GoalSpec g;
  for (std::size_t i = 0; i < s.size(); ++i) g.goals.emplace_back(TargetPosition{s.positions[i]});
  return g;
}

}  // namespace

TEST_CASE("heuristic example") {
  // spoon at (0.1, 0.1) wants (0.7, 0.9); a clear mug sits at (0.4, 0.5) on its own goal.
  std::vector<ObjectSpec> objs = {{"spoon", Category::LowMass, 0.05, 0.05}, {"mug", Category::PrimaryBase, 0.1, 0.1}};
  const SceneState s = make_scene(objs, Table{1, 1}, {{0.1, 0.1}, {0.4, 0.5}}, {}, {0.5, 0});
  GoalSpec g = stay_put(s);
  g.goals[0] = TargetPosition{{0.7, 0.9}};
  const CostConfig cfg = CostConfig::for_mode(ManipulatorMode::EE);
  CHECK(heuristic(s, g, cfg) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(heuristic(s, g, cfg, StackingMode::None) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(heuristic(s, stay_put(s), cfg) == 0.0);
}

TEST_CASE("heuristic counts the current base as a candidate") {
  std::vector<ObjectSpec> objs = {{"spoon", Category::LowMass, 0.05, 0.05}, {"mug", Category::PrimaryBase, 0.1, 0.1}};
  const SceneState s = make_scene(objs, Table{1, 1}, {{0, 0}, {0.4, 0.5}}, {{0, 1}}, {0.5, 0});
  GoalSpec g;
  g.goals = {TargetPosition{{0.9, 0.9}}, TargetPosition{{0.4, 0.5}}};
  const CostConfig cfg = CostConfig::for_mode(ManipulatorMode::EE);
  CHECK(heuristic(s, g, cfg) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("planning from a goal state gives an empty plan") {
  const SceneState s =
      make_scene({{"box", Category::PrimaryBase, 0.1, 0.1}}, Table{1, 1}, {{0.2, 0.2}}, {}, {0.5, 0});
  PlannerConfig pc;
  pc.time_limit = 5;
  const SearchResult r = astar_search(s, stay_put(s), pc);
  CHECK(r.plan.actions.empty());
  CHECK(r.plan.total_cost == 0.0);
}

TEST_CASE("one object with a free goal takes a single move") {
  const SceneState s =
      make_scene({{"box", Category::PrimaryBase, 0.1, 0.1}}, Table{1, 1}, {{0.2, 0.2}}, {}, {0.5, 0});
  GoalSpec g;
  g.goals.emplace_back(TargetPosition{{0.7, 0.6}});
  PlannerConfig pc;
  pc.time_limit = 5;
  const Plan p = plan(s, g, pc);
  REQUIRE(p.actions.size() == 1);
  const double expect = std::hypot(0.3, 0.2) + std::hypot(0.5, 0.4) + 0.2 + std::hypot(0.2, 0.6);
  CHECK(p.total_cost == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("dead end throws NoPlanFound") {
  const SceneState s =
      make_scene({{"slab", Category::PrimaryBase, 1.0, 1.0}}, Table{1, 1}, {{0.5, 0.5}}, {}, {0.5, 0});
  GoalSpec g;
  g.goals.emplace_back(TargetPosition{{0.4, 0.5}});
  PlannerConfig pc;
  pc.time_limit = 2;
  CHECK_THROWS_AS(astar_search(s, g, pc), NoPlanFound);
}

TEST_CASE("goal attempt") {
  const SceneState s =
      make_scene({{"box", Category::PrimaryBase, 0.1, 0.1}}, Table{1, 1}, {{0.2, 0.2}}, {}, {0.5, 0});
  const auto at_goal = goal_attempt(s, stay_put(s), 1.0);
  REQUIRE(at_goal.has_value());
  CHECK(at_goal->actions.empty());
  GoalSpec g;
  g.goals.emplace_back(TargetPosition{{0.7, 0.6}});
  CHECK_FALSE(goal_attempt(s, g, 0.0).has_value());
  const auto found = goal_attempt(s, g, 1.0);
  REQUIRE(found.has_value());
  CHECK(found->actions.size() == 1);
}

TEST_CASE("matches the lattice optimum on small instances") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 2;
    const auto inst = testutil::random_lattice_instance(rng, n);
    const oracle::Lattice lat(inst, true);
    const auto sc = testutil::to_scene(inst);
    PlannerConfig pc = testutil::lattice_planner(static_cast<std::uint64_t>(t));
    double worst_gap = 0.0;
    pc.on_expand = [&](const SceneState& s, double, double h) {
      const auto locs = testutil::to_locs(s);
      worst_gap = std::max(worst_gap, h - lat.cost_to_go(locs, s.manipulator.x, s.manipulator.y));
    };
    const SearchResult r = astar_search(sc.state, sc.goal, pc);
    CHECK(r.plan.total_cost == doctest::Approx(lat.optimum()).epsilon(1e-9));
    CHECK(r.stats.proved_optimal);
    CHECK(worst_gap <= 1e-9);
  }
}

TEST_CASE("budget exhaustion falls back to a goal attempt") {
  GenConfig gc;
  gc.n = 6;
  gc.phi = 0.2;
  gc.seed = 3;
  const ScenePair pair = generate_pair(gc);
  PlannerConfig pc;
  pc.max_expansions = 1;
  pc.goal_attempt.max_iterations = 300;
  pc.cost = CostConfig::for_mode(gc.mode);
  const SearchResult r = astar_search(pair.start, pair.goal, pc);
  CHECK(r.stats.budget_exhausted);
  CHECK(r.stats.goal_attempts >= 1);
  std::vector<Action> acts = r.plan.actions;
  const auto states = replay(pair.start, acts);
  CHECK(is_goal(states.back(), pair.goal));
  CHECK(plan_cost(pc.cost, pair.start, r.plan) == doctest::Approx(r.plan.total_cost).epsilon(1e-12));
}

TEST_CASE("search is deterministic per seed") {
  GenConfig gc;
  gc.n = 5;
  gc.phi = 0.5;
  gc.seed = 11;
  const ScenePair pair = generate_pair(gc);
  PlannerConfig pc;
  pc.max_expansions = 300;
  pc.goal_attempt.max_iterations = 200;
  pc.seed = 4;
  const SearchResult a = astar_search(pair.start, pair.goal, pc);
  const SearchResult b = astar_search(pair.start, pair.goal, pc);
  CHECK(a.plan.total_cost == b.plan.total_cost);
  CHECK(a.plan.actions.size() == b.plan.actions.size());
  CHECK(a.stats.expansions == b.stats.expansions);
}

TEST_CASE("state signature") {
  const SceneState s =
      make_scene({{"box", Category::PrimaryBase, 0.1, 0.1}, {"cup", Category::LowMass, 0.05, 0.05}}, Table{1, 1},
                 {{0.2, 0.2}, {0.6, 0.6}}, {}, {0.5, 0});
  const GridSpec grid;
  CHECK(state_signature(s, grid) == state_signature(s, grid));
  const SceneState moved = apply_action(s, Action::move(1, {0.6, 0.8}));
  CHECK(state_signature(s, grid) != state_signature(moved, grid));
  const SceneState stacked = apply_action(s, Action::stack(1, 0));
  SceneState flat = stacked;
  flat.base_of[1] = kNoBase;  // same positions, different forest
  CHECK(state_signature(stacked, grid) != state_signature(flat, grid));
}
