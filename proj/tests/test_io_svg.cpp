#include <doctest.h>

#include "dbrp/astar.hpp"
#include "dbrp/io.hpp"
#include "dbrp/scene_gen.hpp"
#include "dbrp/svg.hpp"

using namespace dbrp;
using nlohmann::json;

namespace {

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

SceneFile stacked_file() {
  GenConfig gc;
  gc.n = 6;
  gc.phi = 0.3;
  gc.with_stacks = true;
  for (gc.seed = 0;; ++gc.seed) {
    const ScenePair p = generate_pair(gc);
    bool any = false;
    for (std::size_t i = 0; i < p.start.size(); ++i) any |= !p.start.is_root(i);
    for (const Goal& g : p.goal.goals) any |= std::holds_alternative<TargetStackOn>(g);
    if (any) return {p.start, p.goal, CostConfig::for_mode(gc.mode)};
  }
}

}  // namespace

TEST_CASE("scene documents round-trip") {
  const SceneFile f = stacked_file();
  const json j = scene_to_json(f);
  const SceneFile g = scene_from_json(j);
  CHECK(same_arrangement(f.state, g.state));
  CHECK(g.state.manipulator == f.state.manipulator);
  CHECK(g.cost.mode == f.cost.mode);
  CHECK(g.cost.c_pp == f.cost.c_pp);
  CHECK(scene_to_json(g).dump() == j.dump());
  CHECK(is_goal(goal_state(g.state, g.goal), f.goal));
}

TEST_CASE("plan documents round-trip") {
  const SceneFile f = stacked_file();
  PlannerConfig pc;
  pc.max_expansions = 200;
  pc.goal_attempt.max_iterations = 200;
  const Plan p = plan(f.state, f.goal, pc);
  const json j = plan_to_json(f.state, p);
  const Plan q = plan_from_json(f.state, j);
  REQUIRE(q.actions.size() == p.actions.size());
  for (std::size_t i = 0; i < p.actions.size(); ++i) CHECK(q.actions[i].same_command(p.actions[i]));
  CHECK(q.total_cost == p.total_cost);
}

TEST_CASE("minimal hand-written scene") {
  const json j = json::parse(R"({
    "schema": 1, "mode": "ee",
    "objects": [{"id": "cup", "category": "primary_base", "w": 0.1, "d": 0.1, "x": 0.2, "y": 0.2},
                {"id": "spoon", "category": "low_mass", "w": 0.05, "d": 0.05}],
    "stacks": [["spoon", "cup"]],
    "goal": [{"id": "cup", "x": 0.7, "y": 0.7}, {"id": "spoon", "on": "cup"}]
  })");
  const SceneFile f = scene_from_json(j);
  CHECK(f.state.positions[1] == Point{0.2, 0.2});
  CHECK(f.state.base_of[1] == 0);
  CHECK(f.state.table == Table{1, 1});
  CHECK(f.state.manipulator == Point{0.5, 0.0});
  CHECK(std::holds_alternative<TargetStackOn>(f.goal.goals[1]));
}

TEST_CASE("malformed documents raise InputError") {
  const auto bad = [](const char* text) { return scene_from_json(json::parse(text)); };
  CHECK_THROWS_AS(bad("[]"), InputError);
  CHECK_THROWS_AS(bad(R"({"mode": "ee", "objects": [{"id": "a"}], "goal": []})"), InputError);
  CHECK_THROWS_AS(bad(R"({"schema": 2, "mode": "ee", "objects": [], "goal": []})"), InputError);
  CHECK_THROWS_AS(bad(R"({"mode": "arm", "objects": [], "goal": []})"), InputError);
  CHECK_THROWS_AS(
      bad(R"({"mode": "ee", "objects": [{"id": "a", "category": "teapot", "w": 0.1, "d": 0.1, "x": 0.5, "y": 0.5}], "goal": []})"),
      InputError);
  CHECK_THROWS_AS(
      bad(R"({"mode": "ee", "objects": [{"id": "a", "category": "primary_base", "w": 0.1, "d": 0.1, "x": 0.5, "y": 0.5}],
              "goal": []})"),
      InputError);  // missing goal
  CHECK_THROWS_AS(
      bad(R"({"mode": "ee", "objects": [{"id": "a", "category": "primary_base", "w": 0.1, "d": 0.1, "x": 1.5, "y": 0.5}],
              "goal": [{"id": "a", "x": 0.5, "y": 0.5}]})"),
      InputError);  // off the table
  const SceneFile f = stacked_file();
  CHECK_THROWS_AS(plan_from_json(f.state, json::parse(R"({"actions": [{"kind": "fly", "object": "o0"}]})")),
                  InputError);
  CHECK_THROWS_AS(plan_from_json(f.state, json::parse(R"({"actions": [{"kind": "move", "object": "zz", "to": [0, 0]}]})")),
                  InputError);
  CHECK_THROWS_AS(load_json_file("/nonexistent/scene.json"), InputError);
}

TEST_CASE("detections and matrix documents") {
  const auto [init, target] = detections_from_json(json::parse(R"({
    "initial": [{"label": "cup", "cx": 0, "cy": 0, "w": 1, "h": 1}, {"label": "cup", "cx": 1, "cy": 0, "w": 1, "h": 1}],
    "target":  [{"label": "cup", "cx": 0.9, "cy": 0, "w": 1, "h": 1}, {"label": "cup", "cx": 0.1, "cy": 0, "w": 1, "h": 1}]
  })"));
  const json c = correspondence_to_json(match_instances(init, target));
  CHECK(c["target_of"] == json::array({1, 0}));
  CHECK(c["total_cost"].get<double>() == doctest::Approx(0.2).epsilon(1e-12));

  BenchMatrix m;
  m.algos = {Algo::AstarDs, Algo::MctsNs};
  m.n_values = {5, 7};
  m.seeds = {1, 2, 3};
  m.refine = true;
  const BenchMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(back.algos == m.algos);
  CHECK(back.n_values == m.n_values);
  CHECK(back.seeds == m.seeds);
  CHECK(back.refine);
  const BenchMatrix counted = matrix_from_json(json::parse(R"({"algos": ["astar-ds"], "n": [4], "seeds": 4})"));
  CHECK(counted.seed_list().size() == 4);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"algos": ["bogus"]})")), InputError);
}

TEST_CASE("svg of an empty scene has only the table") {
  const SceneState s = make_scene({}, Table{1, 1}, {}, {}, {0.5, 0});
  const std::string svg = render_svg(s, std::nullopt);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(occurrences(svg, "class=\"table\"") == 1);
  CHECK(occurrences(svg, "class=\"object\"") == 0);
  CHECK(occurrences(svg, "<polyline") == 0);
  CHECK(occurrences(svg, "class=\"cost\"") == 0);
}

TEST_CASE("svg of a one-action plan") {
  const SceneState s =
      make_scene({{"box", Category::PrimaryBase, 0.1, 0.1}}, Table{1, 1}, {{0.2, 0.2}}, {}, {0.5, 0});
  const Plan p = finalize_plan(CostConfig::for_mode(ManipulatorMode::EE), s, {Action::move(0, {0.7, 0.6})});
  const std::string svg = render_svg(s, p);
  CHECK(occurrences(svg, "<polyline") == 2);
  CHECK(occurrences(svg, "class=\"pick-leg\"") == 1);
  CHECK(occurrences(svg, "class=\"place-leg\"") == 1);
  CHECK(occurrences(svg, "class=\"cost\"") == 1);
  CHECK(render_svg(s, p) == svg);
}

TEST_CASE("svg marks stacking edges") {
  const SceneFile f = stacked_file();
  std::size_t edges = 0;
  for (std::size_t i = 0; i < f.state.size(); ++i) edges += f.state.is_root(i) ? 0 : 1;
  CHECK(occurrences(render_svg(f.state, std::nullopt), "class=\"stack-badge\"") == edges);
}
