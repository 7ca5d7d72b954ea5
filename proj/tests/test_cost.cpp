#include <doctest.h>

#include "dbrp/cost.hpp"
#include "dbrp/expansion.hpp"

using namespace dbrp;

namespace {

CostConfig ee_at_origin() {
  CostConfig c = CostConfig::for_mode(ManipulatorMode::EE);
  c.home = {0.0, 0.0};
  return c;
}

Action resolved(Point pick, Point place) {
  Action a = Action::move(0, place);
  a.pick = pick;
  a.place = place;
  return a;
}

}  // namespace

TEST_CASE("travel") {
  const CostConfig ee = CostConfig::for_mode(ManipulatorMode::EE);
  const CostConfig mb = CostConfig::for_mode(ManipulatorMode::MB);
  CHECK(travel(ee, {0, 0}, {0.3, 0.4}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(travel(ee, {0.2, 0.7}, {0.2, 0.7}) == 0.0);
  CHECK(travel(mb, {0.2, 0.9}, {0.7, 0.1}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mode defaults") {
  const CostConfig ee = CostConfig::for_mode(ManipulatorMode::EE);
  CHECK(ee.table == Table{1, 1});
  CHECK(ee.home == Point{0.5, 0.0});
  CHECK(ee.c_pp == 0.2);
  const CostConfig mb = CostConfig::for_mode(ManipulatorMode::MB);
  CHECK(mb.table == Table{2, 1});
  CHECK(mb.home == Point{0.0, 0.0});
  CHECK(parse_mode("mb") == ManipulatorMode::MB);
  CHECK_FALSE(parse_mode("arm").has_value());
}

TEST_CASE("action cost") {
  const CostConfig ee = ee_at_origin();
  CHECK(action_cost(ee, {0, 0}, resolved({0.3, 0.4}, {0.6, 0.8})) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(action_cost(ee, {0.4, 0.4}, resolved({0.4, 0.4}, {0.4, 0.4})) == doctest::Approx(0.2).epsilon(1e-12));
  const CostConfig mb = CostConfig::for_mode(ManipulatorMode::MB);
  CHECK(action_cost(mb, {0, 0}, resolved({0.3, 0.4}, {0.6, 0.8})) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("plan cost threads the manipulator and returns home") {
  const CostConfig ee = ee_at_origin();
  const SceneState s =
      make_scene({{"a", Category::PrimaryBase, 0.1, 0.1}}, Table{1, 1}, {{0.3, 0.4}}, {}, {0.0, 0.0});
  Plan empty;
  CHECK(plan_cost(ee, s, empty) == 0.0);
  Plan one;
  one.actions = {Action::move(0, {0.6, 0.8})};
  CHECK(plan_cost(ee, s, one) == doctest::Approx(2.2).epsilon(1e-12));
  const Plan fin = finalize_plan(ee, s, one.actions);
  CHECK(fin.total_cost == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(fin.actions[0].pick == Point{0.3, 0.4});

  Plan bad;
  bad.actions = {Action::move(0, {1.5, 0.5})};
  CHECK_THROWS_AS(plan_cost(ee, s, bad), InvalidPlan);
}

TEST_CASE("cost properties on random plans") {
  Rng rng(23);
  std::vector<ObjectSpec> objs;
  std::vector<Point> pos;
  for (int i = 0; i < 6; ++i) {
    objs.push_back({"o" + std::to_string(i), kAllCategories[i % 4], 0.1, 0.1});
    pos.push_back({0.15 + 0.3 * (i % 3), 0.25 + 0.5 * (i / 3)});
  }
  GoalSpec far;
  for (int i = 0; i < 6; ++i) far.goals.emplace_back(TargetPosition{{-1, -1}});
  for (ManipulatorMode mode : {ManipulatorMode::EE, ManipulatorMode::MB}) {
    const CostConfig cfg = CostConfig::for_mode(mode);
    const SceneState s0 = make_scene(objs, Table{1, 1}, pos, {}, cfg.home);
    for (int trial = 0; trial < 100; ++trial) {
      SceneState s = s0;
      std::vector<Action> acts;
      std::uniform_int_distribution<int> len(0, 12);
      for (int t = len(rng); t > 0; --t) {
        auto succ = successors(s, far, ExpansionConfig{}, rng);
        std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
        acts.push_back(succ[pick(rng)]);
        s = apply_action(s, acts.back());
      }
      // Independent recomputation with explicit distance formulas.
      const auto d = [&](Point a, Point b) {
        return mode == ManipulatorMode::EE ? std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y))
                                           : std::abs(a.x - b.x);
      };
      double expect = 0.0;
      Point m = s0.manipulator;
      SceneState cur = s0;
      for (const Action& a : acts) {
        REQUIRE(a.pick == cur.positions[a.object]);
        expect += d(m, a.pick) + d(a.pick, a.place) + 0.2;
        REQUIRE(action_cost(cfg, m, a) >= travel(cfg, m, a.place) + cfg.c_pp - 1e-12);
        m = a.place;
        cur = apply_action(cur, a);
      }
      expect += d(m, cfg.home);
      std::vector<Action> copy = acts;
      const double got = plan_cost(cfg, s0, copy);
      REQUIRE(got == doctest::Approx(expect).epsilon(1e-12));
      REQUIRE(got >= 0.0);

      // An action with pick = place = manipulator position adds exactly c_pp.
      if (!acts.empty()) {
        Action noop = Action::move(acts.back().object, acts.back().place);
        noop.pick = noop.place = acts.back().place;
        std::vector<Action> longer = acts;
        longer.push_back(noop);
        REQUIRE(resolved_cost(cfg, s0.manipulator, longer) ==
                doctest::Approx(resolved_cost(cfg, s0.manipulator, acts) + cfg.c_pp).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("travel scales linearly with coordinates") {
  const CostConfig ee = CostConfig::for_mode(ManipulatorMode::EE);
  const CostConfig mb = CostConfig::for_mode(ManipulatorMode::MB);
  const Point a{0.13, 0.71}, b{0.64, 0.22};
  for (double k : {0.5, 2.0, 3.7}) {
    CHECK(travel(ee, {a.x * k, a.y * k}, {b.x * k, b.y * k}) == doctest::Approx(k * travel(ee, a, b)).epsilon(1e-12));
    CHECK(travel(mb, {a.x * k, a.y * k}, {b.x * k, b.y * k}) == doctest::Approx(k * travel(mb, a, b)).epsilon(1e-12));
  }
}
