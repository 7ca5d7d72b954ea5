#include <doctest.h>

#include <random>
#include <sstream>

#include "dbrp/benchmark.hpp"
#include "dbrp/io.hpp"

using namespace dbrp;

TEST_CASE("expected succeeded cost") {
  CHECK(esc(10, 0.5) == 20.0);
  CHECK(esc(8.49, 1.0) == 8.49);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int i = 0; i < 100; ++i) {
    const double c = u(rng);
    CHECK(esc(c, 1.0) == c);
  }
  CHECK_THROWS_AS(esc(10, 0.0), ZeroSuccess);
}

TEST_CASE("overall performance score") {
  CHECK(ops({10, 20}) == 15.0);
  CHECK(ops({7.25}) == 7.25);
  CHECK_THROWS_AS(ops({}), EmptySet);
}

TEST_CASE("percentage improvement") {
  CHECK(pir(17.40, 16.41) == doctest::Approx(5.69).epsilon(1e-3));
  CHECK(std::round(pir(17.40, 16.41) * 100) / 100 == 5.69);
  CHECK(pir(20, 18) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(pir(13.3, 13.3) == 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK((pir(a, b) > 0) == (b < a));
    CHECK((pir(a, b) < 0) == (b > a));
  }
}

TEST_CASE("algorithm names") {
  for (Algo a : kAllAlgos) CHECK(parse_algo(to_string(a)) == a);
  CHECK(display_name(Algo::AstarDs) == "STRAP+DS");
  CHECK(display_name(Algo::MctsNs) == "MCTS");
  CHECK(stacking_of(Algo::AstarSs) == StackingMode::Static);
  CHECK(stacking_of(Algo::MctsDs) == StackingMode::Dynamic);
  CHECK_FALSE(is_astar(Algo::MctsDs));
  CHECK_FALSE(parse_algo("bfs").has_value());
}

TEST_CASE("matrix expansion and scene seeds") {
  BenchMatrix m;
  CHECK(expand_matrix(m).size() == 5 * 5 * 2 * 2 * 10);
  m.algos = {Algo::AstarDs};
  m.n_values = {4};
  m.phi_values = {0.2};
  m.modes = {ManipulatorMode::EE};
  m.seeds = {7};
  CHECK(expand_matrix(m).size() == 1);
  TrialSpec a{Algo::AstarDs, 5, 0.2, ManipulatorMode::EE, 3};
  TrialSpec b = a;
  b.algo = Algo::MctsNs;
  CHECK(scene_seed(a) == scene_seed(b));  // every algorithm sees the same scene
  b.seed = 4;
  CHECK(scene_seed(a) != scene_seed(b));
  CHECK(counts_toward_ops(4, 0.2));
  CHECK_FALSE(counts_toward_ops(4, 0.5));
  CHECK(counts_toward_ops(5, 0.5));
}

TEST_CASE("one-trial suite") {
  BenchMatrix m;
  m.algos = {Algo::AstarDs};
  m.n_values = {4};
  m.phi_values = {0.2};
  m.modes = {ManipulatorMode::EE};
  m.seeds = {0};
  m.time_limit = 20;
  m.max_expansions = 500;
  m.refine = true;
  const BenchmarkReport r = run_suite(m);
  REQUIRE(r.trials.size() == 1);
  const TrialResult& t = r.trials[0];
  CHECK(t.success);
  REQUIRE(t.cost.has_value());
  REQUIRE(t.refined_static.has_value());
  REQUIRE(t.refined_dynamic.has_value());
  CHECK(*t.refined_static <= *t.cost + 1e-9);
  CHECK(*t.refined_dynamic <= *t.refined_static + 1e-9);
  const GroupKey key{ManipulatorMode::EE, 0.2, "astar-ds"};
  REQUIRE(r.ops.at(key).has_value());
  CHECK(*r.ops.at(key) == doctest::Approx(*t.cost));
  CHECK(r.cells.count(GroupKey{ManipulatorMode::EE, 0.2, "astar-ds+dynamic"}) == 1);
}

TEST_CASE("parallel runs match serial runs") {
  BenchMatrix m;
  m.algos = {Algo::AstarNs, Algo::MctsDs};
  m.n_values = {4, 5};
  m.phi_values = {0.2};
  m.modes = {ManipulatorMode::MB};
  m.seeds = {0, 1};
  m.max_expansions = 200;
  m.mcts_iterations = 1500;
  m.time_limit = 20;
  const auto serial = run_trials(m);
  m.jobs = 3;
  std::size_t callbacks = 0;
  const auto parallel = run_trials(m, [&](const TrialResult&) { ++callbacks; });
  CHECK(callbacks == serial.size());
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].success == parallel[i].success);
    CHECK(serial[i].cost == parallel[i].cost);
    CHECK(serial[i].actions == parallel[i].actions);
  }
}

TEST_CASE("aggregation recomputes from raw records") {
  std::vector<TrialResult> trials;
  const auto add = [&](Algo a, std::size_t n, std::optional<double> cost) {
    TrialResult t;
    t.spec = TrialSpec{a, n, 0.5, ManipulatorMode::EE, trials.size()};
    t.success = cost.has_value();
    t.cost = cost;
    t.actions = 3;
    if (!t.success) t.error = "timeout";
    trials.push_back(t);
  };
  // a: n=5 costs {10, fail} -> ESC 20; n=6 costs {12, 14} -> ESC 13; n=4 ignored at this density.
  add(Algo::AstarNs, 4, std::nullopt);
  add(Algo::AstarNs, 5, 10.0);
  add(Algo::AstarNs, 5, std::nullopt);
  add(Algo::AstarNs, 6, 12.0);
  add(Algo::AstarNs, 6, 14.0);
  // b: n=5 {9, 9}; n=6 {11, 11}; OPS 10.
  add(Algo::AstarDs, 5, 9.0);
  add(Algo::AstarDs, 5, 9.0);
  add(Algo::AstarDs, 6, 11.0);
  add(Algo::AstarDs, 6, 11.0);
  // c: never succeeds at n=6, so its OPS is undefined.
  add(Algo::MctsNs, 5, 9.0);
  add(Algo::MctsNs, 6, std::nullopt);

  std::stringstream ss;
  write_ndjson(ss, trials);
  const auto back = read_ndjson(ss);
  REQUIRE(back.size() == trials.size());
  const BenchmarkReport r = aggregate(back);

  const GroupKey a{ManipulatorMode::EE, 0.5, "astar-ns"};
  const GroupKey b{ManipulatorMode::EE, 0.5, "astar-ds"};
  const GroupKey c{ManipulatorMode::EE, 0.5, "mcts-ns"};
  CHECK(r.cells.at(a).at(5).esc == 20.0);
  CHECK(r.cells.at(a).at(6).esc == 13.0);
  CHECK_FALSE(r.cells.at(a).at(4).esc.has_value());
  CHECK(r.ops.at(a) == 16.5);
  CHECK(r.ops.at(b) == 10.0);
  CHECK_FALSE(r.ops.at(c).has_value());
  const auto& pirs = r.pir.at({ManipulatorMode::EE, 0.5});
  CHECK(pirs.at({"astar-ns", "astar-ds"}) == doctest::Approx(pir(16.5, 10.0)));
  CHECK(pirs.count({"astar-ns", "mcts-ns"}) == 0);
  const auto j = report_to_json(r);
  CHECK(j.is_object());
}
