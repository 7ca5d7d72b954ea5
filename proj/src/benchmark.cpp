#include "dbrp/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "dbrp/astar.hpp"
#include "dbrp/mcts.hpp"
#include "dbrp/refinement.hpp"
#include "dbrp/scene_gen.hpp"

namespace dbrp {

double esc(double avg_cost, double success_rate) {
  if (!(success_rate > 0.0)) throw ZeroSuccess("ESC is undefined without successful trials");
  return avg_cost / success_rate;
}

double ops(const std::vector<double>& esc_values) {
  if (esc_values.empty()) throw EmptySet("OPS needs at least one ESC value");
  return std::accumulate(esc_values.begin(), esc_values.end(), 0.0) / static_cast<double>(esc_values.size());
}

double pir(double ops_a, double ops_b) { return (ops_a - ops_b) / ops_a * 100.0; }

std::string_view to_string(Algo a) {
  switch (a) {
    case Algo::MctsNs: return "mcts-ns";
    case Algo::MctsDs: return "mcts-ds";
    case Algo::AstarNs: return "astar-ns";
    case Algo::AstarSs: return "astar-ss";
    case Algo::AstarDs: return "astar-ds";
  }
  return "?";
}

std::string_view display_name(Algo a) {
  switch (a) {
    case Algo::MctsNs: return "MCTS";
    case Algo::MctsDs: return "MCTS+DS";
    case Algo::AstarNs: return "STRAP";
    case Algo::AstarSs: return "STRAP+SS";
    case Algo::AstarDs: return "STRAP+DS";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view s) {
  for (Algo a : kAllAlgos) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

StackingMode stacking_of(Algo a) {
  switch (a) {
    case Algo::MctsNs:
    case Algo::AstarNs: return StackingMode::None;
    case Algo::AstarSs: return StackingMode::Static;
    case Algo::MctsDs:
    case Algo::AstarDs: return StackingMode::Dynamic;
  }
  return StackingMode::None;
}

bool is_astar(Algo a) { return a == Algo::AstarNs || a == Algo::AstarSs || a == Algo::AstarDs; }

std::vector<std::uint64_t> BenchMatrix::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(10);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::uint64_t scene_seed(const TrialSpec& t) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  const auto fold = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
  };
  fold(t.seed);
  fold(t.n);
  fold(static_cast<std::uint64_t>(std::llround(t.phi * 1e6)));
  fold(static_cast<std::uint64_t>(t.mode));
  return h;
}

TrialResult run_trial(const TrialSpec& spec, const BenchMatrix& m) {
  TrialResult r;
  r.spec = spec;
  r.refined = m.refine;
  const auto start = std::chrono::steady_clock::now();
  const auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  GenConfig gc;
  gc.n = spec.n;
  gc.phi = spec.phi;
  gc.mode = spec.mode;
  gc.with_stacks = m.with_stacks;
  gc.seed = scene_seed(spec);
  ScenePair pair;
  try {
    pair = generate_pair(gc);
  } catch (const Error& e) {
    r.error = std::string("generation: ") + e.what();
    r.seconds = seconds();
    return r;
  }

  const CostConfig cost = CostConfig::for_mode(spec.mode);
  ExpansionConfig ex;
  ex.n_buf = m.n_buf;
  ex.stack_fraction = m.stack_fraction;
  ex.stacking = stacking_of(spec.algo);

  std::optional<Plan> plan;
  if (is_astar(spec.algo)) {
    PlannerConfig pc;
    pc.time_limit = m.time_limit;
    pc.max_expansions = m.max_expansions;
    pc.goal_attempt_every = m.goal_attempt_every;
    pc.goal_attempt.max_iterations = m.goal_attempt_iterations;
    pc.expansion = ex;
    pc.cost = cost;
    pc.seed = spec.seed;
    try {
      SearchResult sr = astar_search(pair.start, pair.goal, pc);
      r.expansions = sr.stats.expansions;
      plan = std::move(sr.plan);
    } catch (const NoPlanFound& e) {
      r.error = e.what();
    }
  } else {
    MctsConfig mc;
    mc.max_iterations = m.mcts_iterations;
    mc.time_budget = m.time_limit;
    mc.seed = spec.seed;
    mc.expansion = ex;
    mc.cost = cost;
    plan = mcts_plan(pair.start, pair.goal, mc);
    if (!plan) r.error = "no plan within budget";
  }
  r.seconds = seconds();
  if (!plan) return r;

  // Replay oracle: a reported success must reach the goal from the start.
  try {
    std::vector<Action> acts = plan->actions;
    const auto states = replay(pair.start, acts);
    if (!is_goal(states.back(), pair.goal)) {
      r.error = "plan does not reach the goal";
      return r;
    }
    if (std::abs(resolved_cost(cost, pair.start.manipulator, acts) - plan->total_cost) > 1e-9) {
      r.error = "plan cost mismatch";
      return r;
    }
  } catch (const InvalidPlan& e) {
    r.error = std::string("invalid plan: ") + e.what();
    return r;
  }

  r.success = true;
  r.cost = plan->total_cost;
  r.actions = plan->actions.size();
  if (m.refine) {
    r.refined_static = refine(pair.start, *plan, cost, RefineMode::Static).total_cost;
    r.refined_dynamic = refine(pair.start, *plan, cost, RefineMode::Dynamic).total_cost;
  }
  return r;
}

std::vector<TrialSpec> expand_matrix(const BenchMatrix& m) {
  std::vector<TrialSpec> out;
  const auto seeds = m.seed_list();
  for (ManipulatorMode mode : m.modes) {
    for (double phi : m.phi_values) {
      for (std::size_t n : m.n_values) {
        for (std::uint64_t seed : seeds) {
          for (Algo a : m.algos) out.push_back(TrialSpec{a, n, phi, mode, seed});
        }
      }
    }
  }
  return out;
}

std::vector<TrialResult> run_trials(const BenchMatrix& m, const std::function<void(const TrialResult&)>& on_result) {
  const std::vector<TrialSpec> specs = expand_matrix(m);
  std::vector<TrialResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      results[i] = run_trial(specs[i], m);
      if (on_result) {
        std::lock_guard lock(mu);
        on_result(results[i]);
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(m.jobs, specs.size()));
  std::vector<std::jthread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();
  return results;
}

bool counts_toward_ops(std::size_t n, double phi) { return !(phi >= 0.5 && n == 4); }

BenchmarkReport aggregate(const std::vector<TrialResult>& trials) {
  BenchmarkReport rep;
  rep.trials = trials;

  struct Acc {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double cost = 0.0;
    double actions = 0.0;
  };
  std::map<GroupKey, std::map<std::size_t, Acc>> acc;
  for (const TrialResult& t : trials) {
    const std::string algo(to_string(t.spec.algo));
    const auto add = [&](const std::string& variant, std::optional<double> cost) {
      Acc& a = acc[GroupKey{t.spec.mode, t.spec.phi, variant}][t.spec.n];
      ++a.trials;
      if (t.success && cost) {
        ++a.successes;
        a.cost += *cost;
        a.actions += static_cast<double>(t.actions);
      }
    };
    add(algo, t.cost);
    if (t.refined) {
      add(algo + "+static", t.refined_static);
      add(algo + "+dynamic", t.refined_dynamic);
    }
  }

  for (const auto& [key, per_n] : acc) {
    std::vector<double> escs;
    bool defined = true;
    for (const auto& [n, a] : per_n) {
      CellStats c;
      c.trials = a.trials;
      c.successes = a.successes;
      c.success_rate = a.trials ? static_cast<double>(a.successes) / static_cast<double>(a.trials) : 0.0;
      if (a.successes > 0) {
        c.avg_cost = a.cost / static_cast<double>(a.successes);
        c.avg_actions = a.actions / static_cast<double>(a.successes);
        c.esc = esc(*c.avg_cost, c.success_rate);
      }
      if (counts_toward_ops(n, key.phi)) {
        if (c.esc) {
          escs.push_back(*c.esc);
        } else {
          defined = false;
        }
      }
      rep.cells[key][n] = c;
    }
    rep.ops[key] = defined && !escs.empty() ? std::optional<double>(ops(escs)) : std::nullopt;
  }

  for (const auto& [ka, oa] : rep.ops) {
    for (const auto& [kb, ob] : rep.ops) {
      if (ka.mode != kb.mode || ka.phi != kb.phi || ka.variant == kb.variant || !oa || !ob) continue;
      rep.pir[{ka.mode, ka.phi}][{ka.variant, kb.variant}] = pir(*oa, *ob);
    }
  }
  return rep;
}

BenchmarkReport run_suite(const BenchMatrix& m, const std::function<void(const TrialResult&)>& on_result) {
  return aggregate(run_trials(m, on_result));
}

}  // namespace dbrp
