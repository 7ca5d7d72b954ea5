#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dbrp/cost.hpp"

namespace dbrp {

/// Expected succeeded cost: mean cost of successful trials divided by the success rate.
/// Throws ZeroSuccess when the rate is not positive.
double esc(double avg_cost, double success_rate);

/// Overall performance score: mean ESC over the evaluated object counts. Throws EmptySet.
double ops(const std::vector<double>& esc_values);

/// Improvement of B over A in percent of A; positive when B is cheaper.
double pir(double ops_a, double ops_b);

enum class Algo { MctsNs, MctsDs, AstarNs, AstarSs, AstarDs };

inline constexpr Algo kAllAlgos[] = {Algo::MctsNs, Algo::MctsDs, Algo::AstarNs, Algo::AstarSs, Algo::AstarDs};

std::string_view to_string(Algo a);      // "mcts-ns", ..., "astar-ds"
std::string_view display_name(Algo a);   // "MCTS", "MCTS+DS", "STRAP", "STRAP+SS", "STRAP+DS"
std::optional<Algo> parse_algo(std::string_view s);
StackingMode stacking_of(Algo a);
bool is_astar(Algo a);

struct BenchMatrix {
  std::vector<Algo> algos{std::begin(kAllAlgos), std::end(kAllAlgos)};
  std::vector<std::size_t> n_values{4, 5, 6, 7, 8};
  std::vector<double> phi_values{0.2, 0.5};
  std::vector<ManipulatorMode> modes{ManipulatorMode::EE, ManipulatorMode::MB};
  std::vector<std::uint64_t> seeds;  // empty: 0 .. 9
  double time_limit = 30.0;          // seconds per trial
  std::size_t max_expansions = 0;    // A* expansion cap, 0: unbounded
  int mcts_iterations = 0;           // MCTS iteration cap, 0: time only
  int goal_attempt_iterations = 300;
  int goal_attempt_every = 50;
  int n_buf = 4;
  double stack_fraction = 0.6;
  bool with_stacks = false;
  bool refine = false;  // also record statically and dynamically refined costs
  std::size_t jobs = 1;

  std::vector<std::uint64_t> seed_list() const;
};

struct TrialSpec {
  Algo algo = Algo::AstarDs;
  std::size_t n = 0;
  double phi = 0.0;
  ManipulatorMode mode = ManipulatorMode::EE;
  std::uint64_t seed = 0;
};

struct TrialResult {
  TrialSpec spec;
  bool success = false;
  std::optional<double> cost;  // present iff success
  std::size_t actions = 0;
  double seconds = 0.0;
  std::size_t expansions = 0;
  bool refined = false;  // refinement was requested; refined costs present iff also success
  std::optional<double> refined_static;
  std::optional<double> refined_dynamic;
  std::string error;  // reason when not successful
};

/// Seed of the scene pair shared by every algorithm for (n, phi, mode, seed).
std::uint64_t scene_seed(const TrialSpec& t);

/// Generate the pair, plan, check the plan by replay and optionally refine. Never throws for
/// planner or generator failures; they are recorded in the result.
TrialResult run_trial(const TrialSpec& spec, const BenchMatrix& m);

/// Every trial of the matrix in a fixed order, independent of `jobs`.
std::vector<TrialSpec> expand_matrix(const BenchMatrix& m);

/// Runs all trials on m.jobs worker threads. `on_result` is called under a lock as trials finish.
std::vector<TrialResult> run_trials(const BenchMatrix& m,
                                    const std::function<void(const TrialResult&)>& on_result = {});

struct CellStats {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::optional<double> avg_cost;
  std::optional<double> avg_actions;
  std::optional<double> esc;
};

/// Aggregates keyed by variant: an algorithm id, optionally suffixed "+static" / "+dynamic" for
/// refined costs.
struct GroupKey {
  ManipulatorMode mode;
  double phi;
  std::string variant;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct BenchmarkReport {
  std::map<GroupKey, std::map<std::size_t, CellStats>> cells;  // per n
  std::map<GroupKey, std::optional<double>> ops;               // absent if any ESC undefined
  /// pir[(mode, phi)][(a, b)] for every ordered variant pair with both OPS defined.
  std::map<std::pair<ManipulatorMode, double>, std::map<std::pair<std::string, std::string>, double>> pir;
  std::vector<TrialResult> trials;
};

/// Object counts that enter OPS for a density: 4 objects are left out from 0.5 upward.
bool counts_toward_ops(std::size_t n, double phi);

/// Pure fold over raw trials.
BenchmarkReport aggregate(const std::vector<TrialResult>& trials);

BenchmarkReport run_suite(const BenchMatrix& m, const std::function<void(const TrialResult&)>& on_result = {});

}  // namespace dbrp
