#include "dbrp/astar.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace dbrp {

double heuristic(const SceneState& s, const GoalSpec& goal, const CostConfig& cfg, StackingMode stacking,
                 double goal_tol) {
  double sum = 0.0;
  std::size_t off_goal = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (at_goal(s, goal, i, goal_tol)) continue;
    ++off_goal;
    const Point target = std::visit(
        [&](const auto& g) -> Point {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, TargetPosition>) {
            return g.at;
          } else {
            return s.positions[g.base];
          }
        },
        goal.goals[i]);
    double best = travel(cfg, s.positions[i], target);
    if (stacking != StackingMode::None) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i || !stackable(s.category(i), s.category(j))) continue;
        const int on_j = s.item_on(j);
        if (on_j != kNoBase && static_cast<std::size_t>(on_j) != i) continue;
        if (s.in_substack(i, j)) continue;
        best = std::min(best, travel(cfg, s.positions[i], s.positions[j]) + cfg.c_pp);
      }
    }
    sum += best;
  }
  return sum + static_cast<double>(off_goal) * cfg.c_pp;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

// Exact closed-set key; the 64-bit signature is only its hash.
std::vector<std::int32_t> state_key(const SceneState& s, const GridSpec& grid) {
  std::vector<std::int32_t> key;
  key.reserve(3 * s.size() + 2);
  const double r = grid.resolution;
  for (std::size_t i = 0; i < s.size(); ++i) {
    key.push_back(static_cast<std::int32_t>(std::lround(s.positions[i].x * r)));
    key.push_back(static_cast<std::int32_t>(std::lround(s.positions[i].y * r)));
    key.push_back(s.base_of[i]);
  }
  key.push_back(static_cast<std::int32_t>(std::lround(s.manipulator.x * r)));
  key.push_back(static_cast<std::int32_t>(std::lround(s.manipulator.y * r)));
  return key;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& k) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (std::int32_t v : k) h = mix(h, static_cast<std::uint32_t>(v));
    return static_cast<std::size_t>(h);
  }
};

struct Node {
  SceneState state;
  double g = 0.0;
  double h = 0.0;
  int parent = -1;
  Action action{};
};

struct OpenEntry {
  double f;
  double h;
  std::uint64_t seq;
  int node;
};

// Min-heap on (f, h, seq).
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

using Clock = std::chrono::steady_clock;

}  // namespace

std::uint64_t state_signature(const SceneState& s, const GridSpec& grid) {
  return static_cast<std::uint64_t>(KeyHash{}(state_key(s, grid)));
}

std::optional<Plan> goal_attempt(const SceneState& s, const GoalSpec& goal, double budget_seconds,
                                 const MctsConfig& base) {
  if (is_goal(s, goal, base.expansion.goal_tol)) return finalize_plan(base.cost, s, {}, base.expansion.grid);
  if (!(budget_seconds > 0.0)) return std::nullopt;
  MctsConfig cfg = base;
  cfg.time_budget = cfg.time_budget > 0.0 ? std::min(cfg.time_budget, budget_seconds) : budget_seconds;
  return mcts_plan(s, goal, cfg);
}

SearchResult astar_search(const SceneState& s0, const GoalSpec& goal, const PlannerConfig& cfg) {
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  const ExpansionConfig& ex = cfg.expansion;
  const double tol = ex.goal_tol;
  const double eps = 1e-9;

  SearchResult result;
  SearchStats& stats = result.stats;

  if (is_goal(s0, goal, tol)) {
    result.plan = finalize_plan(cfg.cost, s0, {}, ex.grid);
    stats.proved_optimal = true;
    return result;
  }

  Rng rng(cfg.seed);
  std::vector<Node> nodes;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::unordered_map<std::vector<std::int32_t>, double, KeyHash> best_g;
  std::uint64_t seq = 0;

  std::optional<std::vector<Action>> incumbent;
  double incumbent_cost = std::numeric_limits<double>::infinity();

  const auto path_to = [&](int idx) {
    std::vector<Action> out;
    for (int cur = idx; nodes[static_cast<std::size_t>(cur)].parent >= 0;
         cur = nodes[static_cast<std::size_t>(cur)].parent) {
      out.push_back(nodes[static_cast<std::size_t>(cur)].action);
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  const auto attempt_from = [&](int idx, double budget) {
    ++stats.goal_attempts;
    MctsConfig mc = cfg.goal_attempt;
    mc.expansion = ex;
    mc.expansion.exhaustive = false;
    mc.cost = cfg.cost;
    mc.seed = mix(cfg.seed, stats.goal_attempts);
    const Node& node = nodes[static_cast<std::size_t>(idx)];
    auto completion = goal_attempt(node.state, goal, budget, mc);
    if (!completion) return;
    ++stats.goal_attempt_hits;
    const double total = node.g + completion->total_cost;
    if (total < incumbent_cost - eps) {
      std::vector<Action> actions = path_to(idx);
      actions.insert(actions.end(), completion->actions.begin(), completion->actions.end());
      incumbent = std::move(actions);
      incumbent_cost = total;
    }
  };

  const auto attempt_budget = [&] {
    const double remaining = cfg.time_limit - elapsed();
    const double per_call = cfg.goal_attempt.time_budget > 0.0 ? cfg.goal_attempt.time_budget : remaining;
    return std::min(per_call, remaining);
  };

  {
    Node root;
    root.state = s0;
    root.h = heuristic(s0, goal, cfg.cost, ex.stacking, tol);
    nodes.push_back(std::move(root));
    best_g.emplace(state_key(s0, ex.grid), 0.0);
    open.push({nodes[0].h, nodes[0].h, seq++, 0});
  }

  double last_f = -std::numeric_limits<double>::infinity();
  bool stopped_by_budget = false;
  while (!open.empty()) {
    if (elapsed() >= cfg.time_limit || (cfg.max_expansions > 0 && stats.expansions >= cfg.max_expansions)) {
      stopped_by_budget = true;
      break;
    }
    const OpenEntry top = open.top();
    if (top.f >= incumbent_cost - eps) break;
    open.pop();
    Node cur = nodes[static_cast<std::size_t>(top.node)];
    const auto key = state_key(cur.state, ex.grid);
    if (cur.g > best_g[key] + eps) continue;  // superseded by a cheaper path

    if (top.f < last_f - eps) ++stats.f_decreases;
    last_f = top.f;
    if (cfg.on_expand) cfg.on_expand(cur.state, cur.g, cur.h);
    if (cfg.goal_attempt_every > 0 && stats.expansions % static_cast<std::size_t>(cfg.goal_attempt_every) == 0) {
      attempt_from(top.node, attempt_budget());
    }
    ++stats.expansions;

    for (const Action& a : try_successors(cur.state, goal, ex, rng)) {
      ++stats.generated;
      SceneState next = apply_unchecked(cur.state, a);
      const double g = cur.g + action_cost(cfg.cost, cur.state.manipulator, a);
      if (is_goal(next, goal, tol)) {
        const double total = g + travel(cfg.cost, next.manipulator, cfg.cost.home);
        if (total < incumbent_cost - eps) {
          std::vector<Action> actions = path_to(top.node);
          actions.push_back(a);
          incumbent = std::move(actions);
          incumbent_cost = total;
        }
        continue;
      }
      const double h = heuristic(next, goal, cfg.cost, ex.stacking, tol);
      if (g + h >= incumbent_cost - eps) continue;
      auto next_key = state_key(next, ex.grid);
      auto [it, inserted] = best_g.try_emplace(std::move(next_key), g);
      if (!inserted) {
        if (it->second <= g + eps) continue;
        it->second = g;
        ++stats.reopened;
      }
      Node child;
      child.state = std::move(next);
      child.g = g;
      child.h = h;
      child.parent = top.node;
      child.action = a;
      nodes.push_back(std::move(child));
      open.push({g + h, h, seq++, static_cast<int>(nodes.size() - 1)});
    }
  }

  if (stopped_by_budget) {
    stats.budget_exhausted = true;
    // Drop superseded frontier entries so the attempt starts from a live node.
    while (!open.empty()) {
      const OpenEntry top = open.top();
      const Node& n = nodes[static_cast<std::size_t>(top.node)];
      if (n.g <= best_g[state_key(n.state, ex.grid)] + eps) break;
      open.pop();
    }
    if (!open.empty()) {
      const double budget = cfg.goal_attempt.time_budget > 0.0 ? cfg.goal_attempt.time_budget : 1.0;
      attempt_from(open.top().node, budget);
    }
  } else {
    stats.proved_optimal = incumbent.has_value();
  }

  stats.seconds = elapsed();
  if (!incumbent) throw NoPlanFound("no plan found within the search budget");
  result.plan = finalize_plan(cfg.cost, s0, std::move(*incumbent), ex.grid);
  return result;
}

}  // namespace dbrp
