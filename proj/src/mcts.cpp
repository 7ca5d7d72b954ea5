#include "dbrp/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace dbrp {

double rollout_reward(std::size_t satisfied, std::size_t n) {
  if (n == 0) return 2.0;
  const double frac = static_cast<double>(satisfied) / static_cast<double>(n);
  return satisfied == n ? frac + 1.0 : frac;
}

namespace {

struct TreeNode {
  SceneState state;
  int parent = -1;
  Action action{};
  std::vector<int> children;
  std::vector<Action> untried;
  bool actions_generated = false;
  int visits = 0;
  double value = 0.0;
};

using Clock = std::chrono::steady_clock;

class Search {
 public:
  Search(const SceneState& s0, const GoalSpec& goal, const MctsConfig& cfg)
      : goal_(goal), cfg_(cfg), rng_(cfg.seed) {
    TreeNode root;
    root.state = s0;
    nodes_.push_back(std::move(root));
    depth_cap_ = cfg.rollout_depth > 0 ? cfg.rollout_depth : static_cast<int>(3 * s0.size());
  }

  std::optional<std::vector<Action>> run() {
    if (is_goal(nodes_[0].state, goal_, cfg_.expansion.goal_tol)) return std::vector<Action>{};
    if (cfg_.max_iterations <= 0 && cfg_.time_budget <= 0.0) return std::nullopt;
    const auto start = Clock::now();
    for (int it = 0;; ++it) {
      if (cfg_.max_iterations > 0 && it >= cfg_.max_iterations) break;
      if (cfg_.time_budget > 0.0 &&
          std::chrono::duration<double>(Clock::now() - start).count() >= cfg_.time_budget) {
        break;
      }
      if (auto found = iterate()) return found;
    }
    return std::nullopt;
  }

 private:
  void generate_actions(int idx) {
    TreeNode& node = nodes_[static_cast<std::size_t>(idx)];
    node.actions_generated = true;
    std::vector<Action> acts = try_successors(node.state, goal_, cfg_.expansion, rng_);
    if (!cfg_.allow_consecutive && node.parent >= 0) {
      const std::size_t last = node.action.object;
      std::erase_if(acts, [last](const Action& a) { return a.object == last; });
    }
    std::shuffle(acts.begin(), acts.end(), rng_);
    nodes_[static_cast<std::size_t>(idx)].untried = std::move(acts);
  }

  int select_child(int idx) const {
    const TreeNode& node = nodes_[static_cast<std::size_t>(idx)];
    const double log_n = std::log(static_cast<double>(std::max(node.visits, 1)));
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c : node.children) {
      const TreeNode& ch = nodes_[static_cast<std::size_t>(c)];
      const double score = ch.visits == 0
                               ? std::numeric_limits<double>::infinity()
                               : ch.value / ch.visits + cfg_.exploration * std::sqrt(log_n / ch.visits);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return best;
  }

  std::vector<Action> path_to(int idx) const {
    std::vector<Action> out;
    for (int cur = idx; nodes_[static_cast<std::size_t>(cur)].parent >= 0; cur = nodes_[static_cast<std::size_t>(cur)].parent) {
      out.push_back(nodes_[static_cast<std::size_t>(cur)].action);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::optional<std::vector<Action>> iterate() {
    // selection
    int cur = 0;
    while (true) {
      TreeNode& node = nodes_[static_cast<std::size_t>(cur)];
      if (!node.actions_generated) generate_actions(cur);
      if (!nodes_[static_cast<std::size_t>(cur)].untried.empty()) break;
      if (nodes_[static_cast<std::size_t>(cur)].children.empty()) break;  // dead end
      cur = select_child(cur);
    }

    // expansion
    if (!nodes_[static_cast<std::size_t>(cur)].untried.empty()) {
      Action a = nodes_[static_cast<std::size_t>(cur)].untried.back();
      nodes_[static_cast<std::size_t>(cur)].untried.pop_back();
      TreeNode child;
      child.state = apply_unchecked(nodes_[static_cast<std::size_t>(cur)].state, a);
      child.parent = cur;
      child.action = a;
      nodes_.push_back(std::move(child));
      const int child_idx = static_cast<int>(nodes_.size() - 1);
      nodes_[static_cast<std::size_t>(cur)].children.push_back(child_idx);
      cur = child_idx;
      if (is_goal(nodes_[static_cast<std::size_t>(cur)].state, goal_, cfg_.expansion.goal_tol)) return path_to(cur);
    }

    // rollout
    SceneState s = nodes_[static_cast<std::size_t>(cur)].state;
    std::vector<Action> rollout;
    int last_object = nodes_[static_cast<std::size_t>(cur)].parent >= 0
                          ? static_cast<int>(nodes_[static_cast<std::size_t>(cur)].action.object)
                          : -1;
    std::vector<std::size_t> order(s.size());
    std::vector<Action> acts;
    for (int depth = 0; depth < depth_cap_; ++depth) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng_);
      bool moved = false;
      for (std::size_t k : order) {
        if (!cfg_.allow_consecutive && static_cast<int>(k) == last_object) continue;
        acts.clear();
        append_object_successors(s, goal_, cfg_.expansion, k, rng_, acts);
        if (acts.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, acts.size() - 1);
        const Action a = acts[pick(rng_)];
        s = apply_unchecked(s, a);
        rollout.push_back(a);
        last_object = static_cast<int>(k);
        moved = true;
        break;
      }
      if (!moved) break;
      if (is_goal(s, goal_, cfg_.expansion.goal_tol)) {
        std::vector<Action> plan = path_to(cur);
        plan.insert(plan.end(), rollout.begin(), rollout.end());
        return plan;
      }
    }

    // backpropagation
    const double reward = rollout_reward(satisfied_count(s, goal_, cfg_.expansion.goal_tol), s.size());
    for (int n = cur; n >= 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
      nodes_[static_cast<std::size_t>(n)].visits += 1;
      nodes_[static_cast<std::size_t>(n)].value += reward;
    }
    return std::nullopt;
  }

  const GoalSpec& goal_;
  const MctsConfig& cfg_;
  Rng rng_;
  std::vector<TreeNode> nodes_;
  int depth_cap_ = 0;
};

}  // namespace

std::optional<Plan> mcts_plan(const SceneState& s0, const GoalSpec& goal, const MctsConfig& cfg) {
  Search search(s0, goal, cfg);
  auto actions = search.run();
  if (!actions) return std::nullopt;
  return finalize_plan(cfg.cost, s0, std::move(*actions), cfg.expansion.grid);
}

}  // namespace dbrp
