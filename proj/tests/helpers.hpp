#pragma once

#include <random>
#include <utility>
#include <vector>

#include "dbrp/astar.hpp"
#include "dbrp/scene.hpp"
#include "oracles.hpp"

namespace testutil {

inline constexpr double kLatticeSide = 0.16;

inline dbrp::Category to_category(int c) { return dbrp::kAllCategories[static_cast<std::size_t>(c)]; }

inline std::vector<dbrp::Point> lattice_points() {
  std::vector<dbrp::Point> pts;
  for (int i = 0; i < oracle::Lattice::kPoints; ++i) pts.push_back({oracle::Lattice::px(i), oracle::Lattice::py(i)});
  return pts;
}

/// Random categories, distinct start points with some random stacks, distinct goal points.
inline oracle::Lattice::Instance random_lattice_instance(std::mt19937_64& rng, int n) {
  oracle::Lattice::Instance inst;
  std::uniform_int_distribution<int> cat(0, 3);
  for (int i = 0; i < n; ++i) inst.cats.push_back(cat(rng));

  std::vector<int> pts(oracle::Lattice::kPoints);
  for (int i = 0; i < oracle::Lattice::kPoints; ++i) pts[static_cast<std::size_t>(i)] = i;
  std::shuffle(pts.begin(), pts.end(), rng);
  inst.start.assign(pts.begin(), pts.begin() + n);
  std::shuffle(pts.begin(), pts.end(), rng);
  inst.goal.assign(pts.begin(), pts.begin() + n);

  std::bernoulli_distribution coin(0.3);
  std::vector<int> item_on(static_cast<std::size_t>(n), -1);
  std::vector<int> base_of(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    if (!coin(rng)) continue;
    for (int j = 0; j < n; ++j) {
      bool cyclic = false;
      for (int b = base_of[static_cast<std::size_t>(j)]; b >= 0; b = base_of[static_cast<std::size_t>(b)]) cyclic |= b == k;
      if (j == k || cyclic || item_on[static_cast<std::size_t>(j)] >= 0) continue;
      if (!oracle::can_rest_on(inst.cats[static_cast<std::size_t>(k)], inst.cats[static_cast<std::size_t>(j)])) continue;
      item_on[static_cast<std::size_t>(j)] = k;
      base_of[static_cast<std::size_t>(k)] = j;
      inst.start[static_cast<std::size_t>(k)] = oracle::Lattice::kPoints + j;
      break;
    }
  }
  return inst;
}

struct LatticeScene {
  dbrp::SceneState state;
  dbrp::GoalSpec goal;
};

inline LatticeScene to_scene(const oracle::Lattice::Instance& inst) {
  std::vector<dbrp::ObjectSpec> objs;
  std::vector<dbrp::Point> pos;
  std::vector<std::pair<std::size_t, std::size_t>> stacks;
  const std::size_t n = inst.cats.size();
  for (std::size_t i = 0; i < n; ++i) {
    objs.push_back({"o" + std::to_string(i), to_category(inst.cats[i]), kLatticeSide, kLatticeSide});
    const int l = inst.start[i];
    pos.push_back(l < oracle::Lattice::kPoints ? dbrp::Point{oracle::Lattice::px(l), oracle::Lattice::py(l)}
                                               : dbrp::Point{});
    if (l >= oracle::Lattice::kPoints) stacks.emplace_back(i, static_cast<std::size_t>(l - oracle::Lattice::kPoints));
  }
  LatticeScene out;
  out.state = dbrp::make_scene(objs, dbrp::Table{1.0, 1.0}, pos, stacks, dbrp::Point{inst.home_x, inst.home_y});
  for (std::size_t i = 0; i < n; ++i) {
    const int g = inst.goal[i];
    out.goal.goals.emplace_back(dbrp::TargetPosition{{oracle::Lattice::px(g), oracle::Lattice::py(g)}});
  }
  return out;
}

/// Oracle encoding of a library state on the lattice.
inline std::vector<int> to_locs(const dbrp::SceneState& s) {
  std::vector<int> locs(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.is_root(i)) {
      locs[i] = oracle::Lattice::kPoints + s.base_of[i];
      continue;
    }
    const int cx = static_cast<int>(std::lround((s.positions[i].x - 0.1) / 0.2));
    const int cy = static_cast<int>(std::lround((s.positions[i].y - 0.1) / 0.2));
    locs[i] = cy * oracle::Lattice::kSide + cx;
  }
  return locs;
}

/// Planner configuration that searches the full lattice action space.
inline dbrp::PlannerConfig lattice_planner(std::uint64_t seed) {
  dbrp::PlannerConfig pc;
  pc.time_limit = 60.0;
  pc.expansion.lattice = lattice_points();
  pc.expansion.exhaustive = true;
  pc.expansion.stacking = dbrp::StackingMode::Dynamic;
  pc.cost = dbrp::CostConfig::for_mode(dbrp::ManipulatorMode::EE);
  pc.goal_attempt.max_iterations = 200;
  pc.seed = seed;
  return pc;
}

}  // namespace testutil
