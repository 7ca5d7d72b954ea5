#pragma once

#include <cstdint>

#include "dbrp/cost.hpp"

namespace dbrp {

struct GenConfig {
  std::size_t n = 6;
  double phi = 0.2;  // total footprint area over table area
  ManipulatorMode mode = ManipulatorMode::EE;
  bool with_stacks = false;
  double stack_probability = 0.5;  // per object, when with_stacks
  std::uint64_t seed = 0;
  int max_attempts = 10000;  // layout restarts per scene
  GridSpec grid;
};

struct ScenePair {
  SceneState start;
  SceneState target;
  GoalSpec goal;  // object i's goal is its pose in `target`
};

/// Side of each square object: sqrt(phi * W * H / n).
double object_side(std::size_t n, double phi, const Table& table);

/// Random start and target arrangements of the same n uniformly sized squares with uniform
/// categories; the manipulator starts at home. Deterministic per seed. Throws GenerationFailed
/// when no collision-free layout turns up within max_attempts, and InvalidScene on bad
/// arguments.
ScenePair generate_pair(const GenConfig& cfg);

}  // namespace dbrp
