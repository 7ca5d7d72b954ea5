#pragma once

#include <string>
#include <vector>

#include "dbrp/types.hpp"

namespace dbrp {

/// A detected bounding box, in image or table coordinates.
struct Detection {
  std::string label;
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;
};

struct Correspondence {
  std::vector<std::size_t> target_of;  // initial index -> target index
  double total_cost = 0.0;             // sum of centre distances over matched pairs
};

/// Minimum-cost assignment on a square cost matrix. Among optimal assignments the one that is
/// lexicographically smallest (row 0 takes the lowest possible column, then row 1, ...) is
/// returned, up to a size of 40; larger problems return the solver's first optimum.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);

/// Per class label, pairs initial and target detections minimizing the summed distance between
/// box centres. Throws CountMismatch if a label has different counts in the two lists.
Correspondence match_instances(const std::vector<Detection>& initial, const std::vector<Detection>& target);

}  // namespace dbrp
