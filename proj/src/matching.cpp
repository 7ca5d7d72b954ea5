#include "dbrp/matching.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace dbrp {

namespace {

// Shortest augmenting path Hungarian method with row/column potentials, O(n^3).
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

double assignment_cost(const std::vector<std::vector<double>>& a, const std::vector<std::size_t>& cols) {
  double s = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) s += a[i][cols[i]];
  return s;
}

double optimum(const std::vector<std::vector<double>>& a) {
  if (a.empty()) return 0.0;
  return assignment_cost(a, hungarian(a));
}

}  // namespace

std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n) throw CountMismatch("assignment cost matrix must be square");
  }
  if (n == 0) return {};
  if (n > 40) return hungarian(cost);

  // Fix rows in order to the lowest column that still admits a global optimum.
  const double best = optimum(cost);
  const double eps = 1e-9 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> result(n, 0);
  double fixed = 0.0;
  std::vector<std::size_t> free_cols(n);
  for (std::size_t i = 0; i < n; ++i) free_cols[i] = i;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t ci = 0; ci < free_cols.size(); ++ci) {
      const std::size_t c = free_cols[ci];
      std::vector<std::size_t> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
      std::vector<std::vector<double>> sub(n - r - 1, std::vector<double>(rest_cols.size()));
      for (std::size_t i = r + 1; i < n; ++i) {
        for (std::size_t j = 0; j < rest_cols.size(); ++j) sub[i - r - 1][j] = cost[i][rest_cols[j]];
      }
      if (fixed + cost[r][c] + optimum(sub) <= best + eps) {
        result[r] = c;
        fixed += cost[r][c];
        free_cols = std::move(rest_cols);
        break;
      }
    }
  }
  return result;
}

Correspondence match_instances(const std::vector<Detection>& initial, const std::vector<Detection>& target) {
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_label;
  for (std::size_t i = 0; i < initial.size(); ++i) by_label[initial[i].label].first.push_back(i);
  for (std::size_t j = 0; j < target.size(); ++j) by_label[target[j].label].second.push_back(j);

  Correspondence out;
  out.target_of.assign(initial.size(), 0);
  for (const auto& [label, idx] : by_label) {
    const auto& [src, dst] = idx;
    if (src.size() != dst.size()) {
      throw CountMismatch("class '" + label + "' has " + std::to_string(src.size()) + " initial and " +
                          std::to_string(dst.size()) + " target detections");
    }
    std::vector<std::vector<double>> cost(src.size(), std::vector<double>(dst.size()));
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (std::size_t j = 0; j < dst.size(); ++j) {
        const Detection& a = initial[src[i]];
        const Detection& b = target[dst[j]];
        cost[i][j] = euclidean({a.cx, a.cy}, {b.cx, b.cy});
      }
    }
    const auto cols = min_cost_assignment(cost);
    for (std::size_t i = 0; i < src.size(); ++i) {
      out.target_of[src[i]] = dst[cols[i]];
      out.total_cost += cost[i][cols[i]];
    }
  }
  return out;
}

}  // namespace dbrp
