#include "vn/lap.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace vn {

namespace {

struct DualSolution {
  std::vector<int> column_of_row;
  std::vector<double> row_potential;
  std::vector<double> column_potential;
};

// Shortest augmenting path Hungarian method for minimization. Returned
// potentials satisfy cost(i, j) - u(i) - v(j) >= 0 with equality on the
// matching.
DualSolution hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = row_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  DualSolution out;
  out.column_of_row.assign(n, -1);
  out.row_potential.assign(u.begin() + 1, u.end());
  out.column_potential.assign(v.begin() + 1, v.end());
  for (int j = 1; j <= n; ++j) out.column_of_row[row_of_col[j] - 1] = j - 1;
  return out;
}

// Every optimal assignment is a perfect matching of zero-reduced-cost edges
// under any optimal dual. Walk rows in order and give each the smallest
// column that still admits a perfect matching of the remaining rows.
void make_lexicographically_smallest(const Eigen::MatrixXd& cost,
                                     DualSolution& sol) {
  const int n = static_cast<int>(cost.rows());
  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale * std::max(1, n);
  auto tight = [&](int i, int j) {
    return cost(i, j) - sol.row_potential[i] - sol.column_potential[j] <= tol;
  };

  std::vector<int>& col = sol.column_of_row;
  std::vector<int> row_of_col(n);
  for (int i = 0; i < n; ++i) row_of_col[col[i]] = i;

  std::vector<char> reach(n);
  std::vector<int> next_row(n), next_col(n);
  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    const int target = col[i];
    // Columns whose owner (an unfixed row) can shift along tight edges so
    // that the chain ends at `target`.
    std::fill(reach.begin(), reach.end(), 0);
    reach[target] = 1;
    queue.assign(1, target);
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int r = i + 1; r < n; ++r) {
        const int owned = col[r];
        if (reach[owned] || !tight(r, c)) continue;
        reach[owned] = 1;
        next_row[owned] = r;
        next_col[owned] = c;
        queue.push_back(owned);
      }
    }
    int best = target;
    for (int j = 0; j < target; ++j) {
      if (reach[j] && tight(i, j)) {
        best = j;
        break;
      }
    }
    if (best == target) continue;
    for (int c = best; c != target;) {
      const int r = next_row[c];
      const int to = next_col[c];
      col[r] = to;
      row_of_col[to] = r;
      c = to;
    }
    col[i] = best;
    row_of_col[best] = i;
  }
}

}  // namespace

LapSolution solve_lap(const Eigen::MatrixXd& cost, LapSense sense) {
  if (cost.rows() != cost.cols()) {
    throw std::invalid_argument("assignment cost matrix must be square");
  }
  if (!cost.allFinite()) {
    throw std::invalid_argument("assignment cost matrix has non-finite entries");
  }
  LapSolution out;
  if (cost.rows() == 0) return out;
  const Eigen::MatrixXd work = sense == LapSense::kMaximize ? -cost : cost;
  DualSolution sol = hungarian(work);
  make_lexicographically_smallest(work, sol);
  out.column_of_row = std::move(sol.column_of_row);
  for (int i = 0; i < static_cast<int>(cost.rows()); ++i) {
    out.value += cost(i, out.column_of_row[i]);
  }
  return out;
}

}  // namespace vn
