#pragma once

#include <Eigen/Dense>

#include <vector>

namespace vn {

enum class LapSense { kMinimize, kMaximize };

struct LapSolution {
  std::vector<int> column_of_row;
  double value = 0.0;
};

// Exact linear assignment on a square matrix (Hungarian method, O(n^3)).
// Among co-optimal assignments the lexicographically smallest column_of_row
// is returned. Throws std::invalid_argument on non-finite entries.
LapSolution solve_lap(const Eigen::MatrixXd& cost, LapSense sense);

}  // namespace vn
