#pragma once

// Seeded graph matching: maximize <A, P B P^T> over permutations P whose
// leading m x m block is the identity, by Frank-Wolfe on the relaxation to
// doubly stochastic matrices.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vn/graph.hpp"

namespace vn {

struct LogOddsMatrix {
  // entries(i, j) = log(L / (1 - L)), L = Lambda(reference(i), reference(j)).
  Eigen::MatrixXd entries;
  // Seeds keep their given labels; ambiguous positions are filled with
  // block 1 first, then block 2, and so on.
  BlockAssignment reference;
};

LogOddsMatrix build_logodds_matrix(const BlockModel& model,
                                   std::span<const int> seed_labels,
                                   double eps = kDefaultEpsilon);

struct SgmOptions {
  int max_iter = 20;
  double tol = 1e-6;
  // Restart 0 starts from the flat matrix; later restarts start from a
  // uniformly random permutation.
  int restarts = 1;
  std::uint64_t seed = 0;
  // Called with every relaxed iterate (ambiguous block), including the start.
  std::function<void(const Eigen::MatrixXd&)> on_iterate;
};

struct SgmResult {
  // permutation[i]: index of B matched to vertex i of A. Identity on seeds.
  std::vector<int> permutation;
  double objective = 0.0;
  // Relaxed objective at the start and after each Frank-Wolfe step of the
  // restart that produced the result.
  std::vector<double> relaxed_trace;
  int iterations = 0;
};

// <A, P B P^T> for the permutation matrix P with P(i, perm[i]) = 1.
double matching_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          std::span<const int> perm);

// Relaxed objective and its gradient with respect to the n x n ambiguous
// block q of P = diag(I_m, q).
double relaxed_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         int m, const Eigen::MatrixXd& q);
Eigen::MatrixXd relaxed_gradient(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b, int m,
                                 const Eigen::MatrixXd& q);

SgmResult sgm_match(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int m,
                    const SgmOptions& options = {});

}  // namespace vn
