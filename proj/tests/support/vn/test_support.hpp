#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's own likelihood and
// enumeration code: they walk every labelling of the ambiguous vertices and
// evaluate the SBM likelihood as a product over vertex pairs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "vn/graph.hpp"
#include "vn/rng.hpp"

namespace vn::test {

inline Eigen::MatrixXd base_lambda() {
  Eigen::MatrixXd l(3, 3);
  l << 0.5, 0.3, 0.4, 0.3, 0.8, 0.6, 0.4, 0.6, 0.3;
  return l;
}

inline BlockModel small_scale_model(double theta = 1.0) {
  return BlockModel({4, 0, 0}, {4, 3, 3}, mix_lambda(base_lambda(), theta));
}

// Erdos-Renyi graph on n vertices with the first m as block-0 seeds.
inline LabeledGraph random_graph(int n, int m, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return LabeledGraph::from_edges(n, m, edges, std::vector<int>(m, 0),
                                  std::vector<int>(n - m, 0));
}

// Every labelling of the ambiguous vertices with the prescribed block sizes,
// found by counting through all K^n label vectors.
inline std::vector<std::vector<int>> all_labellings(
    const std::vector<int>& sizes) {
  const int k = static_cast<int>(sizes.size());
  const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<std::vector<int>> out;
  std::vector<int> digits(n, 0);
  while (true) {
    std::vector<int> counts(k, 0);
    for (int d : digits) ++counts[d];
    if (counts == sizes) out.push_back(digits);
    int pos = n - 1;
    while (pos >= 0 && digits[pos] == k - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
  return out;
}

// Full label vector (seeds, then ambiguous) for an ambiguous labelling.
inline std::vector<int> full_vector(const LabeledGraph& g,
                                    const std::vector<int>& ambiguous) {
  std::vector<int> b = g.seed_labels();
  b.insert(b.end(), ambiguous.begin(), ambiguous.end());
  return b;
}

// p(b, G) as a plain product over pairs, in long double.
inline long double joint_probability(const LabeledGraph& g,
                                     const std::vector<int>& b,
                                     const Eigen::MatrixXd& lambda) {
  long double p = 1.0L;
  for (int i = 0; i < g.vertex_count(); ++i) {
    for (int j = i + 1; j < g.vertex_count(); ++j) {
      const long double l = lambda(b[i], b[j]);
      p *= g.adjacent(i, j) ? l : 1.0L - l;
    }
  }
  return p;
}

inline long double log_joint(const LabeledGraph& g, const std::vector<int>& b,
                             const Eigen::MatrixXd& lambda) {
  long double s = 0.0L;
  for (int i = 0; i < g.vertex_count(); ++i) {
    for (int j = i + 1; j < g.vertex_count(); ++j) {
      const long double l = lambda(b[i], b[j]);
      s += std::log(g.adjacent(i, j) ? l : 1.0L - l);
    }
  }
  return s;
}

// P(ambiguous vertex m + i is in block 0 | G) for each i.
inline std::vector<double> oracle_block1_probability(
    const LabeledGraph& g, const std::vector<int>& sizes,
    const Eigen::MatrixXd& lambda) {
  const int n = g.ambiguous_count();
  std::vector<long double> num(n, 0.0L);
  long double den = 0.0L;
  for (const auto& amb : all_labellings(sizes)) {
    const long double p = joint_probability(g, full_vector(g, amb), lambda);
    den += p;
    for (int i = 0; i < n; ++i) {
      if (amb[i] == 0) num[i] += p;
    }
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = static_cast<double>(num[i] / den);
  return out;
}

// Largest log p(b, G) over all size-respecting labellings.
inline long double oracle_max_log_likelihood(const LabeledGraph& g,
                                             const std::vector<int>& sizes,
                                             const Eigen::MatrixXd& lambda) {
  long double best = -std::numeric_limits<long double>::infinity();
  for (const auto& amb : all_labellings(sizes)) {
    best = std::max(best, log_joint(g, full_vector(g, amb), lambda));
  }
  return best;
}

// Optimal assignment value and the lexicographically smallest optimal
// permutation, by trying every permutation.
inline std::pair<double, std::vector<int>> brute_force_lap(
    const Eigen::MatrixXd& cost, bool maximize) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  std::vector<int> arg = perm;
  do {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += cost(i, perm[i]);
    if (maximize ? v > best + 1e-12 : v < best - 1e-12) {
      best = v;
      arg = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, arg};
}

}  // namespace vn::test
