#include "vn/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vn/error.hpp"

namespace vn {

double count_partitions(std::span<const int> sizes) {
  double count = 1.0;
  int placed = 0;
  for (int size : sizes) {
    if (size < 0) throw std::invalid_argument("negative block size");
    // Multiply in binomial(placed + size, size) incrementally.
    for (int i = 1; i <= size; ++i) {
      count = count * (placed + i) / i;
    }
    placed += size;
  }
  return std::round(count);
}

PartitionEnumerator::PartitionEnumerator(std::span<const int> sizes,
                                         double guard) {
  const double count = count_partitions(sizes);
  if (count > guard) {
    std::ostringstream msg;
    msg << "canonical scheme needs " << count << " partitions, above the "
        << "limit of " << guard << "; use the likelihood scheme instead";
    throw InfeasibleError(msg.str());
  }
  count_ = static_cast<std::uint64_t>(count);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    labels_.insert(labels_.end(), sizes[k], static_cast<int>(k));
  }
}

bool PartitionEnumerator::advance() {
  return std::next_permutation(labels_.begin(), labels_.end());
}

CanonicalScores conditional_block1_probability(const LabeledGraph& graph,
                                               const BlockModel& model,
                                               const CanonicalOptions& options) {
  const int m = graph.seed_count();
  const int n = graph.ambiguous_count();
  const int k_blocks = model.num_blocks();
  if (m != model.seed_count() || n != model.ambiguous_count()) {
    throw std::invalid_argument("graph and model sizes disagree");
  }
  PartitionEnumerator partitions(model.ambiguous_sizes(),
                                 options.partition_guard);

  const Eigen::MatrixXd lambda = clamp_lambda(model.lambda(), options.epsilon);
  const Eigen::MatrixXd log_odds =
      (lambda.array() / (1.0 - lambda.array())).log().matrix();

  // Every partition has the same block sizes, so the non-edge term only
  // contributes a constant once edges are weighted by log-odds.
  double base = 0.0;
  for (int k = 0; k < k_blocks; ++k) {
    for (int l = k; l < k_blocks; ++l) {
      const double a = model.block_size(k);
      const double pairs =
          k == l ? a * (a - 1.0) / 2.0 : a * model.block_size(l);
      base += pairs * std::log1p(-lambda(k, l));
    }
  }
  const auto& seed_labels = graph.seed_labels();
  for (int u = 0; u < m; ++u) {
    for (int u2 = u + 1; u2 < m; ++u2) {
      if (graph.adjacent(u, u2)) base += log_odds(seed_labels[u], seed_labels[u2]);
    }
  }

  // seed_term(i, a): log-odds weight of v_i's seed edges if v_i is in block a.
  Eigen::MatrixXd seed_term = Eigen::MatrixXd::Zero(n, k_blocks);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* row = graph.adjacency_row(m + i);
    for (int u = 0; u < m; ++u) {
      if (row[u]) seed_term.row(i) += log_odds.row(seed_labels[u]);
    }
  }
  std::vector<std::pair<int, int>> inner_edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (graph.adjacent(m + i, m + j)) inner_edges.emplace_back(i, j);
    }
  }

  // Streaming log-sum-exp with running-max rescaling.
  double max_weight = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  std::vector<double> block1(n, 0.0);
  do {
    const std::vector<int>& labels = partitions.labels();
    double w = base;
    for (int i = 0; i < n; ++i) w += seed_term(i, labels[i]);
    for (const auto& [i, j] : inner_edges) w += log_odds(labels[i], labels[j]);

    if (w > max_weight) {
      const double scale = std::exp(max_weight - w);
      total *= scale;
      for (double& s : block1) s *= scale;
      max_weight = w;
    }
    const double term = std::exp(w - max_weight);
    total += term;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == 0) block1[i] += term;
    }
  } while (partitions.advance());

  CanonicalScores scores;
  scores.prob.resize(n);
  for (int i = 0; i < n; ++i) scores.prob[i] = block1[i] / total;
  scores.log_denominator = max_weight + std::log(total);
  return scores;
}

NominationList order_by_descending_score(int seed_count,
                                         std::span<const double> scores) {
  NominationList list;
  list.order.resize(scores.size());
  std::iota(list.order.begin(), list.order.end(), seed_count);
  std::stable_sort(list.order.begin(), list.order.end(), [&](int a, int b) {
    return scores[a - seed_count] > scores[b - seed_count];
  });
  return list;
}

NominationList canonical_nominate(const LabeledGraph& graph,
                                  const BlockModel& model,
                                  const CanonicalOptions& options) {
  const CanonicalScores scores =
      conditional_block1_probability(graph, model, options);
  return order_by_descending_score(graph.seed_count(), scores.prob);
}

}  // namespace vn
