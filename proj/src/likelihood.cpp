#include "vn/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vn {

namespace {

// Per-vertex neighbour counts by estimated block, shared by all swaps.
class SwapEvaluator {
 public:
  SwapEvaluator(const LabeledGraph& graph, const BlockAssignment& bhat,
                const BlockModel& model, double eps)
      : graph_(graph), labels_(bhat.labels), k_(model.num_blocks()) {
    const Eigen::MatrixXd lambda = clamp_lambda(model.lambda(), eps);
    log_p_ = lambda.array().log().matrix();
    log_q_ = (1.0 - lambda.array()).log().matrix();
    sizes_.assign(k_, 0);
    for (int label : labels_) ++sizes_.at(label);
    const int total = graph.vertex_count();
    neighbours_.setZero(total, k_);
    for (int w = graph.seed_count(); w < total; ++w) {
      const std::uint8_t* row = graph.adjacency_row(w);
      for (int x = 0; x < total; ++x) {
        if (row[x]) neighbours_(w, labels_[x]) += 1.0;
      }
    }
  }

  double log_ratio(int v, int v_prime) const {
    const int from = labels_[v];        // block 1
    const int to = labels_[v_prime];    // some other block
    const double shared = graph_.adjacent(v, v_prime) ? 1.0 : 0.0;
    double delta = 0.0;
    for (int k = 0; k < k_; ++k) {
      // Other vertices in block k, excluding v and v_prime themselves.
      double others = sizes_[k];
      if (k == from) others -= 1.0;
      if (k == to) others -= 1.0;
      const double edges_v = neighbours_(v, k) - (k == to ? shared : 0.0);
      const double edges_vp =
          neighbours_(v_prime, k) - (k == from ? shared : 0.0);
      // v moves from -> to, v_prime moves to -> from; the (v, v_prime) pair
      // keeps its unordered block pair.
      delta += edges_v * (log_p_(to, k) - log_p_(from, k)) +
               (others - edges_v) * (log_q_(to, k) - log_q_(from, k));
      delta += edges_vp * (log_p_(from, k) - log_p_(to, k)) +
               (others - edges_vp) * (log_q_(from, k) - log_q_(to, k));
    }
    return delta;
  }

 private:
  const LabeledGraph& graph_;
  const std::vector<int>& labels_;
  int k_;
  Eigen::MatrixXd log_p_;
  Eigen::MatrixXd log_q_;
  std::vector<int> sizes_;
  Eigen::MatrixXd neighbours_;
};

void check_swap(const LabeledGraph& graph, const BlockAssignment& bhat, int v,
                int v_prime) {
  const int m = graph.seed_count();
  const int total = graph.vertex_count();
  if (v < m || v >= total || v_prime < m || v_prime >= total) {
    throw std::invalid_argument("swap vertices must both be ambiguous");
  }
  if (bhat.labels.at(v) != 0 || bhat.labels.at(v_prime) == 0) {
    throw std::invalid_argument(
        "swap needs v estimated in block 1 and v' outside it");
  }
}

}  // namespace

BlockAssignment mle_block_assignment(const LabeledGraph& graph,
                                     const BlockModel& model,
                                     const LikelihoodOptions& options) {
  if (graph.vertex_count() != model.vertex_count() ||
      graph.seed_count() != model.seed_count()) {
    throw std::invalid_argument("graph and model sizes disagree");
  }
  const LogOddsMatrix b =
      build_logodds_matrix(model, graph.seed_labels(), options.epsilon);
  const SgmResult match =
      sgm_match(graph.adjacency_matrix(), b.entries, graph.seed_count(),
                options.sgm);
  BlockAssignment bhat;
  bhat.labels.resize(match.permutation.size());
  for (std::size_t i = 0; i < match.permutation.size(); ++i) {
    bhat.labels[i] = b.reference.labels[match.permutation[i]];
  }
  return bhat;
}

double swap_log_ratio(const LabeledGraph& graph, const BlockAssignment& bhat,
                      const BlockModel& model, int v, int v_prime,
                      double eps) {
  check_swap(graph, bhat, v, v_prime);
  return SwapEvaluator(graph, bhat, model, eps).log_ratio(v, v_prime);
}

std::vector<SwapScore> swap_scores(const LabeledGraph& graph,
                                   const BlockAssignment& bhat,
                                   const BlockModel& model, double eps) {
  const int m = graph.seed_count();
  const int total = graph.vertex_count();
  std::vector<int> inside;
  std::vector<int> outside;
  for (int v = m; v < total; ++v) {
    (bhat.labels.at(v) == 0 ? inside : outside).push_back(v);
  }
  const SwapEvaluator evaluator(graph, bhat, model, eps);
  Eigen::MatrixXd ratios(inside.size(), outside.size());
  for (std::size_t i = 0; i < inside.size(); ++i) {
    for (std::size_t j = 0; j < outside.size(); ++j) {
      ratios(i, j) = evaluator.log_ratio(inside[i], outside[j]);
    }
  }
  std::vector<SwapScore> scores;
  scores.reserve(total - m);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const double mean = outside.empty() ? 0.0 : ratios.row(i).mean();
    scores.push_back({inside[i], true, mean});
  }
  for (std::size_t j = 0; j < outside.size(); ++j) {
    const double mean = inside.empty() ? 0.0 : ratios.col(j).mean();
    scores.push_back({outside[j], false, mean});
  }
  return scores;
}

NominationList order_swap_scores(std::vector<SwapScore> scores) {
  std::sort(scores.begin(), scores.end(),
            [](const SwapScore& a, const SwapScore& b) {
              if (a.in_block1 != b.in_block1) return a.in_block1;
              if (a.log_geo_mean != b.log_geo_mean) {
                return a.in_block1 ? a.log_geo_mean < b.log_geo_mean
                                   : a.log_geo_mean > b.log_geo_mean;
              }
              return a.vertex < b.vertex;
            });
  NominationList list;
  list.order.reserve(scores.size());
  for (const auto& s : scores) list.order.push_back(s.vertex);
  return list;
}

NominationList likelihood_nominate(const LabeledGraph& graph,
                                   const BlockModel& model,
                                   const LikelihoodOptions& options) {
  const BlockAssignment bhat = mle_block_assignment(graph, model, options);
  return order_swap_scores(swap_scores(graph, bhat, model, options.epsilon));
}

}  // namespace vn
