#include "vn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vn/error.hpp"
#include "vn/rng.hpp"

namespace vn {

namespace {

std::int64_t pair_count(std::int64_t a) { return a * (a - 1) / 2; }

}  // namespace

BlockModel::BlockModel(std::vector<int> seed_sizes,
                       std::vector<int> ambiguous_sizes,
                       Eigen::MatrixXd lambda)
    : seed_sizes_(std::move(seed_sizes)),
      ambiguous_sizes_(std::move(ambiguous_sizes)),
      lambda_(std::move(lambda)) {
  const auto k = static_cast<std::size_t>(lambda_.rows());
  if (k == 0 || lambda_.cols() != lambda_.rows()) {
    throw ConfigError("Lambda must be a non-empty square matrix");
  }
  if (seed_sizes_.size() != k || ambiguous_sizes_.size() != k) {
    throw ConfigError("expected " + std::to_string(k) +
                      " seed and ambiguous block sizes");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (seed_sizes_[i] < 0 || ambiguous_sizes_[i] < 0) {
      throw ConfigError("block sizes must be nonnegative");
    }
    seed_count_ += seed_sizes_[i];
    ambiguous_count_ += ambiguous_sizes_[i];
    for (std::size_t j = 0; j < k; ++j) {
      const double p = lambda_(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("Lambda entries must lie in [0, 1]");
      }
      if (p != lambda_(j, i)) throw ConfigError("Lambda must be symmetric");
    }
  }
  if (ambiguous_sizes_[0] < 1) {
    throw ConfigError("block 1 must have at least one ambiguous vertex");
  }
}

BlockModel BlockModel::clamped(double eps) const {
  return BlockModel(seed_sizes_, ambiguous_sizes_, clamp_lambda(lambda_, eps));
}

LabeledGraph::LabeledGraph(int num_vertices, int seed_count,
                           std::vector<std::uint8_t> adjacency,
                           std::vector<int> seed_labels,
                           std::optional<std::vector<int>> true_labels,
                           std::vector<std::int64_t> original_ids)
    : num_vertices_(num_vertices),
      seed_count_(seed_count),
      adjacency_(std::move(adjacency)),
      seed_labels_(std::move(seed_labels)),
      true_labels_(std::move(true_labels)),
      original_ids_(std::move(original_ids)) {
  if (num_vertices_ < 1 || seed_count_ < 0 || seed_count_ >= num_vertices_) {
    throw std::invalid_argument("graph needs 0 <= m < m + n vertices");
  }
  const auto n = static_cast<std::size_t>(num_vertices_);
  if (adjacency_.size() != n * n) {
    throw std::invalid_argument("adjacency size does not match vertex count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency_[i * n + i] != 0) {
      throw std::invalid_argument("self-loop at vertex " +
                                  std::to_string(i + 1));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((adjacency_[i * n + j] != 0) != (adjacency_[j * n + i] != 0)) {
        throw std::invalid_argument("adjacency must be symmetric");
      }
    }
  }
  if (static_cast<int>(seed_labels_.size()) != seed_count_) {
    throw std::invalid_argument("one seed label per seed vertex required");
  }
  for (int label : seed_labels_) {
    if (label < 0) throw std::invalid_argument("negative seed label");
  }
  if (true_labels_ &&
      static_cast<int>(true_labels_->size()) != ambiguous_count()) {
    throw std::invalid_argument("one true label per ambiguous vertex required");
  }
  if (!original_ids_.empty() && original_ids_.size() != n) {
    throw std::invalid_argument("original id map has the wrong length");
  }
}

LabeledGraph LabeledGraph::from_edges(
    int num_vertices, int seed_count,
    std::span<const std::pair<int, int>> edges, std::vector<int> seed_labels,
    std::optional<std::vector<int>> true_labels) {
  const auto n = static_cast<std::size_t>(num_vertices);
  std::vector<std::uint8_t> adjacency(n * n, 0);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (a == b) {
      throw std::invalid_argument("self-loop at vertex " +
                                  std::to_string(a + 1));
    }
    adjacency[a * n + b] = 1;
    adjacency[b * n + a] = 1;
  }
  return LabeledGraph(num_vertices, seed_count, std::move(adjacency),
                      std::move(seed_labels), std::move(true_labels));
}

Eigen::MatrixXd LabeledGraph::adjacency_matrix() const {
  Eigen::MatrixXd a(num_vertices_, num_vertices_);
  for (int i = 0; i < num_vertices_; ++i) {
    const std::uint8_t* row = adjacency_row(i);
    for (int j = 0; j < num_vertices_; ++j) a(i, j) = row[j];
  }
  return a;
}

std::int64_t LabeledGraph::edge_count() const {
  std::int64_t total = 0;
  for (std::uint8_t x : adjacency_) total += x;
  return total / 2;
}

int LabeledGraph::true_label(int v) const {
  return true_labels().at(static_cast<std::size_t>(v - seed_count_));
}

const std::vector<int>& LabeledGraph::true_labels() const {
  if (!true_labels_) {
    throw std::invalid_argument("graph carries no ground-truth labels");
  }
  return *true_labels_;
}

std::vector<int> LabeledGraph::full_labels() const {
  std::vector<int> labels = seed_labels_;
  const auto& truth = true_labels();
  labels.insert(labels.end(), truth.begin(), truth.end());
  return labels;
}

void check_assignment(const LabeledGraph& graph,
                      const BlockAssignment& assignment,
                      const BlockModel& model) {
  if (static_cast<int>(assignment.labels.size()) != graph.vertex_count() ||
      graph.vertex_count() != model.vertex_count() ||
      graph.seed_count() != model.seed_count()) {
    throw std::invalid_argument("assignment, graph and model sizes disagree");
  }
  for (int u = 0; u < graph.seed_count(); ++u) {
    if (assignment.labels[u] != graph.seed_labels()[u]) {
      throw std::invalid_argument("assignment disagrees with seed label of "
                                  "vertex " + std::to_string(u + 1));
    }
  }
  std::vector<int> counts(model.num_blocks(), 0);
  for (int v = graph.seed_count(); v < graph.vertex_count(); ++v) {
    const int label = assignment.labels[v];
    if (label < 0 || label >= model.num_blocks()) {
      throw std::invalid_argument("block label out of range");
    }
    ++counts[label];
  }
  if (counts != model.ambiguous_sizes()) {
    throw std::invalid_argument("assignment does not respect block sizes");
  }
}

BlockAssignment contiguous_assignment(const BlockModel& model) {
  BlockAssignment out;
  out.labels.reserve(model.vertex_count());
  for (int k = 0; k < model.num_blocks(); ++k) {
    out.labels.insert(out.labels.end(), model.seed_sizes()[k], k);
  }
  for (int k = 0; k < model.num_blocks(); ++k) {
    out.labels.insert(out.labels.end(), model.ambiguous_sizes()[k], k);
  }
  return out;
}

EdgeCounts edge_counts(const LabeledGraph& graph,
                       const BlockAssignment& assignment, int num_blocks) {
  const int n = graph.vertex_count();
  if (static_cast<int>(assignment.labels.size()) != n) {
    throw std::invalid_argument("assignment must cover every vertex");
  }
  EdgeCounts counts;
  counts.edges.setZero(num_blocks, num_blocks);
  counts.nonedges.setZero(num_blocks, num_blocks);
  std::vector<std::int64_t> sizes(num_blocks, 0);
  for (int label : assignment.labels) ++sizes.at(label);

  for (int i = 0; i < n; ++i) {
    const std::uint8_t* row = graph.adjacency_row(i);
    const int a = assignment.labels[i];
    for (int j = i + 1; j < n; ++j) {
      if (row[j]) {
        const int b = assignment.labels[j];
        ++counts.edges(std::min(a, b), std::max(a, b));
      }
    }
  }
  for (int k = 0; k < num_blocks; ++k) {
    counts.nonedges(k, k) = pair_count(sizes[k]) - counts.edges(k, k);
    for (int l = k + 1; l < num_blocks; ++l) {
      counts.nonedges(k, l) = sizes[k] * sizes[l] - counts.edges(k, l);
      counts.edges(l, k) = counts.edges(k, l);
      counts.nonedges(l, k) = counts.nonedges(k, l);
    }
  }
  return counts;
}

double log_likelihood(const LabeledGraph& graph,
                      const BlockAssignment& assignment,
                      const BlockModel& model) {
  const int k_blocks = model.num_blocks();
  const Eigen::MatrixXd& lambda = model.lambda();
  const EdgeCounts counts = edge_counts(graph, assignment, k_blocks);
  double total = 0.0;
  for (int k = 0; k < k_blocks; ++k) {
    for (int l = k; l < k_blocks; ++l) {
      const double p = lambda(k, l);
      if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(
            "log_likelihood requires Lambda clamped into (0, 1)");
      }
      total += static_cast<double>(counts.edges(k, l)) * std::log(p) +
               static_cast<double>(counts.nonedges(k, l)) * std::log1p(-p);
    }
  }
  return total;
}

LabeledGraph sample_sbm(const BlockModel& model,
                        const BlockAssignment& membership,
                        std::uint64_t rng_seed) {
  const int n = model.vertex_count();
  const int m = model.seed_count();
  if (static_cast<int>(membership.labels.size()) != n) {
    throw std::invalid_argument("membership size does not match model");
  }
  std::vector<int> seed_counts(model.num_blocks(), 0);
  std::vector<int> ambiguous_counts(model.num_blocks(), 0);
  for (int w = 0; w < n; ++w) {
    const int label = membership.labels[w];
    if (label < 0 || label >= model.num_blocks()) {
      throw std::invalid_argument("membership label out of range");
    }
    ++(w < m ? seed_counts : ambiguous_counts)[label];
  }
  if (seed_counts != model.seed_sizes() ||
      ambiguous_counts != model.ambiguous_sizes()) {
    throw std::invalid_argument("membership block sizes do not match model");
  }

  Rng rng(rng_seed);
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::uint8_t> adjacency(un * un, 0);
  const Eigen::MatrixXd& lambda = model.lambda();
  for (std::size_t i = 0; i < un; ++i) {
    const int a = membership.labels[i];
    for (std::size_t j = i + 1; j < un; ++j) {
      if (rng.uniform() < lambda(a, membership.labels[j])) {
        adjacency[i * un + j] = 1;
        adjacency[j * un + i] = 1;
      }
    }
  }
  std::vector<int> seeds(membership.labels.begin(),
                         membership.labels.begin() + m);
  std::vector<int> truth(membership.labels.begin() + m,
                         membership.labels.end());
  return LabeledGraph(n, m, std::move(adjacency), std::move(seeds),
                      std::move(truth));
}

Eigen::MatrixXd estimate_lambda(const LabeledGraph& graph, int num_blocks,
                                LambdaSource source, double eps) {
  std::vector<int> vertices;
  std::vector<int> labels;
  if (source == LambdaSource::kSeeds) {
    for (int u = 0; u < graph.seed_count(); ++u) {
      vertices.push_back(u);
      labels.push_back(graph.seed_labels()[u]);
    }
  } else {
    labels = graph.full_labels();
    for (int w = 0; w < graph.vertex_count(); ++w) vertices.push_back(w);
  }
  std::vector<std::int64_t> sizes(num_blocks, 0);
  for (int label : labels) {
    if (label < 0 || label >= num_blocks) {
      throw ConfigError("label outside 1.." + std::to_string(num_blocks));
    }
    ++sizes[label];
  }
  Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(num_blocks, num_blocks);
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (graph.adjacent(vertices[a], vertices[b])) {
        const int k = labels[a];
        const int l = labels[b];
        edges(k, l) += 1.0;
        if (k != l) edges(l, k) += 1.0;
      }
    }
  }
  Eigen::MatrixXd out(num_blocks, num_blocks);
  for (int k = 0; k < num_blocks; ++k) {
    if (sizes[k] < 2) {
      throw ConfigError("block " + std::to_string(k + 1) +
                        " needs at least 2 labelled vertices to estimate its "
                        "within-block density");
    }
    out(k, k) = edges(k, k) / static_cast<double>(pair_count(sizes[k]));
    for (int l = k + 1; l < num_blocks; ++l) {
      out(k, l) = out(l, k) =
          edges(k, l) / static_cast<double>(sizes[k] * sizes[l]);
    }
  }
  return clamp_lambda(out, eps);
}

Eigen::MatrixXd mix_lambda(const Eigen::MatrixXd& base, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("theta must lie in [0, 1]");
  }
  return (theta * base.array() + (1.0 - theta) * 0.5).matrix();
}

Eigen::MatrixXd clamp_lambda(const Eigen::MatrixXd& lambda, double eps) {
  return lambda.cwiseMax(eps).cwiseMin(1.0 - eps);
}

int numerical_rank(const Eigen::MatrixXd& matrix) {
  const Eigen::VectorXd sv =
      Eigen::JacobiSVD<Eigen::MatrixXd>(matrix).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  }
  return rank;
}

LabeledGraph induce_labeled_graph(const GraphData& data,
                                  std::span<const int> seeds,
                                  std::span<const int> ambiguous,
                                  bool with_truth) {
  std::vector<int> order(seeds.begin(), seeds.end());
  order.insert(order.end(), ambiguous.begin(), ambiguous.end());
  const auto n = order.size();
  std::vector<std::uint8_t> adjacency(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (data.adjacent(order[i], order[j])) {
        adjacency[i * n + j] = 1;
        adjacency[j * n + i] = 1;
      }
    }
  }
  std::vector<int> seed_labels;
  for (int s : seeds) {
    if (data.labels[s] < 0) {
      throw ConfigError("seed vertex " + std::to_string(s + 1) +
                        " has no label");
    }
    seed_labels.push_back(data.labels[s]);
  }
  std::optional<std::vector<int>> truth;
  if (with_truth) {
    truth.emplace();
    for (int v : ambiguous) {
      if (data.labels[v] < 0) {
        throw ConfigError("ambiguous vertex " + std::to_string(v + 1) +
                          " has no ground-truth label");
      }
      truth->push_back(data.labels[v]);
    }
  }
  std::vector<std::int64_t> ids;
  ids.reserve(n);
  for (int w : order) ids.push_back(w + 1);
  return LabeledGraph(static_cast<int>(n), static_cast<int>(seeds.size()),
                      std::move(adjacency), std::move(seed_labels),
                      std::move(truth), std::move(ids));
}

}  // namespace vn
