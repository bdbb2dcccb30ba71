#pragma once

// Stochastic block model substrate shared by every nomination scheme.
//
// Internally vertices are 0-based: seeds occupy [0, m) and ambiguous
// vertices [m, m + n). Block labels are 0-based as well, with block 0 the
// block of interest. Conversion to the 1-based external numbering happens
// only in io.cpp and the CLI.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace vn {

inline constexpr double kDefaultEpsilon = 1e-6;

class BlockModel {
 public:
  // Throws ConfigError if the sizes or the probability matrix are invalid.
  BlockModel(std::vector<int> seed_sizes, std::vector<int> ambiguous_sizes,
             Eigen::MatrixXd lambda);

  int num_blocks() const { return static_cast<int>(lambda_.rows()); }
  const std::vector<int>& seed_sizes() const { return seed_sizes_; }
  const std::vector<int>& ambiguous_sizes() const { return ambiguous_sizes_; }
  const Eigen::MatrixXd& lambda() const { return lambda_; }

  int seed_count() const { return seed_count_; }
  int ambiguous_count() const { return ambiguous_count_; }
  int vertex_count() const { return seed_count_ + ambiguous_count_; }
  int block_size(int k) const {
    return seed_sizes_[k] + ambiguous_sizes_[k];
  }

  // Same sizes, probabilities clamped into [eps, 1 - eps].
  BlockModel clamped(double eps = kDefaultEpsilon) const;

 private:
  std::vector<int> seed_sizes_;
  std::vector<int> ambiguous_sizes_;
  Eigen::MatrixXd lambda_;
  int seed_count_ = 0;
  int ambiguous_count_ = 0;
};

// Simple undirected graph on m + n vertices with labels on the seeds and,
// for evaluation only, on the ambiguous vertices.
class LabeledGraph {
 public:
  // adjacency is a dense row-major num_vertices x num_vertices 0/1 matrix;
  // it must be symmetric with a zero diagonal. original_ids, when given,
  // maps each internal vertex to its 1-based id in the source data.
  LabeledGraph(int num_vertices, int seed_count,
               std::vector<std::uint8_t> adjacency,
               std::vector<int> seed_labels,
               std::optional<std::vector<int>> true_labels = std::nullopt,
               std::vector<std::int64_t> original_ids = {});

  // Builds from 0-based edge pairs; duplicates collapse, self-loops throw.
  static LabeledGraph from_edges(
      int num_vertices, int seed_count,
      std::span<const std::pair<int, int>> edges, std::vector<int> seed_labels,
      std::optional<std::vector<int>> true_labels = std::nullopt);

  int vertex_count() const { return num_vertices_; }
  int seed_count() const { return seed_count_; }
  int ambiguous_count() const { return num_vertices_ - seed_count_; }

  bool adjacent(int i, int j) const {
    return adjacency_[static_cast<std::size_t>(i) * num_vertices_ + j] != 0;
  }
  const std::uint8_t* adjacency_row(int i) const {
    return adjacency_.data() + static_cast<std::size_t>(i) * num_vertices_;
  }
  std::span<const std::uint8_t> adjacency() const { return adjacency_; }
  Eigen::MatrixXd adjacency_matrix() const;
  std::int64_t edge_count() const;

  const std::vector<int>& seed_labels() const { return seed_labels_; }
  bool has_truth() const { return true_labels_.has_value(); }
  // Hidden label of ambiguous vertex v (v in [m, m + n)).
  int true_label(int v) const;
  const std::vector<int>& true_labels() const;

  // Block label of every vertex: seeds from seed_labels, ambiguous vertices
  // from the hidden truth. Requires has_truth().
  std::vector<int> full_labels() const;

  // External (1-based) id of internal vertex i.
  std::int64_t original_id(int i) const {
    return original_ids_.empty() ? i + 1 : original_ids_[i];
  }

 private:
  int num_vertices_ = 0;
  int seed_count_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<int> seed_labels_;
  std::optional<std::vector<int>> true_labels_;
  std::vector<std::int64_t> original_ids_;
};

// A candidate block-membership function over all vertices.
struct BlockAssignment {
  std::vector<int> labels;

  bool operator==(const BlockAssignment&) const = default;
};

// Throws std::invalid_argument unless `assignment` agrees with the graph's
// seed labels and places exactly n_k ambiguous vertices in block k.
void check_assignment(const LabeledGraph& graph,
                      const BlockAssignment& assignment,
                      const BlockModel& model);

// Seeds labelled by model.seed_sizes, ambiguous vertices contiguous by
// model.ambiguous_sizes.
BlockAssignment contiguous_assignment(const BlockModel& model);

// Edge and non-edge counts per block pair. Stored as full symmetric K x K
// matrices; entry (k, l) with k <= l is the canonical one.
struct EdgeCounts {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> edges;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> nonedges;
};

EdgeCounts edge_counts(const LabeledGraph& graph,
                       const BlockAssignment& assignment, int num_blocks);

// log p(assignment, G) under the model's Lambda. Lambda must lie strictly
// inside (0, 1); see BlockModel::clamped.
double log_likelihood(const LabeledGraph& graph,
                      const BlockAssignment& assignment,
                      const BlockModel& model);

// Realizes one graph. Seeds take their labels from membership on [0, m);
// ambiguous labels become the hidden truth.
LabeledGraph sample_sbm(const BlockModel& model,
                        const BlockAssignment& membership,
                        std::uint64_t rng_seed);

enum class LambdaSource { kSeeds, kAllLabels };

// Block densities of the seed-induced subgraph (or of the whole labelled
// graph for kAllLabels), clamped into [eps, 1 - eps].
Eigen::MatrixXd estimate_lambda(const LabeledGraph& graph, int num_blocks,
                                LambdaSource source = LambdaSource::kSeeds,
                                double eps = kDefaultEpsilon);

// theta * base + (1 - theta) * 1/2.
Eigen::MatrixXd mix_lambda(const Eigen::MatrixXd& base, double theta);

Eigen::MatrixXd clamp_lambda(const Eigen::MatrixXd& lambda,
                             double eps = kDefaultEpsilon);

// Number of singular values above 1e-8 times the largest.
int numerical_rank(const Eigen::MatrixXd& matrix);

// Graph over an external vertex universe with optional labels, from which
// seeded instances are carved by choosing seed and ambiguous subsets.
struct GraphData {
  int vertex_count = 0;
  std::vector<std::uint8_t> adjacency;  // row-major, 0-based
  std::vector<int> labels;              // 0-based block or -1 when unknown

  bool adjacent(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i) * vertex_count + j] != 0;
  }
};

// Induced subgraph on seeds followed by ambiguous vertices (indices into
// data). Seed labels come from data.labels; the ambiguous vertices carry
// their labels as hidden truth when with_truth is set.
LabeledGraph induce_labeled_graph(const GraphData& data,
                                  std::span<const int> seeds,
                                  std::span<const int> ambiguous,
                                  bool with_truth);

}  // namespace vn
