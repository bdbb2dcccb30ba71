#pragma once

// Spectral partitioning nomination: scaled adjacency spectral embedding,
// k-means on the rows, then distance to the centroid holding the most
// block-1 seeds.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "vn/graph.hpp"
#include "vn/metrics.hpp"

namespace vn {

// Graphs up to this many vertices use a dense eigendecomposition; larger
// ones use Lanczos iteration for the leading eigenpairs only.
inline constexpr int kDenseEigenLimit = 2000;

struct Embedding {
  // Column j is the eigenvector of eigenvalues(j) scaled to length
  // sqrt(|eigenvalues(j)|), with its largest-magnitude entry positive.
  Eigen::MatrixXd coords;
  // The d eigenvalues of largest modulus, in decreasing modulus.
  Eigen::VectorXd eigenvalues;
};

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// d eigenpairs of largest modulus of a symmetric operator of size n, by
// Lanczos with full reorthogonalization.
EigenPairs lanczos_largest_modulus(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>&
        multiply,
    int n, int d, double tol = 1e-9);

Embedding embed(const LabeledGraph& graph, int d);
// Dense path for an arbitrary symmetric matrix.
Embedding embed_matrix(const Eigen::MatrixXd& symmetric, int d);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

struct Clustering {
  std::vector<int> labels;      // 0-based cluster per point
  Eigen::MatrixXd centroids;    // K x d, rows in lexicographic order
  double objective = 0.0;       // sum of squared distances to centroids
  std::vector<double> objective_trace;  // per Lloyd iteration, best restart
};

// Best of `restarts` runs of Lloyd's algorithm with k-means++ seeding. An
// empty cluster is re-seeded at the point farthest from its centroid.
Clustering kmeans(const Eigen::MatrixXd& points, int k,
                  const KMeansOptions& options, std::uint64_t rng_seed);

struct SpectralOptions {
  int dimension = 1;
  KMeansOptions kmeans;
  std::uint64_t seed = 0;
};

struct SpectralResult {
  Embedding embedding;
  Clustering clustering;
  int chosen_cluster = 0;
  NominationList list;
};

SpectralResult spectral_scheme(const LabeledGraph& graph, int num_blocks,
                               const SpectralOptions& options);

NominationList spectral_nominate(const LabeledGraph& graph, int num_blocks,
                                 const SpectralOptions& options);

}  // namespace vn
