#include "vn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vn/rng.hpp"

namespace vn {

namespace {

// Indices of the d entries of largest modulus; ties prefer the larger value.
std::vector<int> top_by_modulus(const Eigen::VectorXd& values, int d) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return values(a) > values(b);
  });
  idx.resize(d);
  return idx;
}

Embedding scale_eigenpairs(const EigenPairs& pairs) {
  Embedding out;
  out.eigenvalues = pairs.values;
  out.coords = pairs.vectors;
  for (Eigen::Index j = 0; j < out.coords.cols(); ++j) {
    auto col = out.coords.col(j);
    const double norm = col.norm();
    if (norm > 0.0) col /= norm;
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > best) {
        best = std::abs(col(i));
        arg = i;
      }
    }
    if (col(arg) < 0.0) col = -col;
    col *= std::sqrt(std::abs(out.eigenvalues(j)));
  }
  return out;
}

EigenPairs dense_largest_modulus(const Eigen::MatrixXd& symmetric, int d) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigendecomposition failed");
  }
  const std::vector<int> idx = top_by_modulus(solver.eigenvalues(), d);
  EigenPairs out;
  out.values.resize(d);
  out.vectors.resize(symmetric.rows(), d);
  for (int j = 0; j < d; ++j) {
    out.values(j) = solver.eigenvalues()(idx[j]);
    out.vectors.col(j) = solver.eigenvectors().col(idx[j]);
  }
  return out;
}

void check_dimension(int n, int d) {
  if (d < 1 || d > n) {
    throw std::invalid_argument("embedding dimension must lie in 1..m+n");
  }
}

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index i,
                        const Eigen::MatrixXd& centroids, Eigen::Index c) {
  return (points.row(i) - centroids.row(c)).squaredNorm();
}

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double objective = 0.0;
  std::vector<double> trace;
};

Eigen::MatrixXd plus_plus_seeding(const Eigen::MatrixXd& points, int k,
                                  Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(n)));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points, i, centroids, c - 1));
      total += nearest[i];
    }
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= nearest[i];
        if (target < 0.0 && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(n));
    }
    centroids.row(c) = points.row(pick);
  }
  return centroids;
}

LloydRun lloyd(const Eigen::MatrixXd& points, int k, int max_iter,
               Eigen::MatrixXd centroids) {
  const Eigen::Index n = points.rows();
  LloydRun run;
  run.labels.assign(n, -1);
  std::vector<double> dist(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double dd = squared_distance(points, i, centroids, c);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (run.labels[i] != best) changed = true;
      run.labels[i] = best;
      dist[i] = best_d;
    }
    std::vector<int> counts(k, 0);
    for (int label : run.labels) ++counts[label];
    // Repair empty clusters at the currently worst-served point.
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[run.labels[i]] > 1 && (far < 0 || dist[i] > dist[far])) {
          far = i;
        }
      }
      if (far < 0) break;
      --counts[run.labels[far]];
      run.labels[far] = c;
      ++counts[c];
      dist[far] = 0.0;
      centroids.row(c) = points.row(far);
      changed = true;
    }
    run.trace.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) sums.row(run.labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids.row(c) = sums.row(c) / counts[c];
    }
    if (!changed && iter > 0) break;
  }
  run.objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.objective += squared_distance(points, i, centroids, run.labels[i]);
  }
  if (run.trace.empty() || run.objective < run.trace.back()) {
    run.trace.push_back(run.objective);
  }
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

EigenPairs lanczos_largest_modulus(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>&
        multiply,
    int n, int d, double tol) {
  check_dimension(n, d);
  Rng rng(0x5EEDULL);
  auto random_unit = [&](const Eigen::MatrixXd& basis, Eigen::Index used) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.uniform() - 0.5;
    for (int pass = 0; pass < 2 && used > 0; ++pass) {
      v -= basis.leftCols(used) * (basis.leftCols(used).transpose() * v);
    }
    return Eigen::VectorXd(v / v.norm());
  };

  int capacity = std::min(n, std::max(4 * d + 40, 80));
  Eigen::MatrixXd basis(n, capacity);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis j and j + 1
  basis.col(0) = random_unit(basis, 0);
  Eigen::VectorXd w(n);
  int steps = 0;
  EigenPairs out;
  while (true) {
    for (; steps < capacity; ++steps) {
      multiply(basis.col(steps), w);
      const double a = basis.col(steps).dot(w);
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(steps + 1) *
             (basis.leftCols(steps + 1).transpose() * w);
      }
      if (steps + 1 == n) {
        beta.push_back(0.0);
        ++steps;
        break;
      }
      const double b = w.norm();
      if (steps + 1 < capacity) {
        if (b > 1e-10 * std::max(1.0, std::abs(a))) {
          basis.col(steps + 1) = w / b;
          beta.push_back(b);
        } else {
          // Invariant subspace: continue from a fresh orthogonal direction.
          basis.col(steps + 1) = random_unit(basis, steps + 1);
          beta.push_back(0.0);
        }
      } else {
        if (b > 1e-10 * std::max(1.0, std::abs(a))) {
          w /= b;
          beta.push_back(b);
        } else {
          w = random_unit(basis, steps + 1);
          beta.push_back(0.0);
        }
      }
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
    const std::vector<int> idx = top_by_modulus(ritz.eigenvalues(),
                                                std::min(d, steps));
    const double scale = std::abs(ritz.eigenvalues()(idx[0]));
    const double residual_weight = beta[steps - 1];
    bool converged = static_cast<int>(idx.size()) == d;
    for (int j : idx) {
      const double residual =
          std::abs(residual_weight * ritz.eigenvectors()(steps - 1, j));
      if (residual > tol * std::max(scale, 1e-300)) converged = false;
    }
    if (converged || steps >= n) {
      out.values.resize(d);
      out.vectors.resize(n, d);
      for (int j = 0; j < d; ++j) {
        out.values(j) = ritz.eigenvalues()(idx[j]);
        out.vectors.col(j) =
            basis.leftCols(steps) * ritz.eigenvectors().col(idx[j]);
      }
      return out;
    }
    const int grown = std::min(n, capacity + std::max(capacity / 2, 40));
    basis.conservativeResize(Eigen::NoChange, grown);
    basis.col(steps) = w;  // already normalized by the last beta
    capacity = grown;
  }
}

Embedding embed_matrix(const Eigen::MatrixXd& symmetric, int d) {
  check_dimension(static_cast<int>(symmetric.rows()), d);
  return scale_eigenpairs(dense_largest_modulus(symmetric, d));
}

Embedding embed(const LabeledGraph& graph, int d) {
  const int n = graph.vertex_count();
  check_dimension(n, d);
  if (n <= kDenseEigenLimit) return embed_matrix(graph.adjacency_matrix(), d);
  auto multiply = [&graph, n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(n);
    const double* xs = x.data();
    for (int i = 0; i < n; ++i) {
      const std::uint8_t* row = graph.adjacency_row(i);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += static_cast<double>(row[j]) * xs[j];
      y(i) = s;
    }
  };
  return scale_eigenpairs(lanczos_largest_modulus(multiply, n, d));
}

Clustering kmeans(const Eigen::MatrixXd& points, int k,
                  const KMeansOptions& options, std::uint64_t rng_seed) {
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("k-means needs 1 <= K <= number of points");
  }
  LloydRun best;
  bool have = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Rng rng(derive_seed(rng_seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(points, k, options.max_iter,
                         plus_plus_seeding(points, k, rng));
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }
  // Canonical cluster order: centroids sorted lexicographically.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index j = 0; j < best.centroids.cols(); ++j) {
      if (best.centroids(a, j) != best.centroids(b, j)) {
        return best.centroids(a, j) < best.centroids(b, j);
      }
    }
    return false;
  });
  std::vector<int> rank(k);
  for (int i = 0; i < k; ++i) rank[order[i]] = i;
  Clustering out;
  out.centroids.resize(k, points.cols());
  for (int i = 0; i < k; ++i) out.centroids.row(i) = best.centroids.row(order[i]);
  out.labels.reserve(best.labels.size());
  for (int label : best.labels) out.labels.push_back(rank[label]);
  out.objective = best.objective;
  out.objective_trace = std::move(best.trace);
  return out;
}

SpectralResult spectral_scheme(const LabeledGraph& graph, int num_blocks,
                               const SpectralOptions& options) {
  const int m = graph.seed_count();
  int block1_seeds = 0;
  for (int label : graph.seed_labels()) block1_seeds += label == 0 ? 1 : 0;
  if (block1_seeds == 0) {
    throw std::invalid_argument("spectral scheme needs at least one block-1 seed");
  }
  SpectralResult out;
  out.embedding = embed(graph, options.dimension);
  out.clustering =
      kmeans(out.embedding.coords, num_blocks, options.kmeans, options.seed);

  std::vector<int> votes(num_blocks, 0);
  for (int u = 0; u < m; ++u) {
    if (graph.seed_labels()[u] == 0) ++votes[out.clustering.labels[u]];
  }
  out.chosen_cluster = static_cast<int>(
      std::max_element(votes.begin(), votes.end()) - votes.begin());

  const auto centroid = out.clustering.centroids.row(out.chosen_cluster);
  std::vector<double> distance(graph.ambiguous_count());
  for (int i = 0; i < graph.ambiguous_count(); ++i) {
    distance[i] = (out.embedding.coords.row(m + i) - centroid).norm();
  }
  out.list.order.resize(distance.size());
  std::iota(out.list.order.begin(), out.list.order.end(), m);
  std::stable_sort(out.list.order.begin(), out.list.order.end(),
                   [&](int a, int b) { return distance[a - m] < distance[b - m]; });
  return out;
}

NominationList spectral_nominate(const LabeledGraph& graph, int num_blocks,
                                 const SpectralOptions& options) {
  return spectral_scheme(graph, num_blocks, options).list;
}

}  // namespace vn
