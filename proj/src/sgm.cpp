#include "vn/sgm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vn/lap.hpp"
#include "vn/rng.hpp"

namespace vn {

namespace {

// Block views of A and B for P = diag(I_m, Q):
//   f(Q) = <A11, B11> + <L, Q> + <A22, Q B22 Q^T>,
//   L    = A12^T B12 + A21 B21^T.
class SeededProblem {
 public:
  SeededProblem(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int m)
      : m_(m), n_(static_cast<int>(a.rows()) - m) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
      throw std::invalid_argument("A and B must be square and the same size");
    }
    if (m < 0 || n_ < 1) {
      throw std::invalid_argument("seed count must leave ambiguous vertices");
    }
    const auto a12 = a.topRightCorner(m, n_);
    const auto a21 = a.bottomLeftCorner(n_, m);
    const auto b12 = b.topRightCorner(m, n_);
    const auto b21 = b.bottomLeftCorner(n_, m);
    a22_ = a.bottomRightCorner(n_, n_);
    b22_ = b.bottomRightCorner(n_, n_);
    constant_ = (a.topLeftCorner(m, m).array() * b.topLeftCorner(m, m).array())
                    .sum();
    linear_ = a12.transpose() * b12 + a21 * b21.transpose();
    symmetric_ = a22_.isApprox(a22_.transpose(), 0.0) &&
                 b22_.isApprox(b22_.transpose(), 0.0);
  }

  int n() const { return n_; }

  double objective(const Eigen::MatrixXd& q) const {
    return constant_ + (linear_.array() * q.array()).sum() + quadratic(q);
  }

  // <A22, D B22 D^T>
  double quadratic(const Eigen::MatrixXd& d) const {
    const Eigen::MatrixXd db = d * b22_;
    return (a22_.array() * (db * d.transpose()).array()).sum();
  }

  Eigen::MatrixXd gradient(const Eigen::MatrixXd& q) const {
    if (symmetric_) return linear_ + 2.0 * (a22_ * q) * b22_;
    return linear_ + (a22_ * q) * b22_.transpose() +
           (a22_.transpose() * q) * b22_;
  }

 private:
  int m_;
  int n_;
  Eigen::MatrixXd a22_;
  Eigen::MatrixXd b22_;
  Eigen::MatrixXd linear_;
  double constant_ = 0.0;
  bool symmetric_ = false;
};

Eigen::MatrixXd permutation_matrix(std::span<const int> column_of_row) {
  const auto n = static_cast<Eigen::Index>(column_of_row.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, column_of_row[i]) = 1.0;
  return p;
}

std::vector<int> full_permutation(int m, std::span<const int> column_of_row) {
  std::vector<int> perm(m + column_of_row.size());
  std::iota(perm.begin(), perm.begin() + m, 0);
  for (std::size_t i = 0; i < column_of_row.size(); ++i) {
    perm[m + i] = m + column_of_row[i];
  }
  return perm;
}

struct Candidate {
  std::vector<int> permutation;
  double objective;
  std::vector<double> trace;
  int iterations;
};

Candidate frank_wolfe(const SeededProblem& problem, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& b, int m, Eigen::MatrixXd q,
                      const SgmOptions& options) {
  Candidate out;
  double f = problem.objective(q);
  out.trace.push_back(f);
  if (options.on_iterate) options.on_iterate(q);
  int iter = 0;
  while (iter < options.max_iter) {
    ++iter;
    const Eigen::MatrixXd grad = problem.gradient(q);
    const LapSolution vertex = solve_lap(grad, LapSense::kMaximize);
    const Eigen::MatrixXd d = permutation_matrix(vertex.column_of_row) - q;
    // f(q + t d) = f + lin * t + quad * t^2 on t in [0, 1].
    const double lin = (grad.array() * d.array()).sum();
    const double quad = problem.quadratic(d);
    double step;
    if (quad < 0.0) {
      step = std::clamp(-lin / (2.0 * quad), 0.0, 1.0);
    } else {
      step = quad + lin > 0.0 ? 1.0 : 0.0;
    }
    const double gain = lin * step + quad * step * step;
    if (step > 0.0 && gain > 0.0) q += step * d;
    const double next = f + std::max(gain, 0.0);
    out.trace.push_back(next);
    if (options.on_iterate) options.on_iterate(q);
    const double change = std::abs(next - f) / std::max(1.0, std::abs(f));
    f = next;
    if (change < options.tol) break;
  }
  out.iterations = iter;
  const LapSolution projected = solve_lap(q, LapSense::kMaximize);
  out.permutation = full_permutation(m, projected.column_of_row);
  out.objective = matching_objective(a, b, out.permutation);
  return out;
}

}  // namespace

LogOddsMatrix build_logodds_matrix(const BlockModel& model,
                                   std::span<const int> seed_labels,
                                   double eps) {
  if (static_cast<int>(seed_labels.size()) != model.seed_count()) {
    throw std::invalid_argument("one seed label per model seed required");
  }
  LogOddsMatrix out;
  out.reference.labels.assign(seed_labels.begin(), seed_labels.end());
  for (int k = 0; k < model.num_blocks(); ++k) {
    out.reference.labels.insert(out.reference.labels.end(),
                                model.ambiguous_sizes()[k], k);
  }
  const Eigen::MatrixXd lambda = clamp_lambda(model.lambda(), eps);
  const Eigen::MatrixXd log_odds =
      (lambda.array() / (1.0 - lambda.array())).log().matrix();
  const int n = model.vertex_count();
  out.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.entries(i, j) =
          log_odds(out.reference.labels[i], out.reference.labels[j]);
    }
  }
  return out;
}

double matching_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          std::span<const int> perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(i, j) != 0.0) total += a(i, j) * b(perm[i], perm[j]);
    }
  }
  return total;
}

double relaxed_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         int m, const Eigen::MatrixXd& q) {
  return SeededProblem(a, b, m).objective(q);
}

Eigen::MatrixXd relaxed_gradient(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b, int m,
                                 const Eigen::MatrixXd& q) {
  return SeededProblem(a, b, m).gradient(q);
}

SgmResult sgm_match(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int m,
                    const SgmOptions& options) {
  const SeededProblem problem(a, b, m);
  const int n = problem.n();
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(n, n, 1.0 / n);

  // The projection of the starting point is a fallback so the result is
  // never worse than where the solver began.
  const LapSolution start = solve_lap(flat, LapSense::kMaximize);
  Candidate best;
  best.permutation = full_permutation(m, start.column_of_row);
  best.objective = matching_objective(a, b, best.permutation);
  best.iterations = 0;
  bool have_run = false;

  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Eigen::MatrixXd q0 = flat;
    if (r > 0) {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(std::span<int>(perm));
      q0 = permutation_matrix(perm);
    }
    Candidate c = frank_wolfe(problem, a, b, m, std::move(q0), options);
    if (!have_run) {
      if (c.objective >= best.objective) {
        best = std::move(c);
      } else {
        best.trace = std::move(c.trace);
        best.iterations = c.iterations;
      }
      have_run = true;
    } else if (c.objective > best.objective) {
      best = std::move(c);
    }
  }

  SgmResult out;
  out.permutation = std::move(best.permutation);
  out.objective = best.objective;
  out.relaxed_trace = std::move(best.trace);
  out.iterations = best.iterations;
  return out;
}

}  // namespace vn
