#include <doctest.h>

#include <cmath>
#include <numeric>

#include "vn/lap.hpp"
#include "vn/sgm.hpp"
#include "vn/test_support.hpp"

namespace {

Eigen::MatrixXd random_matrix(int n, vn::Rng& rng, bool symmetric) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform() * 2.0 - 1.0;
  }
  if (symmetric) a = (a + a.transpose()).eval();
  return a;
}

Eigen::MatrixXd random_doubly_stochastic(int n, vn::Rng& rng) {
  // Convex combination of random permutation matrices.
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  for (int t = 0; t < 4; ++t) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    rng.shuffle(std::span<int>(p));
    const double w = rng.uniform() + 0.1;
    total += w;
    for (int i = 0; i < n; ++i) q(i, p[i]) += w;
  }
  return q / total;
}

}  // namespace

TEST_CASE("log-odds entries") {
  Eigen::MatrixXd l(2, 2);
  l << 0.5, 0.8, 0.8, 1.0;
  const vn::BlockModel model({1, 1}, {1, 1}, l);
  const auto b = vn::build_logodds_matrix(model, std::vector<int>{0, 1});
  CHECK(b.reference.labels == std::vector<int>{0, 1, 0, 1});
  CHECK(b.entries(0, 2) == doctest::Approx(0.0));
  CHECK(b.entries(0, 1) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(b.entries(1, 3) == doctest::Approx(13.815509).epsilon(1e-7));
  CHECK(b.entries.isApprox(b.entries.transpose(), 0.0));
}

TEST_CASE("reference assignment puts ambiguous blocks contiguously") {
  const vn::BlockModel model({2, 0, 1}, {1, 2, 2}, vn::test::base_lambda());
  const auto b = vn::build_logodds_matrix(model, std::vector<int>{0, 2, 0});
  CHECK(b.reference.labels == std::vector<int>{0, 2, 0, 0, 1, 1, 2, 2});
}

TEST_CASE("gradient matches central finite differences") {
  vn::Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const int total = 8;
    const int m = 1 + static_cast<int>(rng.below(3));
    const int n = total - m;
    const bool symmetric = t % 2 == 0;
    const Eigen::MatrixXd a = random_matrix(total, rng, symmetric);
    const Eigen::MatrixXd b = random_matrix(total, rng, symmetric);
    const Eigen::MatrixXd q = random_doubly_stochastic(n, rng);
    const Eigen::MatrixXd g = vn::relaxed_gradient(a, b, m, q);
    const double h = 1e-5;
    Eigen::MatrixXd fd(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd qp = q, qm = q;
        qp(i, j) += h;
        qm(i, j) -= h;
        fd(i, j) = (vn::relaxed_objective(a, b, m, qp) -
                    vn::relaxed_objective(a, b, m, qm)) / (2 * h);
      }
    }
    CHECK((g - fd).norm() / fd.norm() < 1e-4);
  }
}

TEST_CASE("relaxed objective agrees with the matching objective at permutations") {
  vn::Rng rng(2);
  const int m = 2, n = 5;
  const Eigen::MatrixXd a = random_matrix(m + n, rng, true);
  const Eigen::MatrixXd b = random_matrix(m + n, rng, true);
  std::vector<int> perm(m + n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<int>(perm).subspan(m));
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) q(i, perm[m + i] - m) = 1.0;
  CHECK(vn::relaxed_objective(a, b, m, q) ==
        doctest::Approx(vn::matching_objective(a, b, perm)).epsilon(1e-12));
}

TEST_CASE("Frank-Wolfe iterates stay doubly stochastic and the trace is monotone") {
  vn::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const vn::BlockModel model = vn::test::small_scale_model();
    const vn::LabeledGraph g = vn::sample_sbm(model, vn::contiguous_assignment(model),
                                              rng.next());
    const auto b = vn::build_logodds_matrix(model.clamped(), g.seed_labels());
    vn::SgmOptions opts;
    int calls = 0;
    opts.on_iterate = [&](const Eigen::MatrixXd& q) {
      ++calls;
      CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
      CHECK((q.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
      CHECK(q.minCoeff() >= -1e-12);
    };
    const auto r = vn::sgm_match(g.adjacency_matrix(), b.entries, g.seed_count(), opts);
    CHECK(calls >= 1);
    for (std::size_t i = 1; i < r.relaxed_trace.size(); ++i) {
      CHECK(r.relaxed_trace[i] >= r.relaxed_trace[i - 1]);
    }
    CHECK(r.iterations <= 20);
  }
}

TEST_CASE("self-match returns the identity") {
  vn::Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const int total = 9, m = 3;
    const Eigen::MatrixXd a = random_matrix(total, rng, false);
    const auto r = vn::sgm_match(a, a, m);
    std::vector<int> id(total);
    std::iota(id.begin(), id.end(), 0);
    CHECK(r.permutation == id);
    CHECK(r.objective == doctest::Approx(a.cwiseProduct(a).sum()).epsilon(1e-12));
  }
}

TEST_CASE("single ambiguous vertex and dimension checks") {
  vn::Rng rng(5);
  const Eigen::MatrixXd a = random_matrix(4, rng, true);
  const Eigen::MatrixXd b = random_matrix(4, rng, true);
  CHECK(vn::sgm_match(a, b, 3).permutation == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS_AS(vn::sgm_match(a, random_matrix(5, rng, true), 3),
                  std::invalid_argument);
}

TEST_CASE("projection is never worse than the flat start's projection") {
  vn::Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const int m = 2, n = 6;
    const Eigen::MatrixXd a = random_matrix(m + n, rng, true);
    const Eigen::MatrixXd b = random_matrix(m + n, rng, true);
    const auto r = vn::sgm_match(a, b, m);
    const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const auto p0 = vn::solve_lap(flat, vn::LapSense::kMaximize);
    std::vector<int> perm(m + n);
    std::iota(perm.begin(), perm.begin() + m, 0);
    for (int i = 0; i < n; ++i) perm[m + i] = m + p0.column_of_row[i];
    CHECK(r.objective >= vn::matching_objective(a, b, perm) - 1e-12);
  }
}
