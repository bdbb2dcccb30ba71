#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "vn/canonical.hpp"
#include "vn/error.hpp"
#include "vn/test_support.hpp"

namespace {

// Random instance with generic Lambda so that exact ties have probability 0.
struct Instance {
  vn::LabeledGraph graph;
  vn::BlockModel model;
};

Instance random_instance(vn::Rng& rng, int max_ambiguous, int max_blocks,
                         int min_blocks = 1) {
  const int k =
      min_blocks + static_cast<int>(rng.below(max_blocks - min_blocks + 1));
  const int n = 1 + static_cast<int>(rng.below(max_ambiguous));
  std::vector<int> sizes(k, 0);
  sizes[0] = 1;
  for (int i = 1; i < n; ++i) ++sizes[rng.below(k)];
  std::vector<int> seed_sizes(k, 0);
  std::vector<int> seed_labels;
  const int m = static_cast<int>(rng.below(4));
  for (int i = 0; i < m; ++i) {
    const int l = static_cast<int>(rng.below(k));
    ++seed_sizes[l];
    seed_labels.push_back(l);
  }
  std::sort(seed_labels.begin(), seed_labels.end());
  Eigen::MatrixXd lambda(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) lambda(a, b) = lambda(b, a) = 0.05 + 0.9 * rng.uniform();
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m + n; ++i) {
    for (int j = i + 1; j < m + n; ++j) {
      if (rng.uniform() < 0.5) edges.emplace_back(i, j);
    }
  }
  return {vn::LabeledGraph::from_edges(m + n, m, edges, seed_labels),
          vn::BlockModel(seed_sizes, sizes, lambda)};
}

}  // namespace

TEST_CASE("partition counts and enumeration order") {
  CHECK(vn::count_partitions(std::vector<int>{1, 1}) == 2.0);
  CHECK(vn::count_partitions(std::vector<int>{4, 3, 3}) == 4200.0);
  CHECK(vn::count_partitions(std::vector<int>{2, 0}) == 1.0);

  const std::vector<int> sizes{2, 1, 1};
  vn::PartitionEnumerator e(sizes);
  std::vector<std::vector<int>> seen;
  do {
    seen.push_back(e.labels());
  } while (e.advance());
  CHECK(seen.size() == 12);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(std::set<std::vector<int>>(seen.begin(), seen.end()).size() == 12);
  CHECK(seen == vn::test::all_labellings(sizes));
}

TEST_CASE("partition guard raises an infeasibility error") {
  const std::vector<int> big{400, 300, 300};
  CHECK_THROWS_WITH_AS(vn::PartitionEnumerator{big},
                       doctest::Contains("likelihood"), vn::InfeasibleError);
  const std::vector<int> sizes{4, 3, 3};
  CHECK_THROWS_AS(vn::PartitionEnumerator(sizes, 100.0), vn::InfeasibleError);
}

TEST_CASE("symmetric two-vertex instance gives one half each") {
  for (bool edge : {false, true}) {
    std::vector<std::pair<int, int>> e;
    if (edge) e.emplace_back(0, 1);
    const vn::LabeledGraph g = vn::LabeledGraph::from_edges(2, 0, e, {});
    Eigen::MatrixXd l(2, 2);
    l << 0.7, 0.2, 0.2, 0.4;
    const auto s = vn::conditional_block1_probability(
        g, vn::BlockModel({0, 0}, {1, 1}, l));
    CHECK(s.prob[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.prob[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("one seed, two ambiguous vertices, single edge") {
  const std::vector<std::pair<int, int>> e{{0, 1}};
  const vn::LabeledGraph g = vn::LabeledGraph::from_edges(3, 1, e, {0});
  Eigen::MatrixXd l(2, 2);
  l << 0.8, 0.2, 0.2, 0.5;
  const vn::BlockModel model({1, 0}, {1, 1}, l);
  const auto s = vn::conditional_block1_probability(g, model);
  CHECK(std::abs(s.prob[0] - 0.512 / 0.544) < 1e-12);
  CHECK(std::abs(s.prob[1] - 0.032 / 0.544) < 1e-12);
  CHECK(std::abs(s.log_denominator - std::log(0.544)) < 1e-12);
  CHECK(vn::canonical_nominate(g, model).order == std::vector<int>{1, 2});
}

TEST_CASE("matches the direct enumeration oracle (random, n <= 4, K <= 3)") {
  vn::Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    const Instance in = random_instance(rng, 4, 3);
    const auto s = vn::conditional_block1_probability(in.graph, in.model);
    const auto oracle = vn::test::oracle_block1_probability(
        in.graph, in.model.ambiguous_sizes(), in.model.lambda());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(std::abs(s.prob[i] - oracle[i]) < 1e-12);
    }
  }
}

TEST_CASE("probabilities sum to n1 (random, n <= 10)") {
  vn::Rng rng(202);
  for (int t = 0; t < 60; ++t) {
    const Instance in = random_instance(rng, 10, 3);
    const auto s = vn::conditional_block1_probability(in.graph, in.model);
    const double sum = std::accumulate(s.prob.begin(), s.prob.end(), 0.0);
    CHECK(std::abs(sum - in.model.ambiguous_sizes()[0]) < 1e-9);
    for (double p : s.prob) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("nomination is equivariant under relabelling the ambiguous vertices") {
  vn::Rng rng(303);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    // One block would make every probability 1.
    const Instance in = random_instance(rng, 7, 3, 2);
    const vn::LabeledGraph& g = in.graph;
    const int m = g.seed_count();
    const int total = g.vertex_count();
    std::vector<int> sigma(total);
    std::iota(sigma.begin(), sigma.end(), 0);
    rng.shuffle(std::span<int>(sigma).subspan(m));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < total; ++i) {
      for (int j = i + 1; j < total; ++j) {
        if (g.adjacent(i, j)) edges.emplace_back(sigma[i], sigma[j]);
      }
    }
    const vn::LabeledGraph h =
        vn::LabeledGraph::from_edges(total, m, edges, g.seed_labels());
    // Automorphic vertices tie exactly, so lists are compared only when the
    // probabilities are well separated.
    const auto pg = vn::conditional_block1_probability(g, in.model).prob;
    const auto ph = vn::conditional_block1_probability(h, in.model).prob;
    for (int v = m; v < total; ++v) {
      CHECK(std::abs(ph[sigma[v] - m] - pg[v - m]) < 1e-12);
    }
    std::vector<double> sorted = pg;
    std::sort(sorted.begin(), sorted.end());
    bool separated = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      separated = separated && sorted[i] - sorted[i - 1] > 1e-9;
    }
    if (!separated) continue;
    ++compared;
    const auto lg = vn::canonical_nominate(g, in.model).order;
    const auto lh = vn::canonical_nominate(h, in.model).order;
    for (std::size_t i = 0; i < lg.size(); ++i) CHECK(lh[i] == sigma[lg[i]]);
  }
  CHECK(compared >= 10);
}

TEST_CASE("exact ties keep ascending vertex order") {
  const vn::LabeledGraph g = vn::LabeledGraph::from_edges(5, 0, {}, {});
  const vn::BlockModel model({0, 0}, {2, 3}, Eigen::MatrixXd::Constant(2, 2, 0.3));
  CHECK(vn::canonical_nominate(g, model).order == std::vector<int>{0, 1, 2, 3, 4});
  const std::vector<double> scores{0.2, 0.7, 0.2, 0.7};
  CHECK(vn::order_by_descending_score(3, scores).order ==
        std::vector<int>{4, 6, 3, 5});
}
