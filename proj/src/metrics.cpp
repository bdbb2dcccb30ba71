#include "vn/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace vn {

void check_nomination_list(const NominationList& list,
                           const LabeledGraph& graph) {
  const int m = graph.seed_count();
  const int n = graph.ambiguous_count();
  if (static_cast<int>(list.order.size()) != n) {
    throw std::invalid_argument("nomination list must hold every ambiguous "
                                "vertex exactly once");
  }
  std::vector<bool> seen(n, false);
  for (int v : list.order) {
    if (v < m || v >= m + n || seen[v - m]) {
      throw std::invalid_argument("nomination list is not a permutation of "
                                  "the ambiguous vertices");
    }
    seen[v - m] = true;
  }
}

std::vector<std::uint8_t> relevance(const NominationList& list,
                                    const LabeledGraph& graph) {
  std::vector<std::uint8_t> out;
  out.reserve(list.order.size());
  for (int v : list.order) out.push_back(graph.true_label(v) == 0 ? 1 : 0);
  return out;
}

double precision_at_depth(std::span<const std::uint8_t> relevant, int depth) {
  if (depth < 1 || depth > static_cast<int>(relevant.size())) {
    throw std::invalid_argument("depth must lie in 1..n");
  }
  int hits = 0;
  for (int i = 0; i < depth; ++i) hits += relevant[i] ? 1 : 0;
  return static_cast<double>(hits) / depth;
}

double average_precision(std::span<const std::uint8_t> relevant, int n1) {
  if (n1 < 1 || n1 > static_cast<int>(relevant.size())) {
    throw std::invalid_argument("n1 must lie in 1..n");
  }
  double total = 0.0;
  int hits = 0;
  for (int j = 1; j <= n1; ++j) {
    hits += relevant[j - 1] ? 1 : 0;
    total += static_cast<double>(hits) / j;
  }
  return total / n1;
}

std::vector<double> alpha_weights(int n, int n1) {
  if (n1 < 1 || n1 > n) throw std::invalid_argument("need 1 <= n1 <= n");
  std::vector<double> alpha(n, 0.0);
  double tail = 0.0;
  for (int i = n1; i >= 1; --i) {
    tail += 1.0 / i;
    alpha[i - 1] = tail / n1;
  }
  return alpha;
}

MeanEstimate mean_average_precision(std::span<const double> aps) {
  if (aps.empty()) throw std::invalid_argument("no average precisions given");
  MeanEstimate out;
  for (double x : aps) out.mean += x;
  out.mean /= static_cast<double>(aps.size());
  if (aps.size() > 1) {
    double ss = 0.0;
    for (double x : aps) ss += (x - out.mean) * (x - out.mean);
    const double n = static_cast<double>(aps.size());
    out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace vn
