#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vn/graph.hpp"

namespace vn {

// Ordering of the ambiguous vertices (internal 0-based indices), most
// likely block-of-interest member first.
struct NominationList {
  std::vector<int> order;

  bool operator==(const NominationList&) const = default;
};

// Throws std::invalid_argument unless the list is a permutation of the
// graph's ambiguous vertices.
void check_nomination_list(const NominationList& list,
                           const LabeledGraph& graph);

// 1 where the nominee at that position is truly in block 1, else 0.
std::vector<std::uint8_t> relevance(const NominationList& list,
                                    const LabeledGraph& graph);

// Fraction of the first `depth` nominees that are relevant.
double precision_at_depth(std::span<const std::uint8_t> relevant, int depth);

// Mean of precision at depths 1..n1. This is the plain average used in the
// nomination literature, not the IR variant that averages only at hits.
double average_precision(std::span<const std::uint8_t> relevant, int n1);

// alpha_i = (1/n1) * sum_{j=i}^{n1} 1/j for i <= n1, zero afterwards, so that
// average_precision == sum_i alpha_i * relevant_i.
std::vector<double> alpha_weights(int n, int n1);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;

  bool operator==(const MeanEstimate&) const = default;
};

// Sample mean and standard error of the mean (n - 1 denominator).
MeanEstimate mean_average_precision(std::span<const double> aps);

}  // namespace vn
