#pragma once

// Exact canonical nomination: posterior block-1 probability of every
// ambiguous vertex by enumerating all size-respecting partitions.

#include <cstdint>
#include <span>
#include <vector>

#include "vn/graph.hpp"
#include "vn/metrics.hpp"

namespace vn {

inline constexpr double kDefaultPartitionGuard = 1e8;

// Multinomial n! / (n_1! ... n_K!) as a double (exact below 2^53).
double count_partitions(std::span<const int> sizes);

// Walks every labelling of n items with exactly sizes[k] items labelled k,
// in lexicographic order of the label vector.
class PartitionEnumerator {
 public:
  // Throws InfeasibleError when the count exceeds guard.
  explicit PartitionEnumerator(std::span<const int> sizes,
                               double guard = kDefaultPartitionGuard);

  const std::vector<int>& labels() const { return labels_; }
  // Moves to the next labelling; false once all have been visited.
  bool advance();
  std::uint64_t count() const { return count_; }

 private:
  std::vector<int> labels_;
  std::uint64_t count_ = 0;
};

struct CanonicalOptions {
  double partition_guard = kDefaultPartitionGuard;
  double epsilon = kDefaultEpsilon;
};

struct CanonicalScores {
  // prob[i] is for ambiguous vertex m + i.
  std::vector<double> prob;
  // log of the sum of p(b, G) over every partition.
  double log_denominator = 0.0;
};

CanonicalScores conditional_block1_probability(
    const LabeledGraph& graph, const BlockModel& model,
    const CanonicalOptions& options = {});

// Decreasing probability; exact ties by ascending vertex id.
NominationList canonical_nominate(const LabeledGraph& graph,
                                  const BlockModel& model,
                                  const CanonicalOptions& options = {});

// Ambiguous vertices ordered by score (descending), ties by vertex id.
NominationList order_by_descending_score(int seed_count,
                                         std::span<const double> scores);

}  // namespace vn
