#pragma once

// Likelihood maximization nomination. Stage one estimates the block
// assignment by seeded graph matching against the log-odds matrix; stage two
// ranks vertices by geometric means of swap likelihood ratios.

#include <vector>

#include "vn/graph.hpp"
#include "vn/metrics.hpp"
#include "vn/sgm.hpp"

namespace vn {

struct LikelihoodOptions {
  SgmOptions sgm;
  double epsilon = kDefaultEpsilon;
};

BlockAssignment mle_block_assignment(const LabeledGraph& graph,
                                     const BlockModel& model,
                                     const LikelihoodOptions& options = {});

// log p(bhat with v and v_prime exchanged, G) - log p(bhat, G), evaluated from
// the pairs incident to v or v_prime. Requires bhat(v) == 0 != bhat(v_prime),
// both ambiguous. Lambda is clamped with `eps` first.
double swap_log_ratio(const LabeledGraph& graph, const BlockAssignment& bhat,
                      const BlockModel& model, int v, int v_prime,
                      double eps = kDefaultEpsilon);

struct SwapScore {
  int vertex = 0;
  bool in_block1 = false;
  // Mean log swap ratio: against every estimated non-block-1 vertex when
  // in_block1, against every estimated block-1 vertex otherwise. An empty
  // set gives 0.
  double log_geo_mean = 0.0;
};

std::vector<SwapScore> swap_scores(const LabeledGraph& graph,
                                   const BlockAssignment& bhat,
                                   const BlockModel& model,
                                   double eps = kDefaultEpsilon);

// Estimated block-1 vertices by ascending score, then the rest by
// descending score; ties by vertex id.
NominationList order_swap_scores(std::vector<SwapScore> scores);

NominationList likelihood_nominate(const LabeledGraph& graph,
                                   const BlockModel& model,
                                   const LikelihoodOptions& options = {});

}  // namespace vn
