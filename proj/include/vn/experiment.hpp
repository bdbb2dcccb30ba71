#pragma once

// Monte-Carlo experiment runner: simulated SBM experiments, the real-data
// seed/ambiguous split protocol, and the subsample-and-average procedure.
// Replicate r draws all of its randomness from derive_seed(seed, r, stream),
// and results are folded in replicate order, so outputs do not depend on the
// number of workers.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vn/graph.hpp"
#include "vn/metrics.hpp"

namespace vn {

std::string_view version();

enum class Scheme { kCanonical, kLikelihood, kSpectral };

std::string_view scheme_name(Scheme scheme);
// Throws ConfigError for unknown names.
Scheme parse_scheme(std::string_view name);

struct SchemeParams {
  std::optional<int> dimension;  // default: numerical rank of Lambda
  int kmeans_restarts = 10;
  int max_iter = 20;
  double tol = 1e-6;
  double epsilon = kDefaultEpsilon;
  int sgm_restarts = 1;
  double partition_guard = 1e8;

  bool operator==(const SchemeParams&) const = default;
};

struct ModelSpec {
  Eigen::MatrixXd base_lambda;
  double theta = 1.0;
  std::vector<int> ambiguous_sizes;
  std::vector<int> seed_sizes;

  Eigen::MatrixXd lambda() const;
  BlockModel block_model() const;
};

struct DataSpec {
  std::string edges;
  std::string labels;
  int num_blocks = 2;
  std::vector<int> seeds_per_block;
};

struct SubsampleSpec {
  int per_class = 125;
  int seeds_per_class = 50;
};

struct ExperimentConfig {
  std::string name;
  std::optional<ModelSpec> model;
  std::optional<DataSpec> data;
  std::optional<SubsampleSpec> subsample;
  std::vector<Scheme> schemes;
  int replicates = 1;
  std::uint64_t seed = 0;
  // Shuffle the hidden ambiguous labels in each simulated replicate.
  bool randomize_membership = true;
  std::string csv_path;
  std::string json_path;
  SchemeParams params;
};

// Strict parse: unknown keys, missing required keys and invalid values throw
// ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunOptions {
  int workers = 1;
  // When set, one line per (replicate, scheme) with the AP and the 0/1
  // relevance string of the list.
  std::filesystem::path raw_log;
};

struct SchemeResult {
  Scheme scheme = Scheme::kCanonical;
  // curve[i]: fraction of replicates whose (i+1)-th nominee is in block 1.
  std::vector<double> curve;
  MeanEstimate map;
  double seconds_per_replicate = 0.0;

  bool operator==(const SchemeResult&) const = default;
};

struct ExperimentResult {
  int n = 0;
  int n1 = 0;
  double chance = 0.0;
  int replicates = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<SchemeResult> schemes;

  bool operator==(const ExperimentResult&) const = default;
  const SchemeResult& at(Scheme scheme) const;
};

// Canonical runs throw InfeasibleError when the partition count exceeds
// params.partition_guard.
ExperimentResult run_simulation(const ExperimentConfig& config,
                                const RunOptions& options = {});

ExperimentResult run_realdata(const ExperimentConfig& config,
                              const RunOptions& options = {});

struct VertexPosition {
  std::int64_t vertex = 0;  // external id
  int label = 0;            // 0-based class
  int times_selected = 0;
  double mean_position = 0.0;  // 1-based; meaningless when never selected
};

struct SubsampleResult {
  std::vector<VertexPosition> vertices;
  int replicates = 0;
};

// Folds per-replicate (0-based vertex, 1-based position) records into
// per-vertex means.
SubsampleResult accumulate_positions(
    const GraphData& data,
    const std::vector<std::vector<std::pair<int, int>>>& replicates);

// Likelihood scheme on repeated class-balanced subsamples; averages each
// vertex's 1-based nomination position over the replicates in which it was
// ambiguous.
SubsampleResult run_subsample_average(const ExperimentConfig& config,
                                      const RunOptions& options = {});
SubsampleResult run_subsample_average(const GraphData& data,
                                      const ExperimentConfig& config,
                                      const RunOptions& options = {});

// Writes the curve CSV and the JSON summary. Per-replicate wall-clock times
// go to a sidecar "<json stem>.timing.json" so the summary itself is
// reproducible byte for byte.
void emit_results(const ExperimentResult& result,
                  const std::filesystem::path& csv_path,
                  const std::filesystem::path& json_path);

nlohmann::json result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);
// Reads a summary written by emit_results (and its timing sidecar if present).
ExperimentResult read_results(const std::filesystem::path& json_path);

void write_subsample_table(const SubsampleResult& result,
                           const std::filesystem::path& path);

}  // namespace vn
