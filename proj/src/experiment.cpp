#include "vn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "vn/canonical.hpp"
#include "vn/error.hpp"
#include "vn/io.hpp"
#include "vn/likelihood.hpp"
#include "vn/rng.hpp"
#include "vn/spectral.hpp"

#ifndef VN_VERSION
#define VN_VERSION "0.0.0"
#endif

namespace vn {

using nlohmann::json;

namespace {

// Random streams within one replicate.
enum Stream : std::uint64_t {
  kGraphStream = 0,
  kMembershipStream = 1,
  kSpectralStream = 2,
  kSgmStream = 3,
  kSplitStream = 4,
};

// ---------------------------------------------------------------- config

void require_keys(const json& obj, std::string_view where,
                  std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + std::string(key) + "' in " +
                      std::string(where));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " +
                      std::string(where) + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, std::string_view where, T fallback) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

Eigen::MatrixXd parse_matrix(const json& rows, std::string_view where) {
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError(std::string(where) + " must be a non-empty array of rows");
  }
  const auto k = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) {
      throw ConfigError(std::string(where) + " must be square");
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!row[j].is_number()) {
        throw ConfigError(std::string(where) + " entries must be numbers");
      }
      out(i, j) = row[j].get<double>();
    }
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- running

struct ReplicateOutcome {
  std::vector<std::vector<std::uint8_t>> relevance;  // per scheme
  std::vector<double> ap;
  std::vector<double> seconds;
};

// Runs body(r) for r in [0, count) on `workers` threads and returns the
// outcomes in replicate order. The first exception (by replicate index) is
// rethrown.
template <typename Outcome>
std::vector<Outcome> run_replicates(
    int count, int workers, const std::function<Outcome(int)>& body) {
  std::vector<Outcome> outcomes(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        outcomes[r] = body(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(workers, 1, std::max(1, count));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outcomes;
}

struct NominationContext {
  const LabeledGraph& graph;
  const BlockModel& model;
  int dimension;
  const SchemeParams& params;
  std::uint64_t master;
  int replicate;
};

NominationList nominate(Scheme scheme, const NominationContext& ctx) {
  switch (scheme) {
    case Scheme::kCanonical: {
      CanonicalOptions opts;
      opts.partition_guard = ctx.params.partition_guard;
      opts.epsilon = ctx.params.epsilon;
      return canonical_nominate(ctx.graph, ctx.model, opts);
    }
    case Scheme::kLikelihood: {
      LikelihoodOptions opts;
      opts.epsilon = ctx.params.epsilon;
      opts.sgm.max_iter = ctx.params.max_iter;
      opts.sgm.tol = ctx.params.tol;
      opts.sgm.restarts = ctx.params.sgm_restarts;
      opts.sgm.seed = derive_seed(ctx.master, ctx.replicate, kSgmStream);
      return likelihood_nominate(ctx.graph, ctx.model, opts);
    }
    case Scheme::kSpectral: {
      SpectralOptions opts;
      opts.dimension = ctx.dimension;
      opts.kmeans.restarts = ctx.params.kmeans_restarts;
      opts.seed = derive_seed(ctx.master, ctx.replicate, kSpectralStream);
      return spectral_nominate(ctx.graph, ctx.model.num_blocks(), opts);
    }
  }
  throw std::logic_error("unhandled scheme");
}

ReplicateOutcome score_schemes(const ExperimentConfig& config,
                               const NominationContext& ctx, int n1) {
  ReplicateOutcome out;
  for (Scheme scheme : config.schemes) {
    const auto start = std::chrono::steady_clock::now();
    const NominationList list = nominate(scheme, ctx);
    const auto stop = std::chrono::steady_clock::now();
    check_nomination_list(list, ctx.graph);
    auto rel = relevance(list, ctx.graph);
    out.ap.push_back(average_precision(rel, n1));
    out.relevance.push_back(std::move(rel));
    out.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return out;
}

ExperimentResult aggregate(const ExperimentConfig& config, int n, int n1,
                           const std::vector<ReplicateOutcome>& outcomes,
                           const RunOptions& options) {
  ExperimentResult result;
  result.n = n;
  result.n1 = n1;
  result.chance = static_cast<double>(n1) / n;
  result.replicates = static_cast<int>(outcomes.size());
  result.seed = config.seed;
  result.config = config_to_json(config);
  for (std::size_t s = 0; s < config.schemes.size(); ++s) {
    SchemeResult sr;
    sr.scheme = config.schemes[s];
    std::vector<std::int64_t> hits(n, 0);
    std::vector<double> aps;
    double seconds = 0.0;
    for (const auto& o : outcomes) {
      for (int i = 0; i < n; ++i) hits[i] += o.relevance[s][i];
      aps.push_back(o.ap[s]);
      seconds += o.seconds[s];
    }
    sr.curve.resize(n);
    for (int i = 0; i < n; ++i) {
      sr.curve[i] = static_cast<double>(hits[i]) / result.replicates;
    }
    sr.map = mean_average_precision(aps);
    sr.seconds_per_replicate = seconds / result.replicates;
    result.schemes.push_back(std::move(sr));
  }
  if (!options.raw_log.empty()) {
    std::ofstream raw(options.raw_log);
    if (!raw) throw IoError("cannot write " + options.raw_log.string());
    raw << "replicate,scheme,ap,relevance\n";
    char buf[64];
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      for (std::size_t s = 0; s < config.schemes.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.17g", outcomes[r].ap[s]);
        raw << r << ',' << scheme_name(config.schemes[s]) << ',' << buf << ',';
        for (std::uint8_t x : outcomes[r].relevance[s]) raw << (x ? '1' : '0');
        raw << '\n';
      }
    }
    if (!raw) throw IoError("failed writing " + options.raw_log.string());
  }
  return result;
}

void validate_common(const ExperimentConfig& config) {
  if (config.replicates < 1) throw ConfigError("replicates must be >= 1");
}

int resolve_dimension(const SchemeParams& params, const Eigen::MatrixXd& lambda) {
  if (params.dimension) return *params.dimension;
  return std::max(1, numerical_rank(lambda));
}

std::vector<std::vector<int>> vertices_by_label(const GraphData& data,
                                                int num_blocks) {
  std::vector<std::vector<int>> out(num_blocks);
  for (int w = 0; w < data.vertex_count; ++w) {
    const int label = data.labels[w];
    if (label < 0) {
      throw ConfigError("vertex " + std::to_string(w + 1) +
                        " has no label; the labels file must cover every "
                        "vertex");
    }
    out[label].push_back(w);
  }
  return out;
}

// First `count` entries of a uniformly shuffled copy of pool.
std::vector<int> sample_without_replacement(std::vector<int> pool, int count,
                                            Rng& rng) {
  rng.shuffle(std::span<int>(pool));
  pool.resize(count);
  return pool;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::filesystem::path timing_path(const std::filesystem::path& json_path) {
  std::filesystem::path p = json_path;
  p.replace_extension();
  p += ".timing.json";
  return p;
}

}  // namespace

std::string_view version() { return VN_VERSION; }

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCanonical:
      return "canonical";
    case Scheme::kLikelihood:
      return "likelihood";
    case Scheme::kSpectral:
      return "spectral";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "canonical") return Scheme::kCanonical;
  if (name == "likelihood") return Scheme::kLikelihood;
  if (name == "spectral") return Scheme::kSpectral;
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (expected canonical, likelihood or spectral)");
}

Eigen::MatrixXd ModelSpec::lambda() const {
  return mix_lambda(base_lambda, theta);
}

BlockModel ModelSpec::block_model() const {
  return BlockModel(seed_sizes, ambiguous_sizes, lambda());
}

ExperimentConfig parse_config(const json& doc) {
  require_keys(doc, "config",
               {"name", "model", "data", "subsample", "schemes", "replicates",
                "seed", "randomize_membership", "params", "output"});
  ExperimentConfig config;
  config.name = get_or<std::string>(doc, "name", "config", "");
  if (doc.contains("model")) {
    const json& m = doc.at("model");
    require_keys(m, "model",
                 {"lambda", "theta", "ambiguous_sizes", "seed_sizes"});
    ModelSpec spec;
    if (!m.contains("lambda")) throw ConfigError("missing key 'lambda' in model");
    spec.base_lambda = parse_matrix(m.at("lambda"), "model.lambda");
    spec.theta = get_or<double>(m, "theta", "model", 1.0);
    spec.ambiguous_sizes = get<std::vector<int>>(m, "ambiguous_sizes", "model");
    spec.seed_sizes = get<std::vector<int>>(m, "seed_sizes", "model");
    spec.block_model();  // validates sizes, Lambda and theta
    config.model = std::move(spec);
  }
  if (doc.contains("data")) {
    const json& d = doc.at("data");
    require_keys(d, "data", {"edges", "labels", "num_blocks", "seeds_per_block"});
    DataSpec spec;
    spec.edges = get<std::string>(d, "edges", "data");
    spec.labels = get<std::string>(d, "labels", "data");
    spec.num_blocks = get<int>(d, "num_blocks", "data");
    if (spec.num_blocks < 1) throw ConfigError("data.num_blocks must be >= 1");
    spec.seeds_per_block =
        get_or<std::vector<int>>(d, "seeds_per_block", "data", {});
    if (!spec.seeds_per_block.empty() &&
        static_cast<int>(spec.seeds_per_block.size()) != spec.num_blocks) {
      throw ConfigError("data.seeds_per_block needs num_blocks entries");
    }
    config.data = std::move(spec);
  }
  if (doc.contains("subsample")) {
    const json& s = doc.at("subsample");
    require_keys(s, "subsample", {"per_class", "seeds_per_class"});
    SubsampleSpec spec;
    spec.per_class = get_or<int>(s, "per_class", "subsample", 125);
    spec.seeds_per_class = get_or<int>(s, "seeds_per_class", "subsample", 50);
    if (spec.seeds_per_class < 2 || spec.seeds_per_class >= spec.per_class) {
      throw ConfigError("subsample needs 2 <= seeds_per_class < per_class");
    }
    config.subsample = spec;
  }
  if (!config.model && !config.data) {
    throw ConfigError("config needs a 'model' or a 'data' section");
  }
  for (const auto& name :
       get_or<std::vector<std::string>>(doc, "schemes", "config", {})) {
    const Scheme s = parse_scheme(name);
    if (std::find(config.schemes.begin(), config.schemes.end(), s) ==
        config.schemes.end()) {
      config.schemes.push_back(s);
    }
  }
  if (config.schemes.empty() && !config.subsample) {
    throw ConfigError("at least one scheme is required");
  }
  config.replicates = get_or<int>(doc, "replicates", "config", 1);
  if (config.replicates < 1) throw ConfigError("replicates must be >= 1");
  config.seed = get_or<std::uint64_t>(doc, "seed", "config", 0);
  config.randomize_membership =
      get_or<bool>(doc, "randomize_membership", "config", true);
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    require_keys(p, "params",
                 {"dimension", "kmeans_restarts", "max_iter", "tol", "epsilon",
                  "sgm_restarts", "partition_guard"});
    SchemeParams& params = config.params;
    if (p.contains("dimension") && !p.at("dimension").is_null()) {
      params.dimension = get<int>(p, "dimension", "params");
      if (*params.dimension < 1) throw ConfigError("params.dimension must be >= 1");
    }
    params.kmeans_restarts =
        get_or<int>(p, "kmeans_restarts", "params", params.kmeans_restarts);
    params.max_iter = get_or<int>(p, "max_iter", "params", params.max_iter);
    params.tol = get_or<double>(p, "tol", "params", params.tol);
    params.epsilon = get_or<double>(p, "epsilon", "params", params.epsilon);
    params.sgm_restarts =
        get_or<int>(p, "sgm_restarts", "params", params.sgm_restarts);
    params.partition_guard =
        get_or<double>(p, "partition_guard", "params", params.partition_guard);
    if (params.kmeans_restarts < 1 || params.max_iter < 1 ||
        params.sgm_restarts < 1 || !(params.tol >= 0.0) ||
        !(params.epsilon > 0.0 && params.epsilon < 0.5)) {
      throw ConfigError("params out of range");
    }
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    require_keys(o, "output", {"csv", "json"});
    config.csv_path = get_or<std::string>(o, "csv", "output", "");
    config.json_path = get_or<std::string>(o, "json", "output", "");
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig& config) {
  json doc;
  doc["name"] = config.name;
  if (config.model) {
    doc["model"] = {{"lambda", matrix_to_json(config.model->base_lambda)},
                    {"theta", config.model->theta},
                    {"ambiguous_sizes", config.model->ambiguous_sizes},
                    {"seed_sizes", config.model->seed_sizes}};
  }
  if (config.data) {
    doc["data"] = {{"edges", config.data->edges},
                   {"labels", config.data->labels},
                   {"num_blocks", config.data->num_blocks},
                   {"seeds_per_block", config.data->seeds_per_block}};
  }
  if (config.subsample) {
    doc["subsample"] = {{"per_class", config.subsample->per_class},
                        {"seeds_per_class", config.subsample->seeds_per_class}};
  }
  json schemes = json::array();
  for (Scheme s : config.schemes) schemes.push_back(std::string(scheme_name(s)));
  doc["schemes"] = schemes;
  doc["replicates"] = config.replicates;
  doc["seed"] = config.seed;
  doc["randomize_membership"] = config.randomize_membership;
  const SchemeParams& p = config.params;
  doc["params"] = {{"dimension", p.dimension ? json(*p.dimension) : json(nullptr)},
                   {"kmeans_restarts", p.kmeans_restarts},
                   {"max_iter", p.max_iter},
                   {"tol", p.tol},
                   {"epsilon", p.epsilon},
                   {"sgm_restarts", p.sgm_restarts},
                   {"partition_guard", p.partition_guard}};
  doc["output"] = {{"csv", config.csv_path}, {"json", config.json_path}};
  return doc;
}

const SchemeResult& ExperimentResult::at(Scheme scheme) const {
  for (const auto& s : schemes) {
    if (s.scheme == scheme) return s;
  }
  throw std::out_of_range("scheme not part of this result");
}

ExperimentResult run_simulation(const ExperimentConfig& config,
                                const RunOptions& options) {
  validate_common(config);
  if (!config.model) throw ConfigError("simulation needs a 'model' section");
  const BlockModel model = config.model->block_model();
  const int m = model.seed_count();
  const int n = model.ambiguous_count();
  const int n1 = model.ambiguous_sizes()[0];
  const int dimension = resolve_dimension(config.params, model.lambda());
  for (Scheme s : config.schemes) {
    if (s == Scheme::kCanonical &&
        count_partitions(model.ambiguous_sizes()) > config.params.partition_guard) {
      // Fail before spending time on the other schemes.
      PartitionEnumerator check(model.ambiguous_sizes(),
                                config.params.partition_guard);
    }
  }
  const BlockAssignment base = contiguous_assignment(model);

  const std::function<ReplicateOutcome(int)> body = [&](int r) {
    BlockAssignment membership = base;
    if (config.randomize_membership) {
      Rng rng(derive_seed(config.seed, r, kMembershipStream));
      rng.shuffle(std::span<int>(membership.labels).subspan(m));
    }
    const LabeledGraph graph =
        sample_sbm(model, membership, derive_seed(config.seed, r, kGraphStream));
    const NominationContext ctx{graph, model, dimension, config.params,
                                config.seed, r};
    return score_schemes(config, ctx, n1);
  };
  const auto outcomes =
      run_replicates<ReplicateOutcome>(config.replicates, options.workers, body);
  return aggregate(config, n, n1, outcomes, options);
}

ExperimentResult run_realdata(const ExperimentConfig& config,
                              const RunOptions& options) {
  validate_common(config);
  if (!config.data) throw ConfigError("real-data run needs a 'data' section");
  const DataSpec& spec = *config.data;
  const int k_blocks = spec.num_blocks;
  if (static_cast<int>(spec.seeds_per_block.size()) != k_blocks) {
    throw ConfigError("data.seeds_per_block needs num_blocks entries");
  }
  const GraphData data = load_graph_data(spec.edges, spec.labels, k_blocks);
  const auto blocks = vertices_by_label(data, k_blocks);
  std::vector<int> ambiguous_sizes(k_blocks);
  for (int k = 0; k < k_blocks; ++k) {
    const int size = static_cast<int>(blocks[k].size());
    if (size == 0) {
      throw ConfigError("block " + std::to_string(k + 1) +
                        " is absent from the labels");
    }
    if (spec.seeds_per_block[k] < 0 || spec.seeds_per_block[k] > size) {
      throw ConfigError("block " + std::to_string(k + 1) + " has " +
                        std::to_string(size) + " vertices, fewer than the " +
                        std::to_string(spec.seeds_per_block[k]) +
                        " seeds requested");
    }
    ambiguous_sizes[k] = size - spec.seeds_per_block[k];
  }
  const int n = std::accumulate(ambiguous_sizes.begin(), ambiguous_sizes.end(), 0);
  const int n1 = ambiguous_sizes[0];
  if (n1 < 1) throw ConfigError("block 1 needs ambiguous vertices");

  const std::function<ReplicateOutcome(int)> body = [&](int r) {
    Rng rng(derive_seed(config.seed, r, kSplitStream));
    std::vector<int> seeds;
    std::vector<int> ambiguous;
    for (int k = 0; k < k_blocks; ++k) {
      std::vector<int> pool = blocks[k];
      rng.shuffle(std::span<int>(pool));
      seeds.insert(seeds.end(), pool.begin(),
                   pool.begin() + spec.seeds_per_block[k]);
      ambiguous.insert(ambiguous.end(), pool.begin() + spec.seeds_per_block[k],
                       pool.end());
    }
    std::sort(seeds.begin(), seeds.end());
    std::sort(ambiguous.begin(), ambiguous.end());
    const LabeledGraph graph = induce_labeled_graph(data, seeds, ambiguous, true);
    const Eigen::MatrixXd lambda_hat = estimate_lambda(
        graph, k_blocks, LambdaSource::kSeeds, config.params.epsilon);
    const BlockModel model(spec.seeds_per_block, ambiguous_sizes, lambda_hat);
    const int dimension = resolve_dimension(config.params, lambda_hat);
    const NominationContext ctx{graph, model, dimension, config.params,
                                config.seed, r};
    return score_schemes(config, ctx, n1);
  };
  const auto outcomes =
      run_replicates<ReplicateOutcome>(config.replicates, options.workers, body);
  return aggregate(config, n, n1, outcomes, options);
}

SubsampleResult run_subsample_average(const ExperimentConfig& config,
                                      const RunOptions& options) {
  if (!config.data) throw ConfigError("subsample run needs a 'data' section");
  const GraphData data =
      load_graph_data(config.data->edges, config.data->labels, 2);
  return run_subsample_average(data, config, options);
}

SubsampleResult run_subsample_average(const GraphData& data,
                                      const ExperimentConfig& config,
                                      const RunOptions& options) {
  validate_common(config);
  const SubsampleSpec spec = config.subsample.value_or(SubsampleSpec{});
  const auto classes = vertices_by_label(data, 2);
  for (int k = 0; k < 2; ++k) {
    if (static_cast<int>(classes[k].size()) < spec.per_class) {
      throw ConfigError("class " + std::to_string(k + 1) + " has " +
                        std::to_string(classes[k].size()) +
                        " vertices, fewer than the subsample size " +
                        std::to_string(spec.per_class));
    }
  }
  const int ambiguous_per_class = spec.per_class - spec.seeds_per_class;
  const std::vector<int> seed_sizes{spec.seeds_per_class, spec.seeds_per_class};
  const std::vector<int> ambiguous_sizes{ambiguous_per_class, ambiguous_per_class};

  using Positions = std::vector<std::pair<int, int>>;  // (vertex, position)
  const std::function<Positions(int)> body = [&](int r) {
    Rng rng(derive_seed(config.seed, r, kSplitStream));
    std::vector<int> seeds;
    std::vector<int> ambiguous;
    for (int k = 0; k < 2; ++k) {
      const std::vector<int> chosen =
          sample_without_replacement(classes[k], spec.per_class, rng);
      seeds.insert(seeds.end(), chosen.begin(),
                   chosen.begin() + spec.seeds_per_class);
      ambiguous.insert(ambiguous.end(), chosen.begin() + spec.seeds_per_class,
                       chosen.end());
    }
    std::sort(seeds.begin(), seeds.end());
    std::sort(ambiguous.begin(), ambiguous.end());
    const LabeledGraph graph = induce_labeled_graph(data, seeds, ambiguous, false);
    const Eigen::MatrixXd lambda_hat =
        estimate_lambda(graph, 2, LambdaSource::kSeeds, config.params.epsilon);
    const BlockModel model(seed_sizes, ambiguous_sizes, lambda_hat);
    LikelihoodOptions opts;
    opts.epsilon = config.params.epsilon;
    opts.sgm.max_iter = config.params.max_iter;
    opts.sgm.tol = config.params.tol;
    opts.sgm.restarts = config.params.sgm_restarts;
    opts.sgm.seed = derive_seed(config.seed, r, kSgmStream);
    const NominationList list = likelihood_nominate(graph, model, opts);
    Positions out;
    for (std::size_t i = 0; i < list.order.size(); ++i) {
      const int original = static_cast<int>(graph.original_id(list.order[i]) - 1);
      out.emplace_back(original, static_cast<int>(i) + 1);
    }
    return out;
  };
  const auto outcomes =
      run_replicates<Positions>(config.replicates, options.workers, body);

  return accumulate_positions(data, outcomes);
}

SubsampleResult accumulate_positions(
    const GraphData& data,
    const std::vector<std::vector<std::pair<int, int>>>& replicates) {
  std::vector<double> sums(data.vertex_count, 0.0);
  std::vector<int> counts(data.vertex_count, 0);
  for (const auto& replicate : replicates) {
    for (const auto& [vertex, position] : replicate) {
      sums.at(vertex) += position;
      ++counts.at(vertex);
    }
  }
  SubsampleResult result;
  result.replicates = static_cast<int>(replicates.size());
  for (int w = 0; w < data.vertex_count; ++w) {
    VertexPosition vp;
    vp.vertex = w + 1;
    vp.label = data.labels[w];
    vp.times_selected = counts[w];
    vp.mean_position = counts[w] > 0 ? sums[w] / counts[w] : 0.0;
    result.vertices.push_back(vp);
  }
  return result;
}

json result_to_json(const ExperimentResult& result) {
  json doc;
  doc["code_version"] = std::string(version());
  doc["master_seed"] = result.seed;
  doc["n"] = result.n;
  doc["n1"] = result.n1;
  doc["chance"] = result.chance;
  doc["replicates"] = result.replicates;
  doc["config"] = result.config;
  json schemes = json::array();
  for (const auto& s : result.schemes) {
    schemes.push_back({{"scheme", std::string(scheme_name(s.scheme))},
                       {"map", s.map.mean},
                       {"se", s.map.standard_error},
                       {"curve", s.curve}});
  }
  doc["schemes"] = schemes;
  return doc;
}

ExperimentResult result_from_json(const json& doc) {
  try {
    ExperimentResult result;
    result.seed = doc.at("master_seed").get<std::uint64_t>();
    result.n = doc.at("n").get<int>();
    result.n1 = doc.at("n1").get<int>();
    result.chance = doc.at("chance").get<double>();
    result.replicates = doc.at("replicates").get<int>();
    result.config = doc.at("config");
    for (const auto& s : doc.at("schemes")) {
      SchemeResult sr;
      sr.scheme = parse_scheme(s.at("scheme").get<std::string>());
      sr.map.mean = s.at("map").get<double>();
      sr.map.standard_error = s.at("se").get<double>();
      sr.curve = s.at("curve").get<std::vector<double>>();
      result.schemes.push_back(std::move(sr));
    }
    return result;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed result summary: ") + e.what());
  }
}

void emit_results(const ExperimentResult& result,
                  const std::filesystem::path& csv_path,
                  const std::filesystem::path& json_path) {
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw IoError("cannot write " + csv_path.string());
    csv << "position";
    for (const auto& s : result.schemes) csv << ',' << scheme_name(s.scheme);
    csv << ",chance\n";
    for (int i = 0; i < result.n; ++i) {
      csv << i + 1;
      for (const auto& s : result.schemes) csv << ',' << format_double(s.curve[i]);
      csv << ',' << format_double(result.chance) << '\n';
    }
    if (!csv) throw IoError("failed writing " + csv_path.string());
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write " + json_path.string());
    out << result_to_json(result).dump(2) << '\n';
    if (!out) throw IoError("failed writing " + json_path.string());

    const auto tpath = timing_path(json_path);
    std::ofstream timing(tpath);
    if (!timing) throw IoError("cannot write " + tpath.string());
    json t = json::object();
    for (const auto& s : result.schemes) {
      t[std::string(scheme_name(s.scheme))] = {
          {"seconds_per_replicate", s.seconds_per_replicate}};
    }
    timing << t.dump(2) << '\n';
    if (!timing) throw IoError("failed writing " + tpath.string());
  }
}

ExperimentResult read_results(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open " + json_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError(json_path.string() + ": " + e.what());
  }
  ExperimentResult result = result_from_json(doc);
  std::ifstream timing(timing_path(json_path));
  if (timing) {
    try {
      json t;
      timing >> t;
      for (auto& s : result.schemes) {
        const std::string name(scheme_name(s.scheme));
        if (t.contains(name)) {
          s.seconds_per_replicate = t.at(name).at("seconds_per_replicate").get<double>();
        }
      }
    } catch (const json::exception& e) {
      throw IoError(timing_path(json_path).string() + ": " + e.what());
    }
  }
  return result;
}

void write_subsample_table(const SubsampleResult& result,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "vertex,class,times_selected,mean_position\n";
  for (const auto& v : result.vertices) {
    out << v.vertex << ',' << v.label + 1 << ',' << v.times_selected << ','
        << (v.times_selected > 0 ? format_double(v.mean_position) : "NA")
        << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace vn
