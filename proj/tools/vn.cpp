// vn: vertex nomination command line.
//
//   vn sample      realize an SBM graph to edge-list and label files
//   vn nominate    nominate the unlabelled vertices of a graph
//   vn experiment  run a Monte-Carlo experiment from a JSON config
//   vn subsample   subsample-and-average nomination positions
//   vn version
//
// Exit codes: 0 success, 2 config error, 3 infeasible, 4 I/O.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vn/canonical.hpp"
#include "vn/error.hpp"
#include "vn/experiment.hpp"
#include "vn/io.hpp"
#include "vn/likelihood.hpp"
#include "vn/spectral.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kInfeasibleExit = 3;
constexpr int kIoExit = 4;

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(item, &used);
      if (used != item.size() || value < 0) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      throw vn::ConfigError("bad size list '" + text + "'");
    }
  }
  return out;
}

void print_summary(const vn::ExperimentResult& result) {
  std::printf("n=%d n1=%d replicates=%d chance=%.4f\n", result.n, result.n1,
              result.replicates, result.chance);
  for (const auto& s : result.schemes) {
    std::printf("%-10s MAP=%.4f SE=%.4f seconds/replicate=%.4f\n",
                std::string(vn::scheme_name(s.scheme)).c_str(), s.map.mean,
                s.map.standard_error, s.seconds_per_replicate);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex nomination on stochastic block model graphs"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Realize an SBM graph");
  std::string sample_lambda, sample_sizes, sample_seeds = "", sample_edges,
                             sample_labels, sample_truth;
  double sample_theta = 1.0;
  std::uint64_t sample_seed = 0;
  sample->add_option("--lambda", sample_lambda, "Lambda JSON file")->required();
  sample->add_option("--sizes", sample_sizes, "ambiguous sizes n1,..,nK")
      ->required();
  sample->add_option("--seeds", sample_seeds, "seed sizes m1,..,mK");
  sample->add_option("--theta", sample_theta, "mix Lambda toward 1/2");
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--edges", sample_edges, "output edge list")->required();
  sample->add_option("--labels", sample_labels, "output seed labels")
      ->required();
  sample->add_option("--truth", sample_truth,
                     "output labels of every vertex (evaluation only)");

  // nominate
  auto* nominate = app.add_subcommand("nominate", "Nominate ambiguous vertices");
  std::string scheme_name, graph_path, labels_path, lambda_path, sizes_text;
  int dimension = 0;
  int kmeans_restarts = 10;
  std::uint64_t nominate_seed = 0;
  double epsilon = vn::kDefaultEpsilon;
  nominate->add_option("--scheme", scheme_name, "canonical|likelihood|spectral")
      ->required();
  nominate->add_option("--graph", graph_path, "edge list")->required();
  nominate->add_option("--labels", labels_path, "seed labels")->required();
  nominate->add_option("--lambda", lambda_path, "Lambda JSON file")->required();
  nominate->add_option("--sizes", sizes_text, "ambiguous sizes n1,..,nK");
  nominate->add_option("--dim", dimension, "embedding dimension (spectral)");
  nominate->add_option("--restarts", kmeans_restarts, "k-means restarts");
  nominate->add_option("--seed", nominate_seed, "RNG seed (spectral)");
  nominate->add_option("--epsilon", epsilon, "probability clamp");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment");
  std::string config_path, csv_override, json_override, raw_log;
  int workers = 1;
  experiment->add_option("--config", config_path, "JSON config")->required();
  experiment->add_option("--workers", workers, "worker threads");
  experiment->add_option("--log-raw", raw_log,
                         "per-replicate log (CSV)")
      ->expected(0, 1)
      ->default_str("");
  experiment->add_option("--csv", csv_override, "curve CSV output");
  experiment->add_option("--json", json_override, "JSON summary output");

  // subsample
  auto* subsample = app.add_subcommand("subsample",
                                       "Average nomination positions");
  std::string sub_config, sub_out;
  int sub_workers = 1;
  subsample->add_option("--config", sub_config, "JSON config")->required();
  subsample->add_option("--workers", sub_workers, "worker threads");
  subsample->add_option("--out", sub_out, "per-vertex table (CSV)");

  app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("version")) {
      std::cout << "vn " << vn::version() << '\n';
      return 0;
    }
    if (sample->parsed()) {
      const auto lambda = vn::mix_lambda(vn::load_lambda(sample_lambda), sample_theta);
      const auto sizes = parse_sizes(sample_sizes);
      auto seeds = sample_seeds.empty() ? std::vector<int>(sizes.size(), 0)
                                        : parse_sizes(sample_seeds);
      const vn::BlockModel model(seeds, sizes, lambda);
      const vn::LabeledGraph graph = vn::sample_sbm(
          model, vn::contiguous_assignment(model), sample_seed);
      vn::write_edge_list(graph, sample_edges);
      vn::write_labels(graph, sample_labels, false);
      if (!sample_truth.empty()) vn::write_labels(graph, sample_truth, true);
      return 0;
    }
    if (nominate->parsed()) {
      const vn::Scheme scheme = vn::parse_scheme(scheme_name);
      const Eigen::MatrixXd lambda = vn::load_lambda(lambda_path);
      const int k = static_cast<int>(lambda.rows());
      const vn::LabeledGraph graph =
          vn::load_edge_list(graph_path, labels_path, k);
      vn::NominationList list;
      if (scheme == vn::Scheme::kSpectral) {
        vn::SpectralOptions opts;
        opts.dimension = dimension > 0 ? dimension
                                       : std::max(1, vn::numerical_rank(lambda));
        opts.kmeans.restarts = kmeans_restarts;
        opts.seed = nominate_seed;
        list = vn::spectral_nominate(graph, k, opts);
      } else {
        if (sizes_text.empty()) {
          throw vn::ConfigError("--sizes is required for the " + scheme_name +
                                " scheme");
        }
        std::vector<int> seed_sizes(k, 0);
        for (int label : graph.seed_labels()) ++seed_sizes[label];
        const vn::BlockModel model(seed_sizes, parse_sizes(sizes_text), lambda);
        if (model.ambiguous_count() != graph.ambiguous_count()) {
          throw vn::ConfigError("--sizes must sum to the number of unlabelled "
                                "vertices (" +
                                std::to_string(graph.ambiguous_count()) + ")");
        }
        if (scheme == vn::Scheme::kCanonical) {
          vn::CanonicalOptions opts;
          opts.epsilon = epsilon;
          list = vn::canonical_nominate(graph, model, opts);
        } else {
          vn::LikelihoodOptions opts;
          opts.epsilon = epsilon;
          list = vn::likelihood_nominate(graph, model, opts);
        }
      }
      for (std::size_t i = 0; i < list.order.size(); ++i) {
        std::cout << i + 1 << ' ' << graph.original_id(list.order[i]) << '\n';
      }
      return 0;
    }
    if (experiment->parsed()) {
      vn::ExperimentConfig config = vn::load_config(config_path);
      if (!csv_override.empty()) config.csv_path = csv_override;
      if (!json_override.empty()) config.json_path = json_override;
      vn::RunOptions opts;
      opts.workers = workers;
      if (experiment->count("--log-raw") > 0) {
        opts.raw_log = raw_log.empty() ? "raw_log.csv" : raw_log;
      }
      const vn::ExperimentResult result =
          config.model ? vn::run_simulation(config, opts)
                       : vn::run_realdata(config, opts);
      vn::emit_results(result, config.csv_path, config.json_path);
      print_summary(result);
      return 0;
    }
    if (subsample->parsed()) {
      const vn::ExperimentConfig config = vn::load_config(sub_config);
      vn::RunOptions opts;
      opts.workers = sub_workers;
      const vn::SubsampleResult result = vn::run_subsample_average(config, opts);
      if (!sub_out.empty()) {
        vn::write_subsample_table(result, sub_out);
      } else {
        for (const auto& v : result.vertices) {
          if (v.times_selected == 0) continue;
          std::printf("%lld %d %d %.4f\n", static_cast<long long>(v.vertex),
                      v.label + 1, v.times_selected, v.mean_position);
        }
      }
      return 0;
    }
  } catch (const vn::InfeasibleError& e) {
    std::cerr << "vn: " << e.what() << '\n';
    return kInfeasibleExit;
  } catch (const vn::IoError& e) {
    std::cerr << "vn: " << e.what() << '\n';
    return kIoExit;
  } catch (const vn::ConfigError& e) {
    std::cerr << "vn: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "vn: " << e.what() << '\n';
    return kConfigExit;
  }
  return 0;
}
