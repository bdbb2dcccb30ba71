#pragma once

// Text formats. All vertex ids and block ids in files are 1-based.
//
//   edge list:  "#vertices N" (optional first line), then "u v" per line;
//               other lines starting with '#' are comments.
//   labels:     "vertex block" per line.
//   Lambda:     JSON object {"K": k, "lambda": [[...], ...]} (a flat
//               row-major array of k*k numbers is accepted too).

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "vn/graph.hpp"

namespace vn {

struct EdgeList {
  std::optional<std::int64_t> declared_vertices;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;  // 1-based
};

// Throws IoError naming the line for malformed input or self-loops.
EdgeList read_edge_list(const std::filesystem::path& path);

// (vertex id, 0-based block) pairs. Block ids outside 1..num_blocks throw.
std::vector<std::pair<std::int64_t, int>> read_labels(
    const std::filesystem::path& path, int num_blocks);

// Vertex universe is the declared count when present, otherwise the largest
// id named in either file. Vertices without a label get -1.
GraphData load_graph_data(const std::filesystem::path& edges_path,
                          const std::filesystem::path& labels_path,
                          int num_blocks);

// Seeded graph: labelled vertices become seeds (ascending id), all others are
// ambiguous (ascending id). No ground truth is attached.
LabeledGraph load_edge_list(const std::filesystem::path& edges_path,
                            const std::filesystem::path& labels_path,
                            int num_blocks);

Eigen::MatrixXd load_lambda(const std::filesystem::path& path);

void write_edge_list(const LabeledGraph& graph,
                     const std::filesystem::path& path);

// Seed labels only, or seeds plus ambiguous truth when include_truth is set.
void write_labels(const LabeledGraph& graph, const std::filesystem::path& path,
                  bool include_truth);

}  // namespace vn
