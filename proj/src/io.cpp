#include "vn/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vn/error.hpp"

namespace vn {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string where(const std::filesystem::path& path, int line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

bool is_blank_or_comment(const std::string& line, std::size_t& first) {
  first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

// Parses exactly two integers from the line; anything else is malformed.
bool parse_pair(const std::string& line, std::int64_t& a, std::int64_t& b) {
  std::istringstream ss(line);
  std::string extra;
  return static_cast<bool>(ss >> a >> b) && !(ss >> extra);
}

}  // namespace

EdgeList read_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  EdgeList out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first;
    if (is_blank_or_comment(line, first)) {
      if (first != std::string::npos && line.compare(first, 9, "#vertices") == 0) {
        std::istringstream ss(line.substr(first + 9));
        std::int64_t count;
        if (!(ss >> count) || count < 1) {
          throw IoError(where(path, line_no) + "malformed #vertices header");
        }
        out.declared_vertices = count;
      }
      continue;
    }
    std::int64_t a, b;
    if (!parse_pair(line, a, b) || a < 1 || b < 1) {
      throw IoError(where(path, line_no) +
                    "expected two positive vertex ids, got '" + line + "'");
    }
    if (a == b) {
      throw IoError(where(path, line_no) + "self-loop at vertex " +
                    std::to_string(a));
    }
    out.edges.emplace_back(a, b);
  }
  return out;
}

std::vector<std::pair<std::int64_t, int>> read_labels(
    const std::filesystem::path& path, int num_blocks) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<std::int64_t, int>> out;
  std::map<std::int64_t, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first;
    if (is_blank_or_comment(line, first)) continue;
    std::int64_t vertex, block;
    if (!parse_pair(line, vertex, block) || vertex < 1) {
      throw IoError(where(path, line_no) + "expected 'vertex block', got '" +
                    line + "'");
    }
    if (block < 1 || block > num_blocks) {
      throw IoError(where(path, line_no) + "block " + std::to_string(block) +
                    " outside 1.." + std::to_string(num_blocks));
    }
    const int label = static_cast<int>(block - 1);
    auto [it, inserted] = seen.emplace(vertex, label);
    if (!inserted) {
      if (it->second != label) {
        throw IoError(where(path, line_no) + "conflicting labels for vertex " +
                      std::to_string(vertex));
      }
      continue;
    }
    out.emplace_back(vertex, label);
  }
  return out;
}

GraphData load_graph_data(const std::filesystem::path& edges_path,
                          const std::filesystem::path& labels_path,
                          int num_blocks) {
  const EdgeList edges = read_edge_list(edges_path);
  const auto labels = read_labels(labels_path, num_blocks);

  std::int64_t universe = 0;
  if (edges.declared_vertices) {
    universe = *edges.declared_vertices;
  } else {
    for (const auto& [a, b] : edges.edges) universe = std::max({universe, a, b});
    for (const auto& [v, label] : labels) universe = std::max(universe, v);
  }
  auto check = [&](std::int64_t id, const std::filesystem::path& file) {
    if (id > universe) {
      throw IoError(file.string() + ": vertex " + std::to_string(id) +
                    " exceeds declared vertex count " +
                    std::to_string(universe));
    }
  };

  GraphData data;
  data.vertex_count = static_cast<int>(universe);
  const auto n = static_cast<std::size_t>(universe);
  data.adjacency.assign(n * n, 0);
  data.labels.assign(n, -1);
  for (const auto& [a, b] : edges.edges) {
    check(a, edges_path);
    check(b, edges_path);
    data.adjacency[(a - 1) * n + (b - 1)] = 1;
    data.adjacency[(b - 1) * n + (a - 1)] = 1;
  }
  for (const auto& [v, label] : labels) {
    check(v, labels_path);
    data.labels[v - 1] = label;
  }
  return data;
}

LabeledGraph load_edge_list(const std::filesystem::path& edges_path,
                            const std::filesystem::path& labels_path,
                            int num_blocks) {
  const GraphData data = load_graph_data(edges_path, labels_path, num_blocks);
  std::vector<int> seeds;
  std::vector<int> ambiguous;
  for (int w = 0; w < data.vertex_count; ++w) {
    (data.labels[w] >= 0 ? seeds : ambiguous).push_back(w);
  }
  if (ambiguous.empty()) {
    throw IoError(labels_path.string() +
                  ": every vertex is labelled; nothing to nominate");
  }
  return induce_labeled_graph(data, seeds, ambiguous, false);
}

Eigen::MatrixXd load_lambda(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    const int k = doc.at("K").get<int>();
    if (k < 1) throw IoError(path.string() + ": K must be positive");
    const auto& values = doc.at("lambda");
    std::vector<double> flat;
    for (const auto& row : values) {
      if (row.is_array()) {
        if (static_cast<int>(row.size()) != k) {
          throw IoError(path.string() + ": each Lambda row needs K entries");
        }
        for (const auto& x : row) flat.push_back(x.get<double>());
      } else {
        flat.push_back(row.get<double>());
      }
    }
    if (static_cast<int>(flat.size()) != k * k) {
      throw IoError(path.string() + ": Lambda must have K*K entries");
    }
    Eigen::MatrixXd lambda(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) lambda(i, j) = flat[i * k + j];
    }
    return lambda;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_edge_list(const LabeledGraph& graph,
                     const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "#vertices " << graph.vertex_count() << '\n';
  for (int i = 0; i < graph.vertex_count(); ++i) {
    const std::uint8_t* row = graph.adjacency_row(i);
    for (int j = i + 1; j < graph.vertex_count(); ++j) {
      if (row[j]) {
        out << graph.original_id(i) << ' ' << graph.original_id(j) << '\n';
      }
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_labels(const LabeledGraph& graph, const std::filesystem::path& path,
                  bool include_truth) {
  std::ofstream out = open_output(path);
  for (int u = 0; u < graph.seed_count(); ++u) {
    out << graph.original_id(u) << ' ' << graph.seed_labels()[u] + 1 << '\n';
  }
  if (include_truth) {
    for (int v = graph.seed_count(); v < graph.vertex_count(); ++v) {
      out << graph.original_id(v) << ' ' << graph.true_label(v) + 1 << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace vn
