#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "gdn/error.hpp"
#include "gdn/generation.hpp"
#include "gdn/generators.hpp"

namespace gdn {

Matrix GraphDataset::features(std::size_t g) const {
  const LabeledGraph& lg = graphs.at(g);
  Matrix x = Matrix::Zero(lg.graph.num_nodes(), num_node_labels);
  for (std::size_t i = 0; i < lg.node_labels.size(); ++i) {
    x(static_cast<Index>(i), lg.node_labels[i]) = 1.0;
  }
  return x;
}

namespace {

std::vector<std::vector<long long>> read_int_rows(const std::filesystem::path& path,
                                                  std::size_t width, bool required) {
  std::ifstream in(path);
  if (!in) {
    if (required) throw IoError("cannot open " + path.string());
    return {};
  }
  std::vector<std::vector<long long>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<long long> row;
    for (long long v; fields >> v;) row.push_back(v);
    if (row.empty() && fields.eof()) continue;
    if (!fields.eof() || row.size() != width) {
      throw IoError(path.filename().string() + ": malformed line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Remaps raw label values to 0..k-1 in increasing order.
int compact_labels(std::vector<LabeledGraph>& graphs) {
  std::map<int, int> ids;
  for (const auto& g : graphs) {
    for (int l : g.node_labels) ids.emplace(l, 0);
  }
  int next = 0;
  for (auto& [raw, id] : ids) id = next++;
  for (auto& g : graphs) {
    for (int& l : g.node_labels) l = ids[l];
  }
  return next;
}

}  // namespace

GraphDataset load_tu_dataset(const std::filesystem::path& dir, const std::string& name) {
  const auto indicator = read_int_rows(dir / (name + "_graph_indicator.txt"), 1, true);
  const auto adjacency = read_int_rows(dir / (name + "_A.txt"), 2, true);
  const auto node_labels = read_int_rows(dir / (name + "_node_labels.txt"), 1, true);
  const auto graph_labels = read_int_rows(dir / (name + "_graph_labels.txt"), 1, false);
  if (node_labels.size() != indicator.size()) {
    throw IoError(name + ": node label count does not match the graph indicator");
  }

  GraphDataset data;
  data.name = name;
  std::vector<Index> graph_of(indicator.size());
  std::vector<Index> local(indicator.size());
  std::vector<std::vector<Edge>> edges;
  for (std::size_t v = 0; v < indicator.size(); ++v) {
    const long long g = indicator[v][0];
    if (g < 1) throw IoError(name + ": graph ids must start at 1");
    const auto gi = static_cast<std::size_t>(g - 1);
    if (gi > data.graphs.size()) throw IoError(name + ": graph ids are not contiguous");
    if (gi == data.graphs.size()) {
      data.graphs.emplace_back();
      edges.emplace_back();
    }
    graph_of[v] = static_cast<Index>(gi);
    local[v] = static_cast<Index>(data.graphs[gi].node_labels.size());
    data.graphs[gi].node_labels.push_back(static_cast<int>(node_labels[v][0]));
  }
  for (const auto& row : adjacency) {
    const long long a = row[0] - 1;
    const long long b = row[1] - 1;
    if (a < 0 || b < 0 || a >= static_cast<long long>(indicator.size()) ||
        b >= static_cast<long long>(indicator.size())) {
      throw IoError(name + ": edge endpoint out of range");
    }
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    if (graph_of[ua] != graph_of[ub]) throw IoError(name + ": edge joins two graphs");
    if (ua == ub) continue;
    edges[static_cast<std::size_t>(graph_of[ua])].push_back({local[ua], local[ub]});
  }
  for (std::size_t g = 0; g < data.graphs.size(); ++g) {
    auto& lg = data.graphs[g];
    lg.graph = SparseGraph::from_edges(static_cast<Index>(lg.node_labels.size()), edges[g]);
    if (!graph_labels.empty()) {
      if (graph_labels.size() != data.graphs.size()) throw IoError(name + ": graph label count mismatch");
      lg.graph_label = static_cast<int>(graph_labels[g][0]);
    }
  }
  data.num_node_labels = compact_labels(data.graphs);
  return data;
}

GraphDataset parse_graph_blocks(std::istream& in) {
  GraphDataset data;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::istringstream& fields) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields = std::istringstream(line);
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> void {
    throw IoError("graph blocks: " + what + " at line " + std::to_string(line_no));
  };
  std::istringstream fields;
  while (next_line(fields)) {
    std::string tag;
    long long n = -1, m = -1;
    fields >> tag >> n >> m;
    if (tag != "graph" || fields.fail() || n < 1 || m < 0) fail("expected 'graph <n> <m> [label]'");
    LabeledGraph lg;
    if (!(fields >> lg.graph_label)) lg.graph_label = 0;
    for (long long i = 0; i < n; ++i) {
      int label = 0;
      if (!next_line(fields) || !(fields >> label) || label < 0) fail("expected a node label");
      lg.node_labels.push_back(label);
    }
    std::vector<Edge> edges;
    for (long long e = 0; e < m; ++e) {
      long long u = -1, v = -1;
      if (!next_line(fields) || !(fields >> u >> v)) fail("expected an edge");
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) fail("invalid edge");
      edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
    }
    lg.graph = SparseGraph::from_edges(static_cast<Index>(n), edges);
    data.graphs.push_back(std::move(lg));
  }
  if (data.graphs.empty()) throw IoError("graph blocks: no graphs");
  for (const auto& g : data.graphs) {
    for (int l : g.node_labels) data.num_node_labels = std::max(data.num_node_labels, l + 1);
  }
  return data;
}

void write_graph_blocks(std::ostream& out, const GraphDataset& data) {
  for (const auto& g : data.graphs) {
    out << "graph " << g.graph.num_nodes() << ' ' << g.graph.num_edges() << ' ' << g.graph_label
        << '\n';
    for (int l : g.node_labels) out << l << '\n';
    for (const Edge& e : g.graph.edges()) out << e.u << ' ' << e.v << '\n';
  }
}

GraphDataset load_graph_dataset(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      const std::string file = entry.path().filename().string();
      const std::string suffix = "_A.txt";
      if (file.size() > suffix.size() && file.ends_with(suffix)) {
        return load_tu_dataset(path, file.substr(0, file.size() - suffix.size()));
      }
    }
    throw IoError("no *_A.txt file in " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  GraphDataset data = parse_graph_blocks(in);
  data.name = path.stem().string();
  return data;
}

GraphDataset synthetic_molecules(std::size_t count, std::uint64_t seed) {
  GraphDataset data;
  data.name = "synthetic-molecules";
  data.num_node_labels = 7;
  Rng rng = make_rng(seed, 50);
  for (std::size_t g = 0; g < count; ++g) {
    const auto n = static_cast<Index>(12 + static_cast<Index>(uniform01(rng) * 13.0));
    const auto chords = static_cast<Index>(uniform01(rng) * 3.0);
    LabeledGraph lg;
    lg.graph = random_tree_with_chords(n, chords, rng);
    lg.graph_label = static_cast<int>(chords > 0);
    for (Index v = 0; v < n; ++v) {
      const Index deg = lg.graph.degree(v);
      int label;
      if (deg == 1) {
        label = uniform01(rng) < 0.5 ? 2 : 3 + static_cast<int>(uniform01(rng) * 4.0);
      } else if (deg == 2) {
        label = uniform01(rng) < 0.85 ? 0 : 1;
      } else {
        label = uniform01(rng) < 0.7 ? 1 : 0;
      }
      lg.node_labels.push_back(label);
    }
    data.graphs.push_back(std::move(lg));
  }
  return data;
}

}  // namespace gdn
