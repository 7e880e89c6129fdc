#include "gdn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "gdn/error.hpp"

namespace gdn {

SparseGraph SparseGraph::from_edges(Index n_nodes, std::span<const Edge> edges) {
  if (n_nodes < 0) throw UsageError("negative node count");
  SparseGraph g;
  g.n_nodes_ = n_nodes;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
      throw UsageError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range for " + std::to_string(n_nodes) + " nodes");
    }
    if (e.u == e.v) {
      throw UsageError("self-loop at node " + std::to_string(e.u) + " rejected");
    }
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<Index> degree(static_cast<std::size_t>(n_nodes), 0);
  for (const Edge& e : g.edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  g.row_offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
  for (Index i = 0; i < n_nodes; ++i) {
    g.row_offsets_[static_cast<std::size_t>(i) + 1] =
        g.row_offsets_[static_cast<std::size_t>(i)] + degree[static_cast<std::size_t>(i)];
  }
  g.col_indices_.resize(2 * g.edges_.size());
  g.values_.assign(2 * g.edges_.size(), 1.0);
  std::vector<Index> cursor(g.row_offsets_.begin(), g.row_offsets_.end() - 1);
  // Edges are sorted by (u, v), so appending u->v in this order keeps rows
  // sorted for the upper part; the lower part is sorted per row afterwards.
  for (const Edge& e : g.edges_) {
    g.col_indices_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = e.v;
    g.col_indices_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = e.u;
  }
  for (Index i = 0; i < n_nodes; ++i) {
    auto first = g.col_indices_.begin() + g.row_offsets_[static_cast<std::size_t>(i)];
    auto last = g.col_indices_.begin() + g.row_offsets_[static_cast<std::size_t>(i) + 1];
    std::sort(first, last);
  }
  return g;
}

bool SparseGraph::has_edge(Index u, Index v) const {
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

Matrix SparseGraph::dense_adjacency() const {
  Matrix a = Matrix::Zero(n_nodes_, n_nodes_);
  for (Index i = 0; i < n_nodes_; ++i) {
    for (Index k = row_offsets_[static_cast<std::size_t>(i)];
         k < row_offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
      a(i, col_indices_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    }
  }
  return a;
}

bool SparseGraph::is_valid() const {
  if (row_offsets_.size() != static_cast<std::size_t>(n_nodes_) + 1) return false;
  if (row_offsets_.front() != 0) return false;
  if (static_cast<std::size_t>(row_offsets_.back()) != col_indices_.size()) return false;
  if (col_indices_.size() != 2 * edges_.size()) return false;
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (!(edges_[i] < edges_[i + 1])) return false;
  }
  for (const Edge& e : edges_) {
    if (e.u >= e.v || e.u < 0 || e.v >= n_nodes_) return false;
  }
  for (Index i = 0; i < n_nodes_; ++i) {
    if (row_offsets_[static_cast<std::size_t>(i)] > row_offsets_[static_cast<std::size_t>(i) + 1]) {
      return false;
    }
    const auto row = neighbors(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] == i) return false;
      if (k > 0 && row[k - 1] >= row[k]) return false;
      if (!has_edge(row[k], i)) return false;
    }
  }
  return true;
}

namespace {

[[noreturn]] void parse_failure(std::size_t line_no, const std::string& what) {
  throw IoError("edge list line " + std::to_string(line_no) + ": " + what);
}

Index parse_index(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range ||
      value > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
    parse_failure(line_no, "node index overflow in '" + std::string(token) + "'");
  }
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_failure(line_no, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return static_cast<Index>(value);
}

}  // namespace

SparseGraph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  Index declared = -1;
  Index max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a;
    std::string b;
    std::string extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) parse_failure(line_no, "expected two fields");
    if (fields >> extra) parse_failure(line_no, "unexpected third field '" + extra + "'");
    if (a == "nodes") {
      if (seen_content) parse_failure(line_no, "'nodes' header must come first");
      declared = parse_index(b, line_no);
      seen_content = true;
      continue;
    }
    seen_content = true;
    const Index u = parse_index(a, line_no);
    const Index v = parse_index(b, line_no);
    if (u == v) parse_failure(line_no, "self-loop at node " + std::to_string(u) + " rejected");
    max_index = std::max({max_index, u, v});
    edges.push_back({u, v});
  }
  if (declared >= 0 && max_index >= declared) {
    throw IoError("edge list: node index " + std::to_string(max_index) +
                  " exceeds declared count " + std::to_string(declared));
  }
  const Index n = declared >= 0 ? declared : max_index + 1;
  if (n <= 0) throw IoError("edge list: empty graph");
  return SparseGraph::from_edges(n, edges);
}

SparseGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path.string() + "'");
  return parse_edge_list(in);
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
  out << "nodes " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

SparseGraph drop_edge(const SparseGraph& g, double keep_prob, Rng& rng) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) {
    throw UsageError("keep_prob must lie in [0,1]");
  }
  if (keep_prob == 1.0) return g;
  std::vector<Edge> kept;
  kept.reserve(static_cast<std::size_t>(static_cast<double>(g.num_edges()) * keep_prob) + 1);
  for (const Edge& e : g.edges()) {
    if (uniform01(rng) < keep_prob) kept.push_back(e);
  }
  return SparseGraph::from_edges(g.num_nodes(), kept);
}

SparseGraph disjoint_union(const SparseGraph& a, const SparseGraph& b) {
  std::vector<Edge> edges(a.edges().begin(), a.edges().end());
  for (const Edge& e : b.edges()) {
    edges.push_back({e.u + a.num_nodes(), e.v + a.num_nodes()});
  }
  return SparseGraph::from_edges(a.num_nodes() + b.num_nodes(), edges);
}

}  // namespace gdn
