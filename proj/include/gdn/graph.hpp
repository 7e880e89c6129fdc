#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "gdn/types.hpp"

namespace gdn {

struct Edge {
  Index u;
  Index v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted graph. Each undirected edge is kept once in
/// `edges()` (with u < v) and twice in the symmetric CSR adjacency.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Builds a graph from an arbitrary edge list. Reversed and repeated pairs
  /// are merged. Throws UsageError on self-loops or out-of-range indices.
  static SparseGraph from_edges(Index n_nodes, std::span<const Edge> edges);

  Index num_nodes() const { return n_nodes_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> neighbors(Index node) const {
    return std::span<const Index>(col_indices_).subspan(
        static_cast<std::size_t>(row_offsets_[node]),
        static_cast<std::size_t>(row_offsets_[node + 1] - row_offsets_[node]));
  }
  Index degree(Index node) const {
    return row_offsets_[node + 1] - row_offsets_[node];
  }
  bool has_edge(Index u, Index v) const;

  /// Dense symmetric adjacency; for oracles on small graphs only.
  Matrix dense_adjacency() const;

  /// Checks the structural invariants (symmetry, sorted rows, no loops).
  bool is_valid() const;

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  Index n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// Parses the edge-list text format: one "u v" pair per line, `#` starts a
/// comment, and an optional leading "nodes N" header fixes the node count.
SparseGraph parse_edge_list(std::istream& in);
SparseGraph load_edge_list(const std::filesystem::path& path);
void write_edge_list(const SparseGraph& g, std::ostream& out);

/// DropEdge: retains each undirected edge independently with probability
/// `keep_prob`.
SparseGraph drop_edge(const SparseGraph& g, double keep_prob, Rng& rng);

/// The two readings of a "DropEdge rate" hyper-parameter.
enum class DropEdgeSemantics { keep, drop };

inline double keep_probability(double rate, DropEdgeSemantics semantics) {
  return semantics == DropEdgeSemantics::keep ? rate : 1.0 - rate;
}

/// Disjoint union; node ids of `b` are shifted by a.num_nodes().
SparseGraph disjoint_union(const SparseGraph& a, const SparseGraph& b);

}  // namespace gdn
