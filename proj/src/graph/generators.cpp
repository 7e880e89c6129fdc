#include "gdn/generators.hpp"

#include "gdn/error.hpp"

namespace gdn {

SparseGraph path_graph(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return SparseGraph::from_edges(n, edges);
}

SparseGraph complete_graph(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return SparseGraph::from_edges(n, edges);
}

SparseGraph empty_graph(Index n) { return SparseGraph::from_edges(n, {}); }

SparseGraph erdos_renyi(Index n, double p, Rng& rng) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw UsageError("erdos_renyi: invalid parameters");
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.push_back({i, j});
    }
  }
  return SparseGraph::from_edges(n, edges);
}

SparseGraph stochastic_block_model(const std::vector<Index>& block_sizes, double p_in,
                                   double p_out, Rng& rng, std::vector<Index>* block_of) {
  std::vector<Index> block;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] < 0) throw UsageError("stochastic_block_model: negative block size");
    block.insert(block.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<Index>(b));
  }
  const Index n = static_cast<Index>(block.size());
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)]
                           ? p_in
                           : p_out;
      if (uniform01(rng) < p) edges.push_back({i, j});
    }
  }
  if (block_of != nullptr) *block_of = std::move(block);
  return SparseGraph::from_edges(n, edges);
}

SparseGraph random_tree_with_chords(Index n, Index extra_edges, Rng& rng) {
  if (n < 1) throw UsageError("random_tree_with_chords: need at least one node");
  std::vector<Edge> edges;
  for (Index i = 1; i < n; ++i) {
    const Index parent = static_cast<Index>(rng() % static_cast<std::uint64_t>(i));
    edges.push_back({parent, i});
  }
  // Chords may repeat an existing edge; from_edges merges duplicates.
  for (Index k = 0; k < extra_edges && n > 2; ++k) {
    const Index u = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    const Index v = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    if (u != v) edges.push_back({u, v});
  }
  return SparseGraph::from_edges(n, edges);
}

}  // namespace gdn
