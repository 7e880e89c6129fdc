#pragma once

#include <vector>

#include "gdn/graph.hpp"

namespace gdn {

SparseGraph path_graph(Index n);
SparseGraph complete_graph(Index n);
SparseGraph empty_graph(Index n);

/// G(n, p): every unordered pair independently with probability p.
SparseGraph erdos_renyi(Index n, double p, Rng& rng);

/// Stochastic block model; `block_of` (optional) receives each node's block.
SparseGraph stochastic_block_model(const std::vector<Index>& block_sizes, double p_in,
                                   double p_out, Rng& rng, std::vector<Index>* block_of = nullptr);

/// Random tree on n nodes (uniform attachment) plus `extra_edges` random
/// chords; connected, molecule-like sparsity.
SparseGraph random_tree_with_chords(Index n, Index extra_edges, Rng& rng);

}  // namespace gdn
