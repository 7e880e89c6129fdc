#pragma once

#include <memory>

#include "gdn/graph.hpp"

namespace gdn {

enum class Normalization {
  symmetric,  // L = I - D^-1/2 A D^-1/2
  left,       // L = I - D^-1 A
};

/// Normalized Laplacian of a SparseGraph, applied matrix-free. Zero-degree
/// nodes get a zero scaling factor, so their rows and columns of L are zero.
class LaplacianOperator {
 public:
  LaplacianOperator(std::shared_ptr<const SparseGraph> graph,
                    Normalization kind = Normalization::symmetric,
                    bool self_loops = false);
  explicit LaplacianOperator(const SparseGraph& graph,
                             Normalization kind = Normalization::symmetric,
                             bool self_loops = false);

  Index num_nodes() const { return graph_->num_nodes(); }
  Normalization kind() const { return kind_; }
  bool self_loops() const { return self_loops_; }
  bool is_symmetric() const { return kind_ == Normalization::symmetric; }
  const SparseGraph& graph() const { return *graph_; }

  /// L X.
  Matrix apply(const Matrix& x) const;
  /// L^T X. Identical to apply() for the symmetric kind.
  Matrix apply_adjoint(const Matrix& x) const;
  /// (I - L) X, i.e. the normalized adjacency (the GCN propagation matrix).
  Matrix propagate(const Matrix& x) const;
  Matrix propagate_adjoint(const Matrix& x) const;

  /// Materialized L; oracle use only.
  Matrix dense() const;

 private:
  // out = S X or S^T X, where S is the scaled adjacency (self loops included
  // when enabled).
  void scaled_adjacency(const Matrix& x, Matrix& out, bool transpose) const;

  std::shared_ptr<const SparseGraph> graph_;
  Normalization kind_;
  bool self_loops_;
  Vector left_scale_;   // per-row factor
  Vector right_scale_;  // per-column factor
  Vector self_weight_;  // diagonal of the scaled adjacency
};

}  // namespace gdn
