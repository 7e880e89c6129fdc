#include "gdn/laplacian.hpp"

#include <cmath>
#include <string>

#include "gdn/error.hpp"

namespace gdn {

LaplacianOperator::LaplacianOperator(const SparseGraph& graph, Normalization kind,
                                     bool self_loops)
    : LaplacianOperator(std::make_shared<const SparseGraph>(graph), kind, self_loops) {}

LaplacianOperator::LaplacianOperator(std::shared_ptr<const SparseGraph> graph,
                                     Normalization kind, bool self_loops)
    : graph_(std::move(graph)), kind_(kind), self_loops_(self_loops) {
  const Index n = graph_->num_nodes();
  left_scale_.resize(n);
  right_scale_.resize(n);
  self_weight_.setZero(n);
  for (Index i = 0; i < n; ++i) {
    const double deg = static_cast<double>(graph_->degree(i)) + (self_loops_ ? 1.0 : 0.0);
    if (deg == 0.0) {
      left_scale_[i] = 0.0;
      right_scale_[i] = 0.0;
      continue;
    }
    if (kind_ == Normalization::symmetric) {
      left_scale_[i] = 1.0 / std::sqrt(deg);
      right_scale_[i] = left_scale_[i];
    } else {
      left_scale_[i] = 1.0 / deg;
      right_scale_[i] = 1.0;
    }
    if (self_loops_) self_weight_[i] = left_scale_[i] * right_scale_[i];
  }
}

void LaplacianOperator::scaled_adjacency(const Matrix& x, Matrix& out, bool transpose) const {
  if (x.rows() != num_nodes()) {
    throw UsageError("Laplacian: input has " + std::to_string(x.rows()) + " rows, graph has " +
                     std::to_string(num_nodes()) + " nodes");
  }
  const auto offsets = graph_->row_offsets();
  const auto cols = graph_->col_indices();
  const auto vals = graph_->values();
  // S = diag(l) A diag(r) (+ self weights); S^T swaps the roles of l and r.
  const Vector& outer = transpose ? right_scale_ : left_scale_;
  const Vector& inner = transpose ? left_scale_ : right_scale_;
  out.resize(x.rows(), x.cols());
  for (Index i = 0; i < num_nodes(); ++i) {
    auto row = out.row(i);
    row = self_weight_[i] * x.row(i);
    for (Index k = offsets[static_cast<std::size_t>(i)]; k < offsets[static_cast<std::size_t>(i) + 1];
         ++k) {
      const Index j = cols[static_cast<std::size_t>(k)];
      row += (outer[i] * vals[static_cast<std::size_t>(k)] * inner[j]) * x.row(j);
    }
  }
}

Matrix LaplacianOperator::propagate(const Matrix& x) const {
  Matrix out;
  scaled_adjacency(x, out, false);
  // Isolated nodes have a zero Laplacian row, so I - L keeps them.
  for (Index i = 0; i < num_nodes(); ++i) {
    if (left_scale_[i] == 0.0) out.row(i) = x.row(i);
  }
  return out;
}

Matrix LaplacianOperator::propagate_adjoint(const Matrix& x) const {
  if (is_symmetric()) return propagate(x);
  Matrix out;
  scaled_adjacency(x, out, true);
  for (Index i = 0; i < num_nodes(); ++i) {
    if (left_scale_[i] == 0.0) out.row(i) = x.row(i);
  }
  return out;
}

Matrix LaplacianOperator::apply(const Matrix& x) const {
  Matrix out;
  scaled_adjacency(x, out, false);
  for (Index i = 0; i < num_nodes(); ++i) {
    if (left_scale_[i] != 0.0) {
      out.row(i) = x.row(i) - out.row(i);
    } else {
      out.row(i).setZero();
    }
  }
  return out;
}

Matrix LaplacianOperator::apply_adjoint(const Matrix& x) const {
  if (is_symmetric()) return apply(x);
  Matrix out;
  scaled_adjacency(x, out, true);
  for (Index i = 0; i < num_nodes(); ++i) {
    if (left_scale_[i] != 0.0) {
      out.row(i) = x.row(i) - out.row(i);
    } else {
      out.row(i).setZero();
    }
  }
  return out;
}

Matrix LaplacianOperator::dense() const {
  return apply(Matrix::Identity(num_nodes(), num_nodes()));
}

}  // namespace gdn
