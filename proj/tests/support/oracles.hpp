#pragma once

// Test-only reference implementations. Everything here is computed from
// first principles (dense matrices, brute force, finite differences) and must
// not call into the code paths it is used to check.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gdn/graph.hpp"

namespace gdn::testing {

/// D^-1/2 (D - A) D^-1/2 from the dense adjacency, zero scaling for
/// isolated nodes.
inline Matrix dense_normalized_laplacian(const Matrix& adjacency) {
  const Index n = adjacency.rows();
  const Vector degree = adjacency.rowwise().sum();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) inv_sqrt[i] = degree[i] > 0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
  const Matrix lap = Matrix(degree.asDiagonal()) - adjacency;
  return inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();
}

struct DenseSpectrum {
  Vector values;
  Matrix vectors;
};

inline DenseSpectrum dense_spectrum(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// U diag(f(lambda)) U^T X from a dense spectrum.
inline Matrix spectral_apply(const DenseSpectrum& s, const std::function<double(double)>& f,
                             const Matrix& x) {
  Vector response(s.values.size());
  for (Index i = 0; i < response.size(); ++i) response[i] = f(s.values[i]);
  return s.vectors * response.asDiagonal() * s.vectors.transpose() * x;
}

inline SparseGraph random_graph(Index n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.push_back({i, j});
    }
  }
  return SparseGraph::from_edges(n, edges);
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
  }
  return m;
}

/// Central finite differences of a scalar function with respect to every
/// entry of `param` (restored afterwards).
inline Matrix finite_difference(Matrix& param, const std::function<double()>& loss,
                                double h = 1e-5) {
  Matrix grad(param.rows(), param.cols());
  for (Index i = 0; i < param.rows(); ++i) {
    for (Index j = 0; j < param.cols(); ++j) {
      const double saved = param(i, j);
      param(i, j) = saved + h;
      const double up = loss();
      param(i, j) = saved - h;
      const double down = loss();
      param(i, j) = saved;
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

/// max_ij |a - b| / max(|a|, |b|, floor).
inline double max_relative_error(const Matrix& analytic, const Matrix& numeric,
                                 double floor = 1e-7) {
  double worst = 0.0;
  for (Index i = 0; i < analytic.rows(); ++i) {
    for (Index j = 0; j < analytic.cols(); ++j) {
      const double a = analytic(i, j);
      const double b = numeric(i, j);
      const double denom = std::max({std::abs(a), std::abs(b), floor});
      worst = std::max(worst, std::abs(a - b) / denom);
    }
  }
  return worst;
}

}  // namespace gdn::testing
