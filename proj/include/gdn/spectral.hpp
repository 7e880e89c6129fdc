#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gdn/laplacian.hpp"

namespace gdn {

enum class FilterKind { inverse, heat, inverse_heat, custom };

std::string to_string(FilterKind kind);

/// p(L) = sum_n coeffs[n] L^n.
struct PolynomialFilter {
  std::vector<double> coeffs;
  FilterKind kind = FilterKind::custom;
  double scale = 0.0;  // heat kernels only

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  /// Horner evaluation of the scalar response p(lambda).
  double operator()(double lambda) const;
};

/// Truncated Maclaurin series of 1/(1 - lambda): all coefficients 1.
PolynomialFilter maclaurin_inverse(std::size_t order);

/// Truncated heat kernel exp(-s lambda), or exp(+s lambda) when `inverse`.
PolynomialFilter heat_filter(double s, std::size_t order, bool inverse);

/// The GCN propagation kernel 1 - lambda.
PolynomialFilter gcn_filter();

PolynomialFilter identity_filter();

/// sum_k c_k L^k X through the recurrence Y_{k+1} = L Y_k. Never forms a
/// dense n x n matrix.
Matrix apply_filter(const LaplacianOperator& op, const PolynomialFilter& f, const Matrix& x);

/// p(L)^T X. Equals apply_filter() for symmetric operators.
Matrix apply_filter_adjoint(const LaplacianOperator& op, const PolynomialFilter& f,
                            const Matrix& x);

// ---------------------------------------------------------------------------
// Dense eigen oracle.

inline constexpr Index kDefaultOracleLimit = 2048;

struct EigenSystem {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns
};

EigenSystem eigen_decompose(const LaplacianOperator& op, Index size_limit = kDefaultOracleLimit);

using SpectralKernel = std::function<double(double)>;

/// U diag(kernel(lambda)) U^T X. Throws NumericalError naming the eigenvalue
/// at which the kernel is not finite.
Matrix exact_filter_apply(const EigenSystem& es, const SpectralKernel& kernel, const Matrix& x);

/// Dense U diag(kernel(lambda)) U^T.
Matrix exact_filter_matrix(const EigenSystem& es, const SpectralKernel& kernel);

/// Graph Fourier coefficients U^T x.
Vector graph_fourier(const EigenSystem& es, const Vector& x);

/// Fraction of spectral energy (summed over all columns of X) carried by
/// eigenvalues strictly above `threshold`.
double high_frequency_energy_fraction(const EigenSystem& es, const Matrix& x,
                                      double threshold = 1.0);

/// Exact inverse of the GCN kernel, 1/(1 - lambda). Returns +inf within
/// `guard` of the pole so that callers reject it instead of amplifying
/// round-off.
double exact_inverse_kernel(double lambda, double guard = 1e-8);

}  // namespace gdn
