#include "gdn/spectral.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gdn/error.hpp"

namespace gdn {

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::inverse: return "inverse";
    case FilterKind::heat: return "heat";
    case FilterKind::inverse_heat: return "inverse_heat";
    case FilterKind::custom: return "custom";
  }
  return "custom";
}

double PolynomialFilter::operator()(double lambda) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

PolynomialFilter maclaurin_inverse(std::size_t order) {
  return {std::vector<double>(order + 1, 1.0), FilterKind::inverse, 0.0};
}

PolynomialFilter heat_filter(double s, std::size_t order, bool inverse) {
  if (!(s > 0.0) || !std::isfinite(s)) throw UsageError("heat kernel scale must be positive");
  std::vector<double> coeffs(order + 1);
  const double step = inverse ? s : -s;
  double term = 1.0;
  for (std::size_t n = 0; n <= order; ++n) {
    coeffs[n] = term;
    term *= step / static_cast<double>(n + 1);
  }
  return {std::move(coeffs), inverse ? FilterKind::inverse_heat : FilterKind::heat, s};
}

PolynomialFilter gcn_filter() { return {{1.0, -1.0}, FilterKind::custom, 0.0}; }

PolynomialFilter identity_filter() { return {{1.0}, FilterKind::custom, 0.0}; }

namespace {

template <typename Step>
Matrix polynomial_chain(const PolynomialFilter& f, const Matrix& x, Step&& step) {
  if (f.coeffs.empty()) return Matrix::Zero(x.rows(), x.cols());
  Matrix acc = f.coeffs[0] * x;
  Matrix power = x;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k) {
    power = step(power);
    acc += f.coeffs[k] * power;
  }
  return acc;
}

}  // namespace

Matrix apply_filter(const LaplacianOperator& op, const PolynomialFilter& f, const Matrix& x) {
  if (x.rows() != op.num_nodes()) {
    throw UsageError("apply_filter: input has " + std::to_string(x.rows()) + " rows, expected " +
                     std::to_string(op.num_nodes()));
  }
  return polynomial_chain(f, x, [&](const Matrix& y) { return op.apply(y); });
}

Matrix apply_filter_adjoint(const LaplacianOperator& op, const PolynomialFilter& f,
                            const Matrix& x) {
  if (op.is_symmetric()) return apply_filter(op, f, x);
  if (x.rows() != op.num_nodes()) throw UsageError("apply_filter_adjoint: dimension mismatch");
  return polynomial_chain(f, x, [&](const Matrix& y) { return op.apply_adjoint(y); });
}

EigenSystem eigen_decompose(const LaplacianOperator& op, Index size_limit) {
  if (op.num_nodes() > size_limit) {
    throw UsageError("eigen_decompose: " + std::to_string(op.num_nodes()) +
                     " nodes exceeds oracle limit " + std::to_string(size_limit));
  }
  if (!op.is_symmetric()) throw UsageError("eigen_decompose: requires the symmetric Laplacian");
  const Matrix l = op.dense();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen_decompose: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

Vector kernel_response(const EigenSystem& es, const SpectralKernel& kernel) {
  Vector response(es.eigenvalues.size());
  for (Index i = 0; i < response.size(); ++i) {
    response[i] = kernel(es.eigenvalues[i]);
    if (!std::isfinite(response[i])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "spectral kernel is not finite at eigenvalue lambda=" << es.eigenvalues[i]
          << " (index " << i << ")";
      throw NumericalError(msg.str());
    }
  }
  return response;
}

}  // namespace

Matrix exact_filter_matrix(const EigenSystem& es, const SpectralKernel& kernel) {
  const Vector response = kernel_response(es, kernel);
  return es.eigenvectors * response.asDiagonal() * es.eigenvectors.transpose();
}

Matrix exact_filter_apply(const EigenSystem& es, const SpectralKernel& kernel, const Matrix& x) {
  if (x.rows() != es.eigenvalues.size()) throw UsageError("exact_filter_apply: dimension mismatch");
  const Vector response = kernel_response(es, kernel);
  const Matrix coefficients = es.eigenvectors.transpose() * x;
  return es.eigenvectors * (response.asDiagonal() * coefficients);
}

Vector graph_fourier(const EigenSystem& es, const Vector& x) {
  if (x.size() != es.eigenvalues.size()) throw UsageError("graph_fourier: dimension mismatch");
  return es.eigenvectors.transpose() * x;
}

double high_frequency_energy_fraction(const EigenSystem& es, const Matrix& x, double threshold) {
  if (x.rows() != es.eigenvalues.size()) throw UsageError("energy fraction: dimension mismatch");
  const Matrix coefficients = es.eigenvectors.transpose() * x;
  const Vector energy = coefficients.rowwise().squaredNorm();
  const double total = energy.sum();
  if (total == 0.0) return 0.0;
  double high = 0.0;
  for (Index i = 0; i < energy.size(); ++i) {
    if (es.eigenvalues[i] > threshold) high += energy[i];
  }
  return high / total;
}

double exact_inverse_kernel(double lambda, double guard) {
  const double gap = 1.0 - lambda;
  if (std::abs(gap) <= guard) return std::numeric_limits<double>::infinity();
  return 1.0 / gap;
}

}  // namespace gdn
