#include <cmath>

#include "doctest.h"
#include "gdn/error.hpp"
#include "gdn/generators.hpp"
#include "gdn/spectral.hpp"
#include "../support/oracles.hpp"

using namespace gdn;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix x(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) x(i++, 0) = v;
  return x;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("maclaurin_inverse") {
  const PolynomialFilter f3 = maclaurin_inverse(3);
  CHECK(f3.coeffs == std::vector<double>{1, 1, 1, 1});
  CHECK(f3(1.0) == 4.0);
  CHECK(f3(2.0) == 15.0);
  CHECK(f3(0.0) == 1.0);
  CHECK(maclaurin_inverse(0).coeffs == std::vector<double>{1});
  const PolynomialFilter f1 = maclaurin_inverse(1);
  CHECK(f1.coeffs == std::vector<double>{1, 1});
  CHECK(f1(0.7) == doctest::Approx(1.7));
}

TEST_CASE("heat_filter coefficients") {
  const PolynomialFilter fwd = heat_filter(1.0, 3, false);
  REQUIRE(fwd.coeffs.size() == 4);
  CHECK(fwd.coeffs[0] == 1.0);
  CHECK(fwd.coeffs[1] == -1.0);
  CHECK(fwd.coeffs[2] == 0.5);
  CHECK(fwd.coeffs[3] == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
  CHECK(fwd(0.0) == 1.0);
  CHECK(fwd(2.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(fwd(2.0) - std::exp(-2.0)) == doctest::Approx(0.4687).epsilon(1e-3));

  const PolynomialFilter inv = heat_filter(1.0, 3, true);
  CHECK(inv.coeffs[1] == 1.0);
  CHECK(inv.coeffs[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(inv(2.0) == doctest::Approx(19.0 / 3.0).epsilon(1e-14));
  CHECK(inv.kind == FilterKind::inverse_heat);
  CHECK(heat_filter(2.0, 4, false).coeffs[4] == doctest::Approx(16.0 / 24.0));
  CHECK_THROWS_AS(heat_filter(0.0, 3, false), UsageError);
}

TEST_CASE("apply_filter: K2 examples") {
  const LaplacianOperator op(complete_graph(2));
  const Matrix inv = apply_filter(op, maclaurin_inverse(3), column({1, 0}));
  CHECK(max_abs(inv - column({8, -7})) < 1e-14);
  const Matrix heat = apply_filter(op, heat_filter(1.0, 3, false), column({1, 0}));
  CHECK(max_abs(heat - column({1.0 / 3.0, 2.0 / 3.0})) < 1e-14);
  CHECK(apply_filter(op, maclaurin_inverse(0), column({0.3, -2})) == column({0.3, -2}));
  CHECK_THROWS_AS(apply_filter(op, maclaurin_inverse(3), column({1, 2, 3})), UsageError);
}

TEST_CASE("apply_filter matches the eigen oracle on random graphs") {
  Rng rng = make_rng(101);
  const std::vector<PolynomialFilter> filters = {maclaurin_inverse(1), maclaurin_inverse(3),
                                                 heat_filter(1.0, 3, false),
                                                 heat_filter(1.0, 10, false),
                                                 heat_filter(1.0, 3, true), gcn_filter()};
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 63);
    const SparseGraph g = testing::random_graph(n, uniform(rng, 0.02, 0.3), rng);
    const LaplacianOperator op(g);
    const auto spectrum =
        testing::dense_spectrum(testing::dense_normalized_laplacian(g.dense_adjacency()));
    const Matrix x = testing::random_matrix(n, 4, rng);
    for (const auto& f : filters) {
      const Matrix expected = testing::spectral_apply(spectrum, f, x);
      const Matrix actual = apply_filter(op, f, x);
      CHECK((actual - expected).norm() / expected.norm() <= 1e-10);
    }
  }
}

TEST_CASE("apply_filter is linear and self-adjoint") {
  Rng rng = make_rng(7);
  const SparseGraph g = erdos_renyi(48, 0.12, rng);
  const LaplacianOperator op(g);
  const PolynomialFilter f = maclaurin_inverse(3);
  const Matrix x = testing::random_matrix(48, 3, rng);
  const Matrix y = testing::random_matrix(48, 3, rng);
  const Matrix lhs = apply_filter(op, f, 2.5 * x - 0.75 * y);
  const Matrix rhs = 2.5 * apply_filter(op, f, x) - 0.75 * apply_filter(op, f, y);
  CHECK(max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, max_abs(rhs)));
  const double a = (apply_filter(op, f, x).array() * y.array()).sum();
  const double b = (x.array() * apply_filter(op, f, y).array()).sum();
  CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
}

TEST_CASE("apply_filter_adjoint for the left-normalized operator") {
  Rng rng = make_rng(8);
  const SparseGraph g = erdos_renyi(30, 0.2, rng);
  const LaplacianOperator op(g, Normalization::left);
  const PolynomialFilter f = maclaurin_inverse(3);
  const Matrix x = testing::random_matrix(30, 2, rng);
  const Matrix y = testing::random_matrix(30, 2, rng);
  const double a = (apply_filter(op, f, x).array() * y.array()).sum();
  const double b = (x.array() * apply_filter_adjoint(op, f, y).array()).sum();
  CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
}

TEST_CASE("eigen_decompose: small graphs") {
  const EigenSystem k2 = eigen_decompose(LaplacianOperator(complete_graph(2)));
  CHECK(k2.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(k2.eigenvalues[1] == doctest::Approx(2.0));
  const EigenSystem p3 = eigen_decompose(LaplacianOperator(path_graph(3)));
  CHECK(std::abs(p3.eigenvalues[0]) < 1e-14);
  CHECK(p3.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(p3.eigenvalues[2] == doctest::Approx(2.0));
  const EigenSystem e3 = eigen_decompose(LaplacianOperator(empty_graph(3)));
  CHECK(e3.eigenvalues.isZero());
  CHECK_THROWS_AS(eigen_decompose(LaplacianOperator(path_graph(10)), 5), UsageError);
}

TEST_CASE("eigen_decompose: orthonormal, reconstructs L") {
  Rng rng = make_rng(31);
  const SparseGraph g = erdos_renyi(40, 0.15, rng);
  const LaplacianOperator op(g);
  const EigenSystem es = eigen_decompose(op);
  const Index n = g.num_nodes();
  CHECK(max_abs(es.eigenvectors.transpose() * es.eigenvectors - Matrix::Identity(n, n)) < 1e-8);
  const Matrix rebuilt =
      es.eigenvectors * es.eigenvalues.asDiagonal() * es.eigenvectors.transpose();
  CHECK(max_abs(rebuilt - op.dense()) < 1e-8);
  for (Index i = 1; i < n; ++i) CHECK(es.eigenvalues[i - 1] <= es.eigenvalues[i]);
}

TEST_CASE("exact_filter_apply") {
  const EigenSystem k2 = eigen_decompose(LaplacianOperator(complete_graph(2)));
  const Matrix x = column({1, 0});
  CHECK(max_abs(exact_filter_apply(k2, [](double) { return 1.0; }, x) - x) < 1e-14);
  const Matrix inv = exact_filter_apply(k2, [](double l) { return exact_inverse_kernel(l); }, x);
  CHECK(max_abs(inv - column({0, 1})) < 1e-12);

  const EigenSystem p3 = eigen_decompose(LaplacianOperator(path_graph(3)));
  CHECK_THROWS_WITH_AS(
      exact_filter_apply(p3, [](double l) { return exact_inverse_kernel(l); }, column({1, 2, 3})),
      doctest::Contains("eigenvalue lambda="), NumericalError);
}

TEST_CASE("graph_fourier") {
  const EigenSystem k2 = eigen_decompose(LaplacianOperator(complete_graph(2)));
  const Vector c = graph_fourier(k2, Vector::Ones(2));
  CHECK(std::abs(std::abs(c[0]) - std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(c[1]) < 1e-14);

  Rng rng = make_rng(4);
  const EigenSystem es = eigen_decompose(LaplacianOperator(erdos_renyi(30, 0.2, rng)));
  CHECK(graph_fourier(es, Vector::Zero(30)).isZero());
  for (int t = 0; t < 10; ++t) {
    const Vector x = testing::random_matrix(30, 1, rng).col(0);
    CHECK(std::abs(graph_fourier(es, x).norm() - x.norm()) <= 1e-10);
  }
  CHECK_THROWS_AS(graph_fourier(es, Vector::Zero(3)), UsageError);
}

TEST_CASE("heat kernel truncation error on [0,2]") {
  double worst3 = 0.0;
  double worst10 = 0.0;
  const PolynomialFilter q3 = heat_filter(1.0, 3, false);
  const PolynomialFilter q10 = heat_filter(1.0, 10, false);
  for (int i = 0; i <= 200; ++i) {
    const double l = 0.01 * i;
    worst3 = std::max(worst3, std::abs(q3(l) - std::exp(-l)));
    worst10 = std::max(worst10, std::abs(q10(l) - std::exp(-l)));
  }
  CHECK(worst3 <= 0.5);
  CHECK(worst10 <= 1e-2);
}

TEST_CASE("wavelet near-inverse Psi Psi^-1 x") {
  Rng rng = make_rng(12);
  const SparseGraph g = erdos_renyi(64, 0.1, rng);
  const LaplacianOperator op(g);
  const Matrix x = testing::random_matrix(64, 2, rng);
  const Matrix round12 =
      apply_filter(op, heat_filter(1.0, 12, false), apply_filter(op, heat_filter(1.0, 12, true), x));
  CHECK(max_abs(round12 - x) <= 1e-4);
  // Order 3 is reported only; its error is bounded by the product of the two
  // truncated series over the spectrum.
  const Matrix round3 =
      apply_filter(op, heat_filter(1.0, 3, false), apply_filter(op, heat_filter(1.0, 3, true), x));
  const EigenSystem es = eigen_decompose(op);
  double bound = 0.0;
  for (Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double l = es.eigenvalues[i];
    bound = std::max(bound, std::abs(heat_filter(1.0, 3, false)(l) * heat_filter(1.0, 3, true)(l) - 1));
  }
  MESSAGE("order-3 wavelet round trip max error " << max_abs(round3 - x) << ", spectral bound "
                                                  << bound);
  CHECK((round3 - x).norm() <= bound * x.norm() + 1e-12);
}

TEST_CASE("truncated inverse error equals lambda^4/(1-lambda) below 1") {
  const PolynomialFilter p = maclaurin_inverse(3);
  for (int i = 0; i <= 90; ++i) {
    const double l = 0.01 * i;
    const double err = std::abs(1.0 / (1.0 - l) - p(l));
    CHECK(err <= std::pow(l, 4) / (1.0 - l) * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("high-frequency energy fraction") {
  const EigenSystem k2 = eigen_decompose(LaplacianOperator(complete_graph(2)));
  CHECK(high_frequency_energy_fraction(k2, column({1, 1})) == doctest::Approx(0.0));
  CHECK(high_frequency_energy_fraction(k2, column({1, -1})) == doctest::Approx(1.0));
  CHECK(high_frequency_energy_fraction(k2, column({1, 0})) == doctest::Approx(0.5));
}
