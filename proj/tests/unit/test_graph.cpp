#include <sstream>

#include "doctest.h"
#include "gdn/error.hpp"
#include "gdn/generators.hpp"
#include "gdn/graph.hpp"
#include "gdn/laplacian.hpp"
#include "../support/oracles.hpp"

using namespace gdn;

namespace {

SparseGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

}  // namespace

TEST_CASE("edge list: single edge") {
  const SparseGraph g = parse("0 1\n");
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(std::vector<double>(g.values().begin(), g.values().end()) == std::vector<double>{1, 1});
  CHECK(g.is_valid());
}

TEST_CASE("edge list: reversed and repeated pairs are merged") {
  CHECK(parse("0 1\n1 0\n0 1\n") == parse("0 1\n"));
}

TEST_CASE("edge list: header, comments, blank lines") {
  const SparseGraph g = parse("# toy\nnodes 5\n\n0 1 # first\n3 4\n");
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 2);
  CHECK(g.degree(2) == 0);
}

TEST_CASE("edge list: errors") {
  CHECK_THROWS_AS(parse("0 0\n"), IoError);
  CHECK_THROWS_WITH_AS(parse("0 1\n1 x\n"), doctest::Contains("line 2"), IoError);
  CHECK_THROWS_WITH_AS(parse("0 99999999999\n"), doctest::Contains("overflow"), IoError);
  CHECK_THROWS_AS(parse("# nothing\n"), IoError);
  CHECK_THROWS_AS(parse("nodes 2\n0 5\n"), IoError);
  CHECK_THROWS_AS(parse("0 1 2\n"), IoError);
  CHECK_THROWS_AS(load_edge_list("/nonexistent/file.edges"), IoError);
}

TEST_CASE("edge list: write/parse round trip") {
  Rng rng = make_rng(3);
  const SparseGraph g = erdos_renyi(30, 0.2, rng);
  std::stringstream buf;
  write_edge_list(g, buf);
  CHECK(parse_edge_list(buf) == g);
}

TEST_CASE("CSR invariants on random graphs") {
  Rng rng = make_rng(11);
  for (int t = 0; t < 20; ++t) {
    const SparseGraph g = erdos_renyi(1 + static_cast<Index>(rng() % 40), 0.15, rng);
    REQUIRE(g.is_valid());
    const Matrix a = g.dense_adjacency();
    CHECK(a.isApprox(a.transpose()));
    CHECK(a.diagonal().isZero());
  }
}

TEST_CASE("laplacian_apply: K2") {
  const LaplacianOperator op(complete_graph(2));
  Matrix x(2, 1);
  x << 1, 0;
  const Matrix y = op.apply(x);
  CHECK(y(0, 0) == doctest::Approx(1.0));
  CHECK(y(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("laplacian_apply: D^1/2 1 is in the kernel") {
  Rng rng = make_rng(5);
  const SparseGraph g = erdos_renyi(40, 0.1, rng);
  Matrix x(g.num_nodes(), 1);
  for (Index i = 0; i < g.num_nodes(); ++i) x(i, 0) = std::sqrt(static_cast<double>(g.degree(i)));
  CHECK(LaplacianOperator(g).apply(x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("laplacian_apply: P3 eigenvector at lambda=1") {
  Matrix x(3, 1);
  x << 1, 0, -1;
  const Matrix y = LaplacianOperator(path_graph(3)).apply(x);
  CHECK((y - x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("laplacian_apply: dimension mismatch") {
  CHECK_THROWS_AS(LaplacianOperator(path_graph(3)).apply(Matrix::Zero(4, 1)), UsageError);
}

TEST_CASE("laplacian: matches dense oracle, symmetric, spectrum in [0,2]") {
  Rng rng = make_rng(17);
  for (int t = 0; t < 25; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 63);
    const SparseGraph g = testing::random_graph(n, uniform(rng, 0.02, 0.3), rng);
    const LaplacianOperator op(g);
    const Matrix oracle = testing::dense_normalized_laplacian(g.dense_adjacency());
    CHECK((op.dense() - oracle).cwiseAbs().maxCoeff() < 1e-14);

    const Matrix x = testing::random_matrix(n, 1, rng);
    const Matrix y = testing::random_matrix(n, 1, rng);
    const double lhs = (y.transpose() * op.apply(x))(0, 0);
    const double rhs = (x.transpose() * op.apply(y))(0, 0);
    CHECK(std::abs(lhs - rhs) <= 1e-12);

    const auto spec = testing::dense_spectrum(op.dense());
    CHECK(spec.values.minCoeff() >= -1e-10);
    CHECK(spec.values.maxCoeff() <= 2.0 + 1e-10);
  }
}

TEST_CASE("laplacian: isolated nodes give zero rows and columns") {
  const SparseGraph g = SparseGraph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}});
  const LaplacianOperator op(g);
  const Matrix l = op.dense();
  CHECK(l.row(3).isZero());
  CHECK(l.col(3).isZero());
  Matrix x = Matrix::Ones(4, 2);
  x.row(3).setZero();
  CHECK(op.apply(x).row(3).isZero());
  // I - L keeps the isolated node untouched.
  Matrix e = Matrix::Zero(4, 1);
  e(3, 0) = 2.5;
  CHECK(op.propagate(e)(3, 0) == 2.5);
}

TEST_CASE("laplacian: left normalization and its adjoint") {
  Rng rng = make_rng(23);
  const SparseGraph g = erdos_renyi(25, 0.2, rng);
  const LaplacianOperator op(g, Normalization::left);
  const Matrix a = g.dense_adjacency();
  const Vector deg = a.rowwise().sum();
  Matrix expected = Matrix::Zero(25, 25);
  for (Index i = 0; i < 25; ++i) {
    if (deg[i] == 0) continue;
    expected(i, i) = 1.0;
    expected.row(i) -= a.row(i) / deg[i];
  }
  CHECK((op.dense() - expected).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix x = testing::random_matrix(25, 3, rng);
  CHECK((op.apply_adjoint(x) - expected.transpose() * x).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((op.propagate_adjoint(x) - (Matrix::Identity(25, 25) - expected).transpose() * x)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("laplacian: self-loop renormalization") {
  const SparseGraph g = complete_graph(2);
  const LaplacianOperator op(g, Normalization::symmetric, true);
  // A + I = ones(2,2), degrees 2: S = ones/2, L = I - S.
  Matrix expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK((op.dense() - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("drop_edge: identity, annihilation, determinism") {
  Rng rng = make_rng(1);
  const SparseGraph g = erdos_renyi(50, 0.2, rng);
  Rng a = make_rng(9);
  CHECK(drop_edge(g, 1.0, a) == g);
  CHECK(drop_edge(g, 0.0, a).num_edges() == 0);
  Rng r1 = make_rng(42);
  Rng r2 = make_rng(42);
  const SparseGraph d1 = drop_edge(g, 0.5, r1);
  CHECK(d1 == drop_edge(g, 0.5, r2));
  CHECK(d1.is_valid());
  CHECK_THROWS_AS(drop_edge(g, 1.5, a), UsageError);
}

TEST_CASE("drop_edge: retained count within binomial 99% interval") {
  const SparseGraph g = path_graph(10001);
  REQUIRE(g.num_edges() == 10000);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = make_rng(seed);
    const SparseGraph d = drop_edge(g, 0.5, rng);
    CHECK(d.num_edges() >= 4871);
    CHECK(d.num_edges() <= 5129);
    CHECK(d.is_valid());
  }
}

TEST_CASE("keep/drop rate semantics") {
  CHECK(keep_probability(0.3, DropEdgeSemantics::keep) == 0.3);
  CHECK(keep_probability(0.3, DropEdgeSemantics::drop) == doctest::Approx(0.7));
}

TEST_CASE("disjoint union") {
  const SparseGraph u = disjoint_union(complete_graph(2), complete_graph(2));
  CHECK(u.num_nodes() == 4);
  CHECK(u.has_edge(2, 3));
  CHECK_FALSE(u.has_edge(1, 2));
}
