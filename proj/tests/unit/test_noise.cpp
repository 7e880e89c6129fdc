#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gdn/error.hpp"
#include "gdn/generators.hpp"
#include "gdn/noise.hpp"
#include "../support/oracles.hpp"

using namespace gdn;

namespace {

EigenSystem spectrum(const SparseGraph& g) { return eigen_decompose(LaplacianOperator(g)); }

Vector base_signal(Index n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return standard_normal_matrix(n, 1, rng).col(0);
}

}  // namespace

TEST_CASE("analytic amplification examples") {
  const EigenSystem k2 = spectrum(complete_graph(2));
  CHECK(std::abs(amplification_analytic(k2, exact_inverse_recovery()) - 1.0) <= 1e-12);

  const EigenSystem p3 = spectrum(path_graph(3));
  CHECK(amplification_analytic(p3, truncated_inverse_recovery(3)) ==
        doctest::Approx(242.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(amplification_analytic(p3, exact_inverse_recovery()),
                       doctest::Contains("eigenvalue lambda="), NumericalError);

  Rng rng = make_rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const SparseGraph g = erdos_renyi(12, 0.3, rng);
    CHECK(amplification_analytic(spectrum(g), identity_recovery()) == 1.0);
  }
}

TEST_CASE("exact inverse amplification is 1 only on K2 unions") {
  SparseGraph u = complete_graph(2);
  for (int k = 0; k < 3; ++k) u = disjoint_union(u, complete_graph(2));
  CHECK(std::abs(amplification_analytic(spectrum(u), exact_inverse_recovery()) - 1.0) <= 1e-12);

  Rng rng = make_rng(2);
  int checked = 0;
  while (checked < 10) {
    const SparseGraph g = erdos_renyi(10, 0.35, rng);
    const EigenSystem es = spectrum(g);
    bool near_pole = false;
    bool off_extremes = false;
    for (Index i = 0; i < es.eigenvalues.size(); ++i) {
      const double l = es.eigenvalues[i];
      near_pole = near_pole || std::abs(l - 1.0) < 1e-6;
      off_extremes = off_extremes || (l > 1e-9 && l < 2.0 - 1e-9);
    }
    if (near_pole || !off_extremes) continue;
    // Oracle: dense spectrum, direct sum.
    const auto dense = testing::dense_spectrum(testing::dense_normalized_laplacian(g.dense_adjacency()));
    double expected = 0.0;
    for (Index i = 0; i < dense.values.size(); ++i) {
      expected += 1.0 / ((1.0 - dense.values[i]) * (1.0 - dense.values[i]));
    }
    expected /= 10.0;
    const double got = amplification_analytic(es, exact_inverse_recovery());
    CHECK(got == doctest::Approx(expected).epsilon(1e-8));
    CHECK(got > 1.0);
    ++checked;
  }
}

TEST_CASE("Monte Carlo matches the analytic ratio for identity activation") {
  MonteCarloConfig cfg;
  cfg.sigma = 0.1;
  cfg.trials = 100000;
  const SparseGraph k2 = complete_graph(2);
  const EigenSystem es2 = spectrum(k2);
  const auto r2 = amplification_monte_carlo(es2, exact_inverse_recovery(), {}, base_signal(2, 3), cfg);
  CHECK(std::abs(r2.ratio - 1.0) <= 0.03);
  CHECK(r2.rejected == 0);

  const EigenSystem es3 = spectrum(path_graph(3));
  const auto r3 =
      amplification_monte_carlo(es3, truncated_inverse_recovery(3), {}, base_signal(3, 4), cfg);
  CHECK(std::abs(r3.ratio / (242.0 / 3.0) - 1.0) <= 0.05);
}

TEST_CASE("Monte Carlo is independent of the thread count") {
  const EigenSystem es = spectrum(path_graph(6));
  MonteCarloConfig cfg;
  cfg.trials = 20000;
  cfg.seed = 9;
  const Vector x = base_signal(6, 5);
  const auto one = amplification_monte_carlo(es, truncated_inverse_recovery(2), {}, x, cfg);
  cfg.threads = 3;
  const auto three = amplification_monte_carlo(es, truncated_inverse_recovery(2), {}, x, cfg);
  CHECK(one.ratio == three.ratio);
  CHECK(one.accepted == three.accepted);
}

TEST_CASE("nonlinear activations: Taylor prediction and amplification") {
  const SparseGraph g = path_graph(4);
  const EigenSystem es = spectrum(g);
  const RecoveryKernel kernel = truncated_inverse_recovery(3);
  const double identity_ratio = amplification_analytic(es, kernel);
  MonteCarloConfig cfg;
  cfg.sigma = 0.01;
  cfg.trials = 100000;

  // Literal form at the zero signal: (d act^-1 at act(0))^2 times the identity ratio.
  const Vector zero = Vector::Zero(4);
  const InvertibleActivation tanh_act{NoiseActivation::tanh};
  const InvertibleActivation sigmoid_act{NoiseActivation::sigmoid};
  CHECK(amplification_taylor(es, kernel, tanh_act, zero) == doctest::Approx(identity_ratio));
  CHECK(amplification_taylor(es, kernel, sigmoid_act, zero) ==
        doctest::Approx(16.0 * identity_ratio));
  const auto tanh_zero = amplification_monte_carlo(es, kernel, tanh_act, zero, cfg);
  CHECK(std::abs(tanh_zero.ratio / identity_ratio - 1.0) <= 0.10);
  const auto sig_zero = amplification_monte_carlo(es, kernel, sigmoid_act, zero, cfg);
  CHECK(std::abs(sig_zero.ratio / (16.0 * identity_ratio) - 1.0) <= 0.10);

  const Vector x = base_signal(4, 6);
  for (const auto& act : {tanh_act, sigmoid_act, InvertibleActivation{NoiseActivation::leaky_relu}}) {
    const auto mc = amplification_monte_carlo(es, kernel, act, x, cfg);
    const double taylor = amplification_taylor(es, kernel, act, x);
    INFO(act.name());
    CHECK(std::abs(mc.ratio / taylor - 1.0) <= 0.10);
    CHECK(mc.ratio >= identity_ratio * 0.97);
  }
}

TEST_CASE("activation inverses and domain rejection") {
  for (auto kind : {NoiseActivation::identity, NoiseActivation::leaky_relu, NoiseActivation::tanh,
                    NoiseActivation::sigmoid}) {
    const InvertibleActivation act{kind};
    for (double v : {-1.5, -0.2, 0.3, 2.0}) CHECK(act.inverse(act.forward(v)) == doctest::Approx(v));
  }
  CHECK(std::isnan(InvertibleActivation{NoiseActivation::sigmoid}.inverse(1.2)));
  CHECK(InvertibleActivation{NoiseActivation::leaky_relu}.inverse_derivative(-0.1) == 5.0);

  const EigenSystem es = spectrum(complete_graph(2));
  MonteCarloConfig cfg;
  cfg.sigma = 2.0;
  cfg.trials = 1000;
  CHECK_THROWS_AS(amplification_monte_carlo(es, identity_recovery(),
                                            {NoiseActivation::sigmoid}, Vector::Zero(2), cfg),
                  NumericalError);
  cfg.sigma = 0.3;
  const auto some = amplification_monte_carlo(es, identity_recovery(), {NoiseActivation::tanh},
                                              Vector::Zero(2), cfg);
  CHECK(some.rejected > 0);
  CHECK(some.accepted + some.rejected == 1000);
}

TEST_CASE("kernel and activation parsing") {
  CHECK(parse_recovery_kernel("truncated-inverse:5").name == "truncated-inverse:5");
  CHECK(parse_recovery_kernel("truncated-inverse:5").response(1.0) == 6.0);
  CHECK(parse_recovery_kernel("exact-inverse").response(0.5) == 2.0);
  CHECK_THROWS_AS(parse_recovery_kernel("truncated-inverse:"), UsageError);
  CHECK_THROWS_AS(parse_recovery_kernel("heat"), UsageError);
  CHECK(parse_noise_activation("tanh").kind == NoiseActivation::tanh);
  CHECK_THROWS_AS(parse_noise_activation("relu"), UsageError);
}

TEST_CASE("amplification_report: suite, determinism, CSV") {
  SparseGraph unions = disjoint_union(complete_graph(2), complete_graph(2));
  const std::vector<NamedGraph> suite{{"k2", complete_graph(2)}, {"k2x2", unions}};
  MonteCarloConfig cfg;
  cfg.trials = 5000;
  const auto rows = amplification_report(suite, {exact_inverse_recovery(), identity_recovery()},
                                        {{NoiseActivation::identity}, {NoiseActivation::tanh}}, cfg);
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    if (r.kernel == "exact-inverse") CHECK(r.analytic >= 1.0 - 1e-12);
  }
  const auto again = amplification_report(suite, {exact_inverse_recovery(), identity_recovery()},
                                         {{NoiseActivation::identity}, {NoiseActivation::tanh}}, cfg);
  std::ostringstream a, b;
  write_amplification_csv(a, rows);
  write_amplification_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("graph,kernel,activation,analytic,monte_carlo,trials\nk2,exact-inverse,identity,", 0) == 0);
}
