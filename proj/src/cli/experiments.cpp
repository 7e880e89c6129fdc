#include "gdn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gdn/error.hpp"
#include "gdn/generation.hpp"
#include "gdn/generators.hpp"
#include "gdn/spectral.hpp"

namespace gdn {

namespace {

double relative_error(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (Index i = 0; i < analytic.rows(); ++i) {
    for (Index j = 0; j < analytic.cols(); ++j) {
      const double a = analytic(i, j);
      const double b = numeric(i, j);
      const double denom = std::max({std::abs(a), std::abs(b), 1e-7});
      worst = std::max(worst, std::abs(a - b) / denom);
    }
  }
  return worst;
}

Matrix central_difference(Matrix& param, const std::function<double()>& loss) {
  constexpr double h = 1e-5;
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

Matrix uniform_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
  }
  return m;
}

}  // namespace

std::vector<GradientCheckRow> gradient_check(Index nodes, std::uint64_t seed) {
  if (nodes < 3) throw UsageError("gradcheck needs at least 3 nodes");
  Rng rng = make_rng(seed, 70);
  const SparseGraph graph = random_tree_with_chords(nodes, nodes / 2, rng);
  std::vector<GradientCheckRow> rows;

  const Index d = 5;
  const Matrix x = uniform_matrix(nodes, d, rng);
  Mask mask(nodes, d);
  for (Index i = 0; i < nodes; ++i) {
    for (Index j = 0; j < d; ++j) mask(i, j) = uniform01(rng) < 0.8;
  }
  const LaplacianOperator op(graph);
  for (DecoderKind kind :
       {DecoderKind::gdn, DecoderKind::inverse_only, DecoderKind::gala, DecoderKind::gcn}) {
    AutoencoderConfig cfg;
    cfg.dims = {d, 6, 4, 7, DecoderInput::stack};
    cfg.decoder.kind = kind;
    ModelParams params = init_params(cfg.dims, rng);
    auto loss = [&] {
      return masked_mse(x, autoencoder_forward(op, op, x, params, cfg).output, mask).value;
    };
    const ForwardResult fwd = autoencoder_forward(op, op, x, params, cfg);
    const ModelParams grads =
        autoencoder_backward(fwd.cache, params, cfg, masked_mse(x, fwd.output, mask).grad);
    auto p = params.tensors();
    auto g = grads.tensors();
    for (std::size_t t = 0; t < p.size(); ++t) {
      rows.push_back({"autoencoder:" + to_string(kind), ModelParams::names()[t],
                      relative_error(*g[t], central_difference(*p[t], loss))});
    }
  }

  GenerationModelConfig gen;
  gen.dims = {d, 6, 3, 5};
  gen.weights = {0.7, 1.0};
  VgaeParams params = init_vgae_params(gen.dims, rng);
  const Matrix eta = standard_normal_matrix(nodes, gen.dims.latent, rng);
  VgaeParams grads;
  generation_loss(graph, x, params, eta, gen, &grads);
  auto p = params.tensors();
  auto g = grads.tensors();
  for (std::size_t t = 0; t < p.size(); ++t) {
    rows.push_back({"generation", VgaeParams::names()[t],
                    relative_error(*g[t], central_difference(*p[t], [&] {
                      return generation_loss(graph, x, params, eta, gen).total;
                    }))});
  }
  return rows;
}

OracleCheckResult oracle_check(Index nodes, int trials, std::uint64_t seed) {
  if (nodes < 2 || trials < 1) throw UsageError("oracle-check needs nodes >= 2 and trials >= 1");
  const std::vector<PolynomialFilter> filters{maclaurin_inverse(1), maclaurin_inverse(3),
                                              heat_filter(1.0, 3, false),
                                              heat_filter(1.0, 10, false)};
  Rng rng = make_rng(seed, 71);
  OracleCheckResult r;
  r.filters = static_cast<int>(filters.size());
  for (int t = 0; t < trials; ++t) {
    const Index n = std::max<Index>(2, static_cast<Index>(uniform01(rng) * static_cast<double>(nodes)) + 1);
    const SparseGraph g = erdos_renyi(std::min(n, nodes), uniform(rng, 0.05, 0.5), rng);
    const LaplacianOperator op(g);
    const EigenSystem es = eigen_decompose(op);
    const Matrix x = uniform_matrix(g.num_nodes(), 4, rng);
    for (const auto& f : filters) {
      const Matrix fast = apply_filter(op, f, x);
      const Matrix exact = exact_filter_apply(es, [&f](double l) { return f(l); }, x);
      const double denom = std::max(exact.norm(), 1e-300);
      r.max_relative_error = std::max(r.max_relative_error, (fast - exact).norm() / denom);
    }
    ++r.graphs;
  }
  return r;
}

KernelTable kernel_approximation_table(const std::vector<std::size_t>& orders, double scale,
                                       int points) {
  if (points < 2) throw UsageError("kernel table needs at least two points");
  KernelTable table;
  table.columns = {"lambda", "inverse_exact"};
  for (std::size_t k : orders) table.columns.push_back("inverse_order_" + std::to_string(k));
  table.columns.push_back("heat_exact");
  for (std::size_t k : orders) table.columns.push_back("heat_order_" + std::to_string(k));
  for (int p = 0; p < points; ++p) {
    const double lambda = 2.0 * p / (points - 1);
    std::vector<double> row{lambda, exact_inverse_kernel(lambda)};
    for (std::size_t k : orders) row.push_back(maclaurin_inverse(k)(lambda));
    row.push_back(std::exp(-scale * lambda));
    for (std::size_t k : orders) row.push_back(heat_filter(scale, k, false)(lambda));
    table.rows.push_back(std::move(row));
  }
  return table;
}

double heat_truncation_error(double scale, std::size_t order, int points) {
  const PolynomialFilter q = heat_filter(scale, order, false);
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    const double lambda = 2.0 * p / (points - 1);
    worst = std::max(worst, std::abs(q(lambda) - std::exp(-scale * lambda)));
  }
  return worst;
}

DecoderSpectra decoder_spectra(const SparseGraph& graph, const Matrix& x, const TrainConfig& config,
                               const std::vector<DecoderKind>& kinds) {
  const EigenSystem es = eigen_decompose(LaplacianOperator(graph));
  auto energy = [&](const Matrix& m) {
    return Vector((es.eigenvectors.transpose() * m).rowwise().squaredNorm());
  };
  DecoderSpectra out;
  out.eigenvalues = es.eigenvalues;
  out.original_energy = energy(x);
  out.original_high_fraction = high_frequency_energy_fraction(es, x);
  const Mask all = Mask::Constant(x.rows(), x.cols(), true);
  for (DecoderKind kind : kinds) {
    TrainConfig cfg = config;
    cfg.model.decoder.kind = kind;
    const TrainResult fit = train_autoencoder(graph, x, x, all, cfg);
    AutoencoderConfig model = cfg.model;
    model.dims.input = x.cols();
    const Matrix rec = reconstruct(graph, x, fit.params, model);
    out.decoders.push_back({to_string(kind), energy(rec), high_frequency_energy_fraction(es, rec)});
  }
  return out;
}

}  // namespace gdn
