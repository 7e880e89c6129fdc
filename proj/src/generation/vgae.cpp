#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdn/adam.hpp"
#include "gdn/error.hpp"
#include "gdn/generation.hpp"

namespace gdn {

namespace {

double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double clamp_logit(double s) { return std::clamp(s, -kLogitClamp, kLogitClamp); }

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

void require_rows(const Matrix& m, Index rows, const char* what) {
  if (m.rows() != rows) throw UsageError(std::string(what) + ": dimension mismatch");
}

}  // namespace

VgaeParams init_vgae_params(const VgaeDims& dims, Rng& rng) {
  if (dims.input < 1 || dims.hidden < 1 || dims.latent < 1 || dims.decoder_width < 1) {
    throw UsageError("vgae dimensions must be positive");
  }
  VgaeParams p;
  p.w0 = glorot_uniform(dims.input, dims.hidden, rng);
  p.w_mu = glorot_uniform(dims.hidden, dims.latent, rng);
  p.w_lv = glorot_uniform(dims.hidden, dims.latent, rng);
  p.wp = glorot_uniform(dims.latent, dims.decoder_width, rng);
  p.w3 = glorot_uniform(dims.decoder_width, dims.decoder_width, rng);
  p.w4 = glorot_uniform(dims.decoder_width, dims.decoder_width, rng);
  p.w5 = glorot_uniform(dims.decoder_width, dims.input, rng);
  return p;
}

LatentState variational_encode(const LaplacianOperator& op, const Matrix& x,
                               const VgaeParams& params, const Matrix& eta,
                               VgaeEncoderCache* cache) {
  require_rows(x, op.num_nodes(), "variational_encode features");
  require_rows(params.w0, x.cols(), "variational_encode W0");
  require_rows(params.w_mu, params.w0.cols(), "variational_encode Wmu");
  require_rows(params.w_lv, params.w0.cols(), "variational_encode Wlv");
  if (eta.rows() != x.rows() || eta.cols() != params.w_mu.cols()) {
    throw UsageError("variational_encode: noise has the wrong shape");
  }
  VgaeEncoderCache local;
  VgaeEncoderCache& c = cache ? *cache : local;
  c.px = op.propagate(x);
  c.pre = c.px * params.w0;
  c.h = activate(Activation::leaky_relu, c.pre);
  c.ph = op.propagate(c.h);
  LatentState s;
  s.mu = c.ph * params.w_mu;
  c.log_var_raw = c.ph * params.w_lv;
  s.log_var = c.log_var_raw.cwiseMax(kLogVarFloor).cwiseMin(kLogVarCeil);
  s.z = s.mu + ((0.5 * s.log_var).array().exp() * eta.array()).matrix();
  return s;
}

double kl_divergence(const Matrix& mu, const Matrix& log_var) {
  if (mu.rows() == 0) return 0.0;
  const auto lv = log_var.array();
  return 0.5 * (lv.exp() + mu.array().square() - 1.0 - lv).sum() / static_cast<double>(mu.rows());
}

double edge_logit(const Matrix& z, Index i, Index j) {
  return clamp_logit(z.row(i).dot(z.row(j)));
}

double edge_probability(const Matrix& z, Index i, Index j) { return sigmoid(edge_logit(z, i, j)); }

GenerationLoss generation_loss(const SparseGraph& graph, const Matrix& x, const VgaeParams& params,
                               const Matrix& eta, const GenerationModelConfig& config,
                               VgaeParams* grads) {
  const Index n = graph.num_nodes();
  const LaplacianOperator op(graph);
  VgaeEncoderCache enc;
  const LatentState latent = variational_encode(op, x, params, eta, &enc);
  const Matrix& z = latent.z;

  GenerationLoss loss;
  Matrix grad_z = Matrix::Zero(n, z.cols());

  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (pairs > 0) {
    const double edges = static_cast<double>(graph.num_edges());
    const double pos_weight = edges > 0 ? (pairs - edges) / edges : 1.0;
    Matrix g = Matrix::Zero(n, n);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double raw = z.row(i).dot(z.row(j));
        const double s = clamp_logit(raw);
        if (graph.has_edge(i, j)) {
          total += pos_weight * softplus(-s);
          g(i, j) = -pos_weight * (1.0 - sigmoid(s));
        } else {
          total += softplus(s);
          g(i, j) = sigmoid(s);
        }
        if (raw != s) g(i, j) = 0.0;
      }
    }
    loss.edge = total / pairs;
    if (grads) grad_z += ((g + g.transpose()) * z) / pairs;
  }

  loss.kl = kl_divergence(latent.mu, latent.log_var);

  Matrix grad_wp;
  DecoderGradients dec_grads;
  if (config.weights.feature != 0.0) {
    const Matrix h = z * params.wp;
    const DecoderOutput dec = gdn_decode(op, h, params.w3, params.w4, params.w5, config.decoder);
    const LossResult mse = masked_mse(x, dec.x, Mask::Constant(x.rows(), x.cols(), true));
    loss.feature = mse.value;
    if (grads) {
      dec_grads = decoder_backward(dec.cache, params.w3, params.w4, params.w5, config.decoder,
                                   config.weights.feature * mse.grad);
      grad_wp = z.transpose() * dec_grads.h;
      grad_z += dec_grads.h * params.wp.transpose();
    }
  }
  loss.total = loss.edge + config.weights.kl * loss.kl + config.weights.feature * loss.feature;
  if (!grads) return loss;

  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix std_dev = (0.5 * latent.log_var).array().exp().matrix();
  Matrix grad_mu = grad_z + config.weights.kl * inv_n * latent.mu;
  Matrix grad_lv = (0.5 * grad_z.array() * eta.array() * std_dev.array() +
                    config.weights.kl * 0.5 * inv_n * (latent.log_var.array().exp() - 1.0))
                       .matrix();
  for (Index i = 0; i < grad_lv.rows(); ++i) {
    for (Index j = 0; j < grad_lv.cols(); ++j) {
      const double raw = enc.log_var_raw(i, j);
      if (raw < kLogVarFloor || raw > kLogVarCeil) grad_lv(i, j) = 0.0;
    }
  }

  grads->w_mu = enc.ph.transpose() * grad_mu;
  grads->w_lv = enc.ph.transpose() * grad_lv;
  const Matrix grad_ph = grad_mu * params.w_mu.transpose() + grad_lv * params.w_lv.transpose();
  const Matrix grad_pre =
      activate_backward(Activation::leaky_relu, enc.pre, op.propagate_adjoint(grad_ph));
  grads->w0 = enc.px.transpose() * grad_pre;
  if (config.weights.feature != 0.0) {
    grads->wp = std::move(grad_wp);
    grads->w3 = std::move(dec_grads.w3);
    grads->w4 = std::move(dec_grads.w4);
    grads->w5 = std::move(dec_grads.w5);
  } else {
    grads->wp = Matrix::Zero(params.wp.rows(), params.wp.cols());
    grads->w3 = Matrix::Zero(params.w3.rows(), params.w3.cols());
    grads->w4 = Matrix::Zero(params.w4.rows(), params.w4.cols());
    grads->w5 = Matrix::Zero(params.w5.rows(), params.w5.cols());
  }
  return loss;
}

std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw UsageError("roc_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positives = 0, negatives = 0, rank_sum = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t stop = start;
    while (stop < order.size() && scores[order[stop]] == scores[order[start]]) ++stop;
    const double avg_rank = 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t k = start; k < stop; ++k) {
      if (labels[order[k]]) {
        rank_sum += avg_rank;
        ++positives;
      } else {
        ++negatives;
      }
    }
    start = stop;
  }
  if (positives == 0 || negatives == 0) return std::nullopt;
  return (rank_sum - positives * (positives + 1) / 2) / (positives * negatives);
}

std::optional<double> average_precision(const std::vector<double>& scores,
                                        const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw UsageError("average_precision: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const double positives = static_cast<double>(std::count_if(
      labels.begin(), labels.end(), [](int y) { return y != 0; }));
  if (positives == 0 || positives == static_cast<double>(labels.size())) return std::nullopt;
  double tp = 0, seen = 0, ap = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t stop = start;
    double group_tp = 0;
    while (stop < order.size() && scores[order[stop]] == scores[order[start]]) {
      if (labels[order[stop]]) ++group_tp;
      ++stop;
    }
    tp += group_tp;
    seen += static_cast<double>(stop - start);
    ap += (group_tp / positives) * (tp / seen);
    start = stop;
  }
  return ap;
}

EdgeMetrics evaluate_graph(const SparseGraph& graph, const Matrix& x, const VgaeParams& params) {
  const Index n = graph.num_nodes();
  const LaplacianOperator op(graph);
  const Matrix eta = Matrix::Zero(n, params.w_mu.cols());
  const Matrix z = variational_encode(op, x, params, eta).mu;
  std::vector<double> scores;
  std::vector<int> labels;
  double ll = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double s = edge_logit(z, i, j);
      const bool edge = graph.has_edge(i, j);
      ll -= edge ? softplus(-s) : softplus(s);
      scores.push_back(sigmoid(s));
      labels.push_back(edge ? 1 : 0);
    }
  }
  EdgeMetrics m;
  if (!scores.empty()) m.log_likelihood = ll / static_cast<double>(scores.size());
  m.auc = roc_auc(scores, labels);
  m.ap = average_precision(scores, labels);
  return m;
}

GeneratorRun train_generator(const GraphDataset& data, const GeneratorConfig& config) {
  if (data.graphs.size() < 2) throw UsageError("generation needs at least two graphs");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw UsageError("train fraction must lie strictly between 0 and 1");
  }
  if (config.iterations < 0) throw UsageError("negative iteration count");

  GeneratorRun run;
  std::vector<std::size_t> order(data.graphs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng = make_rng(config.seed, 41);
  for (std::size_t k = order.size() - 1; k > 0; --k) {
    const auto pick = static_cast<std::size_t>(uniform01(split_rng) * static_cast<double>(k + 1));
    std::swap(order[k], order[pick]);
  }
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(order.size()))),
      1, order.size() - 1);
  run.train_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  run.test_index.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  GenerationModelConfig model = config.model;
  model.dims.input = data.num_node_labels;
  Rng init_rng = make_rng(config.seed, 1);
  run.params = init_vgae_params(model.dims, init_rng);

  std::vector<Matrix> features(data.graphs.size());
  for (std::size_t g = 0; g < data.graphs.size(); ++g) features[g] = data.features(g);

  Rng noise_rng = make_rng(config.seed, 40);
  AdamState adam;
  const double scale = 1.0 / static_cast<double>(n_train);
  for (int it = 0; it < config.iterations; ++it) {
    VgaeParams total;
    for (auto* t : total.tensors()) *t = Matrix();
    double loss = 0.0;
    bool first = true;
    for (std::size_t g : run.train_index) {
      const SparseGraph& graph = data.graphs[g].graph;
      const Matrix eta = standard_normal_matrix(graph.num_nodes(), model.dims.latent, noise_rng);
      VgaeParams grads;
      loss += generation_loss(graph, features[g], run.params, eta, model, &grads).total;
      auto dst = total.tensors();
      auto src = grads.tensors();
      for (std::size_t k = 0; k < dst.size(); ++k) {
        if (first) {
          *dst[k] = *src[k];
        } else {
          *dst[k] += *src[k];
        }
      }
      first = false;
    }
    for (auto* t : total.tensors()) *t *= scale;
    loss *= scale;
    if (!std::isfinite(loss)) throw NumericalError("generation diverged at iteration " + std::to_string(it));
    run.loss_log.push_back(loss);
    adam_step(run.params, total, adam, config.lr);
  }

  double ll = 0, auc = 0, ap = 0;
  std::size_t auc_count = 0, ap_count = 0;
  for (std::size_t g : run.test_index) {
    const EdgeMetrics m = evaluate_graph(data.graphs[g].graph, features[g], run.params);
    ll += m.log_likelihood;
    if (m.auc) {
      auc += *m.auc;
      ++auc_count;
    }
    if (m.ap) {
      ap += *m.ap;
      ++ap_count;
    }
  }
  run.log_likelihood = ll / static_cast<double>(run.test_index.size());
  run.auc = auc_count ? auc / static_cast<double>(auc_count) : std::nan("");
  run.ap = ap_count ? ap / static_cast<double>(ap_count) : std::nan("");
  return run;
}

}  // namespace gdn
