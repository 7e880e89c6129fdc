#include <cmath>

#include "gdn/error.hpp"
#include "gdn/nn.hpp"

namespace gdn {

Matrix activate(Activation act, const Matrix& pre) {
  switch (act) {
    case Activation::identity: return pre;
    case Activation::relu: return pre.cwiseMax(0.0);
    case Activation::leaky_relu:
      return pre.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
  }
  return pre;
}

Matrix activate_backward(Activation act, const Matrix& pre, const Matrix& grad) {
  switch (act) {
    case Activation::identity: return grad;
    case Activation::relu:
      return grad.binaryExpr(pre, [](double g, double v) { return v > 0.0 ? g : 0.0; });
    case Activation::leaky_relu:
      return grad.binaryExpr(pre, [](double g, double v) { return v > 0.0 ? g : kLeakySlope * g; });
  }
  return grad;
}

std::string to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
  }
  return "identity";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  throw UsageError("unknown activation '" + name + "'");
}

Matrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng) {
  if (fan_in < 1 || fan_out < 1) throw UsageError("glorot_uniform: dimensions must be >= 1");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (Index i = 0; i < fan_in; ++i) {
    for (Index j = 0; j < fan_out; ++j) w(i, j) = uniform(rng, -bound, bound);
  }
  return w;
}

bool ModelParams::all_finite() const {
  for (const Matrix* m : tensors()) {
    if (!m->allFinite()) return false;
  }
  return true;
}

ModelParams init_params(const ModelDims& dims, Rng& rng) {
  const Index m = dims.resolved_decoder_width();
  ModelParams p;
  p.w1 = glorot_uniform(dims.input, dims.hidden1, rng);
  p.w2 = glorot_uniform(dims.hidden1, dims.hidden2, rng);
  p.w3 = glorot_uniform(dims.encoder_output(), m, rng);
  p.w4 = glorot_uniform(m, m, rng);
  p.w5 = glorot_uniform(m, dims.input, rng);
  return p;
}

namespace {

void require_rows(const Matrix& x, Index rows, const char* what) {
  if (x.rows() != rows) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(rows) + " rows, got " +
                     std::to_string(x.rows()));
  }
}

void require_chain(Index width, const Matrix& w, const char* what) {
  if (width != w.rows()) {
    throw UsageError(std::string(what) + ": width " + std::to_string(width) +
                     " does not match weight rows " + std::to_string(w.rows()));
  }
}

}  // namespace

Matrix gcn_layer(const LaplacianOperator& op, const Matrix& x, const Matrix& w, Activation act) {
  require_rows(x, op.num_nodes(), "gcn_layer");
  require_chain(x.cols(), w, "gcn_layer");
  return activate(act, op.propagate(x) * w);
}

EncoderOutput gcn_encode(const LaplacianOperator& op, const Matrix& x, const Matrix& w1,
                         const Matrix& w2, const EncoderConfig& config, DecoderInput output) {
  require_rows(x, op.num_nodes(), "gcn_encode");
  require_chain(x.cols(), w1, "gcn_encode layer 1");
  require_chain(w1.cols(), w2, "gcn_encode layer 2");
  EncoderOutput out;
  EncoderCache& c = out.cache;
  c.op = &op;
  c.px = op.propagate(x);
  c.pre1 = c.px * w1;
  c.h1 = activate(config.activation, c.pre1);
  c.ph1 = op.propagate(c.h1);
  c.pre2 = c.ph1 * w2;
  c.h2 = activate(config.activation, c.pre2);
  if (output == DecoderInput::stack) {
    out.h.resize(x.rows(), c.h1.cols() + c.h2.cols());
    out.h << c.h1, c.h2;
  } else {
    out.h = c.h2;
  }
  return out;
}

EncoderGradients encoder_backward(const EncoderCache& cache, const Matrix& w2,
                                  const EncoderConfig& config, const Matrix& grad_h,
                                  DecoderInput output) {
  if (cache.op == nullptr || cache.h2.size() == 0) {
    throw UsageError("encoder_backward: missing forward cache");
  }
  const Index h1 = cache.h1.cols();
  Matrix grad_h1 = Matrix::Zero(cache.h1.rows(), h1);
  Matrix grad_h2;
  if (output == DecoderInput::stack) {
    grad_h1 = grad_h.leftCols(h1);
    grad_h2 = grad_h.rightCols(cache.h2.cols());
  } else {
    grad_h2 = grad_h;
  }
  EncoderGradients g;
  const Matrix grad_pre2 = activate_backward(config.activation, cache.pre2, grad_h2);
  g.w2 = cache.ph1.transpose() * grad_pre2;
  grad_h1 += cache.op->propagate_adjoint(grad_pre2 * w2.transpose());
  const Matrix grad_pre1 = activate_backward(config.activation, cache.pre1, grad_h1);
  g.w1 = cache.px.transpose() * grad_pre1;
  return g;
}

std::string to_string(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::gdn: return "gdn";
    case DecoderKind::inverse_only: return "inverse_only";
    case DecoderKind::gala: return "gala";
    case DecoderKind::gcn: return "gcn_decoder";
  }
  return "gdn";
}

DecoderKind parse_decoder_kind(const std::string& name) {
  if (name == "gdn") return DecoderKind::gdn;
  if (name == "inverse_only") return DecoderKind::inverse_only;
  if (name == "gala") return DecoderKind::gala;
  if (name == "gcn_decoder" || name == "gcn") return DecoderKind::gcn;
  throw UsageError("unknown decoder '" + name + "'");
}

PolynomialFilter DecoderConfig::first_stage() const {
  switch (kind) {
    case DecoderKind::gdn:
    case DecoderKind::inverse_only: return maclaurin_inverse(inverse_order);
    case DecoderKind::gala: return maclaurin_inverse(1);
    case DecoderKind::gcn: return gcn_filter();
  }
  return maclaurin_inverse(inverse_order);
}

DecoderOutput gdn_decode(const LaplacianOperator& op, const Matrix& h, const Matrix& w3,
                         const Matrix& w4, const Matrix& w5, const DecoderConfig& config) {
  require_rows(h, op.num_nodes(), "gdn_decode");
  require_chain(h.cols(), w3, "gdn_decode W3");
  require_chain(w3.cols(), w4, "gdn_decode W4");
  require_chain(w4.cols(), w5, "gdn_decode W5");
  DecoderOutput out;
  DecoderCache& c = out.cache;
  c.op = &op;
  c.filtered = apply_filter(op, config.first_stage(), h);
  c.pre_m = c.filtered * w3;
  c.m = activate(config.activation, c.pre_m);
  if (config.uses_wavelets()) {
    c.wave_in = apply_filter(op, heat_filter(config.wavelet_scale, config.wavelet_order, true), c.m);
  } else {
    c.wave_in = c.m;
  }
  c.z = c.wave_in * w4;
  c.r = c.z.cwiseMax(0.0);
  if (config.uses_wavelets()) {
    c.wave_out = apply_filter(op, heat_filter(config.wavelet_scale, config.wavelet_order, false), c.r);
  } else {
    c.wave_out = c.r;
  }
  out.x = c.wave_out * w5;
  return out;
}

DecoderGradients decoder_backward(const DecoderCache& cache, const Matrix& w3, const Matrix& w4,
                                  const Matrix& w5, const DecoderConfig& config,
                                  const Matrix& grad_x) {
  if (cache.op == nullptr || cache.wave_out.size() == 0) {
    throw UsageError("decoder_backward: missing forward cache");
  }
  const LaplacianOperator& op = *cache.op;
  DecoderGradients g;
  g.w5 = cache.wave_out.transpose() * grad_x;
  Matrix grad_r = grad_x * w5.transpose();
  if (config.uses_wavelets()) {
    grad_r = apply_filter_adjoint(
        op, heat_filter(config.wavelet_scale, config.wavelet_order, false), grad_r);
  }
  const Matrix grad_z = activate_backward(Activation::relu, cache.z, grad_r);
  g.w4 = cache.wave_in.transpose() * grad_z;
  Matrix grad_m = grad_z * w4.transpose();
  if (config.uses_wavelets()) {
    grad_m = apply_filter_adjoint(
        op, heat_filter(config.wavelet_scale, config.wavelet_order, true), grad_m);
  }
  const Matrix grad_pre_m = activate_backward(config.activation, cache.pre_m, grad_m);
  g.w3 = cache.filtered.transpose() * grad_pre_m;
  g.h = apply_filter_adjoint(op, config.first_stage(), grad_pre_m * w3.transpose());
  return g;
}

LossResult masked_mse(const Matrix& target, const Matrix& prediction, const Mask& mask) {
  if (target.rows() != prediction.rows() || target.cols() != prediction.cols() ||
      mask.rows() != target.rows() || mask.cols() != target.cols()) {
    throw UsageError("masked_mse: shape mismatch");
  }
  const Index count = mask.count();
  if (count == 0) throw UsageError("masked_mse: empty mask");
  const Matrix diff = mask.select(prediction - target, 0.0);
  LossResult out;
  out.value = diff.squaredNorm() / static_cast<double>(count);
  out.grad = (2.0 / static_cast<double>(count)) * diff;
  return out;
}

ForwardResult autoencoder_forward(const LaplacianOperator& encoder_op,
                                  const LaplacianOperator& decoder_op, const Matrix& x,
                                  const ModelParams& params, const AutoencoderConfig& config) {
  EncoderOutput enc = gcn_encode(encoder_op, x, params.w1, params.w2, config.encoder,
                                 config.dims.decoder_input);
  DecoderOutput dec = gdn_decode(decoder_op, enc.h, params.w3, params.w4, params.w5, config.decoder);
  return {std::move(dec.x), {std::move(enc.cache), std::move(dec.cache)}};
}

ModelParams autoencoder_backward(const ForwardCache& cache, const ModelParams& params,
                                 const AutoencoderConfig& config, const Matrix& loss_grad) {
  DecoderGradients dg =
      decoder_backward(cache.decoder, params.w3, params.w4, params.w5, config.decoder, loss_grad);
  EncoderGradients eg = encoder_backward(cache.encoder, params.w2, config.encoder, dg.h,
                                         config.dims.decoder_input);
  return {std::move(eg.w1), std::move(eg.w2), std::move(dg.w3), std::move(dg.w4),
          std::move(dg.w5)};
}

}  // namespace gdn
