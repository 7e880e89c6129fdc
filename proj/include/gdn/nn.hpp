#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gdn/laplacian.hpp"
#include "gdn/spectral.hpp"

namespace gdn {

enum class Activation { identity, relu, leaky_relu };

inline constexpr double kLeakySlope = 0.2;

Matrix activate(Activation act, const Matrix& pre);
/// Backpropagates `grad` through the activation evaluated at `pre`.
Matrix activate_backward(Activation act, const Matrix& pre, const Matrix& grad);

std::string to_string(Activation act);
Activation parse_activation(const std::string& name);

/// Glorot-uniform matrix with entries in +-sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng);

enum class DecoderInput { stack, last_layer };

struct ModelDims {
  Index input = 0;          // d, feature width
  Index hidden1 = 256;      // first GCN layer
  Index hidden2 = 128;      // second GCN layer
  Index decoder_width = 0;  // m; 0 means "encoder output width"
  DecoderInput decoder_input = DecoderInput::stack;

  Index encoder_output() const {
    return decoder_input == DecoderInput::stack ? hidden1 + hidden2 : hidden2;
  }
  Index resolved_decoder_width() const {
    return decoder_width > 0 ? decoder_width : encoder_output();
  }
};

/// Encoder weights W1 (d x h1), W2 (h1 x h2); decoder weights W3 (enc x m),
/// W4 (m x m), W5 (m x d). No biases.
struct ModelParams {
  Matrix w1, w2, w3, w4, w5;

  std::array<Matrix*, 5> tensors() { return {&w1, &w2, &w3, &w4, &w5}; }
  std::array<const Matrix*, 5> tensors() const { return {&w1, &w2, &w3, &w4, &w5}; }
  static constexpr std::array<const char*, 5> names() { return {"W1", "W2", "W3", "W4", "W5"}; }
  bool all_finite() const;
};

ModelParams init_params(const ModelDims& dims, Rng& rng);

// ---------------------------------------------------------------------------
// Encoder: two GCN layers with propagation matrix P = I - L.

struct EncoderConfig {
  Activation activation = Activation::leaky_relu;
};

struct EncoderCache {
  const LaplacianOperator* op = nullptr;  // operator the layer ran on
  Matrix px;    // P X
  Matrix pre1;  // P X W1
  Matrix h1;
  Matrix ph1;   // P H1
  Matrix pre2;  // P H1 W2
  Matrix h2;
};

struct EncoderOutput {
  Matrix h;
  EncoderCache cache;
};

/// One GCN layer act(P X W).
Matrix gcn_layer(const LaplacianOperator& op, const Matrix& x, const Matrix& w, Activation act);

/// `op` must outlive the returned cache.
EncoderOutput gcn_encode(const LaplacianOperator& op, const Matrix& x, const Matrix& w1,
                         const Matrix& w2, const EncoderConfig& config,
                         DecoderInput output = DecoderInput::stack);

struct EncoderGradients {
  Matrix w1, w2;
};

EncoderGradients encoder_backward(const EncoderCache& cache, const Matrix& w2,
                                  const EncoderConfig& config, const Matrix& grad_h,
                                  DecoderInput output = DecoderInput::stack);

// ---------------------------------------------------------------------------
// Decoder: M = act(p(L) H W3), X' = Psi_s ReLU(Psi_s^-1 M W4) W5, plus the
// ablation variants that swap the first-stage filter or drop the wavelets.

enum class DecoderKind {
  gdn,           // inverse filter + wavelet de-noising
  inverse_only,  // inverse filter, wavelet transforms replaced by identity
  gala,          // first-order inverse filter 1 + lambda, no wavelets
  gcn,           // GCN propagation 1 - lambda, no wavelets
};

std::string to_string(DecoderKind kind);
DecoderKind parse_decoder_kind(const std::string& name);

struct DecoderConfig {
  DecoderKind kind = DecoderKind::gdn;
  std::size_t inverse_order = 3;
  double wavelet_scale = 1.0;
  std::size_t wavelet_order = 3;
  Activation activation = Activation::leaky_relu;

  PolynomialFilter first_stage() const;
  bool uses_wavelets() const { return kind == DecoderKind::gdn; }
};

struct DecoderCache {
  const LaplacianOperator* op = nullptr;
  Matrix filtered;   // p(L) H
  Matrix pre_m;      // p(L) H W3
  Matrix m;
  Matrix wave_in;    // Psi^-1 M (M itself without wavelets)
  Matrix z;          // wave_in W4, pre-ReLU
  Matrix r;          // ReLU(z)
  Matrix wave_out;   // Psi R (R itself without wavelets)
};

struct DecoderOutput {
  Matrix x;
  DecoderCache cache;
};

DecoderOutput gdn_decode(const LaplacianOperator& op, const Matrix& h, const Matrix& w3,
                         const Matrix& w4, const Matrix& w5, const DecoderConfig& config);

struct DecoderGradients {
  Matrix w3, w4, w5;
  Matrix h;  // gradient with respect to the decoder input
};

DecoderGradients decoder_backward(const DecoderCache& cache, const Matrix& w3, const Matrix& w4,
                                  const Matrix& w5, const DecoderConfig& config,
                                  const Matrix& grad_x);

// ---------------------------------------------------------------------------
// Loss.

struct LossResult {
  double value = 0.0;
  Matrix grad;  // d loss / d prediction
};

/// Mean squared error over the entries selected by `mask`.
LossResult masked_mse(const Matrix& target, const Matrix& prediction, const Mask& mask);

// ---------------------------------------------------------------------------
// Full autoencoder.

struct AutoencoderConfig {
  ModelDims dims;
  EncoderConfig encoder;
  DecoderConfig decoder;
  Normalization encoder_normalization = Normalization::symmetric;
  bool self_loops = false;
};

struct ForwardCache {
  EncoderCache encoder;
  DecoderCache decoder;
};

struct ForwardResult {
  Matrix output;
  ForwardCache cache;
};

/// The encoder runs on `encoder_op` (possibly edge-dropped), the decoder on
/// `decoder_op` (the full symmetric Laplacian). Both must outlive the cache.
ForwardResult autoencoder_forward(const LaplacianOperator& encoder_op,
                                  const LaplacianOperator& decoder_op, const Matrix& x,
                                  const ModelParams& params, const AutoencoderConfig& config);

/// Exact reverse-mode gradients of the loss whose output-gradient is
/// `loss_grad`. The result has the same shapes as `params`.
ModelParams autoencoder_backward(const ForwardCache& cache, const ModelParams& params,
                                 const AutoencoderConfig& config, const Matrix& loss_grad);

}  // namespace gdn
