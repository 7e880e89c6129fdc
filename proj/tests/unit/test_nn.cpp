#include <cmath>

#include "doctest.h"
#include "gdn/adam.hpp"
#include "gdn/error.hpp"
#include "gdn/generators.hpp"
#include "gdn/nn.hpp"
#include "gdn/train.hpp"
#include "../support/oracles.hpp"

using namespace gdn;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

struct GradFixture {
  SparseGraph graph;
  Matrix x;
  Mask mask;
  AutoencoderConfig config;
  ModelParams params;
};

GradFixture make_fixture(std::uint64_t seed, DecoderKind kind, Normalization norm,
                         DecoderInput input) {
  Rng rng = make_rng(seed);
  GradFixture f;
  f.graph = testing::random_graph(16, 0.25, rng);
  f.x = testing::random_matrix(16, 5, rng);
  f.mask = Mask(16, 5);
  for (Index i = 0; i < 16; ++i) {
    for (Index j = 0; j < 5; ++j) f.mask(i, j) = uniform01(rng) < 0.8;
  }
  f.config.dims = {5, 6, 4, 7, input};
  f.config.decoder.kind = kind;
  f.config.encoder_normalization = norm;
  f.params = init_params(f.config.dims, rng);
  return f;
}

}  // namespace

TEST_CASE("init_params: determinism, Glorot bound, zero mean") {
  ModelDims dims{4, 4, 3, 0, DecoderInput::stack};
  Rng a = make_rng(5);
  Rng b = make_rng(5);
  const ModelParams p = init_params(dims, a);
  const ModelParams q = init_params(dims, b);
  for (std::size_t i = 0; i < 5; ++i) CHECK(*p.tensors()[i] == *q.tensors()[i]);
  CHECK(p.w1.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 8.0));
  CHECK(p.w3.rows() == 7);
  CHECK(p.w4.rows() == 7);
  CHECK(p.w5.cols() == 4);

  Rng rng = make_rng(77);
  const Matrix big = glorot_uniform(100, 100, rng);
  const double bound = std::sqrt(6.0 / 200.0);
  // uniform(-b, b) has sd b / sqrt(3); the mean of 1e4 draws has sd b / sqrt(3e4).
  CHECK(std::abs(big.mean()) <= 3.0 * bound / std::sqrt(3.0e4));
  CHECK(big.cwiseAbs().maxCoeff() <= bound);
  CHECK_THROWS_AS(glorot_uniform(0, 3, rng), UsageError);
}

TEST_CASE("gcn_encode: edgeless graph is a plain MLP") {
  Rng rng = make_rng(3);
  const LaplacianOperator op(empty_graph(5));
  const Matrix x = testing::random_matrix(5, 3, rng);
  const Matrix w1 = testing::random_matrix(3, 4, rng);
  const Matrix w2 = testing::random_matrix(4, 2, rng);
  const EncoderOutput out = gcn_encode(op, x, w1, w2, {});
  CHECK(max_abs(out.cache.h1 - activate(Activation::leaky_relu, x * w1)) < 1e-14);
  CHECK(out.h.cols() == 6);
  CHECK(gcn_encode(op, x, w1, w2, {}, DecoderInput::last_layer).h.cols() == 2);
}

TEST_CASE("gcn_layer: K2 swaps the two nodes") {
  const LaplacianOperator op(complete_graph(2));
  Matrix x(2, 1);
  x << 1, 0;
  const Matrix h = gcn_layer(op, x, scalar(1.0), Activation::identity);
  CHECK(max_abs(h - (Matrix(2, 1) << 0, 1).finished()) < 1e-15);
  CHECK_THROWS_AS(gcn_layer(op, Matrix::Zero(3, 1), scalar(1.0), Activation::identity), UsageError);
}

TEST_CASE("encoder spectral response equals 1 - lambda") {
  Rng rng = make_rng(19);
  for (int t = 0; t < 5; ++t) {
    const SparseGraph g = testing::random_graph(2 + static_cast<Index>(rng() % 62), 0.15, rng);
    const LaplacianOperator op(g);
    const Matrix x = testing::random_matrix(g.num_nodes(), 3, rng);
    const Matrix h = gcn_layer(op, x, Matrix::Identity(3, 3), Activation::identity);
    const auto spectrum =
        testing::dense_spectrum(testing::dense_normalized_laplacian(g.dense_adjacency()));
    const Matrix expected = testing::spectral_apply(spectrum, [](double l) { return 1.0 - l; }, x);
    CHECK(max_abs(h - expected) <= 1e-10);
  }
}

TEST_CASE("gdn_decode: zero input gives zero output") {
  Rng rng = make_rng(2);
  const LaplacianOperator op(erdos_renyi(10, 0.3, rng));
  const Matrix w = Matrix::Identity(4, 4);
  CHECK(gdn_decode(op, Matrix::Zero(10, 4), w, w, w, {}).x.isZero());
}

TEST_CASE("gdn_decode: K2 chain with identity activations") {
  const LaplacianOperator op(complete_graph(2));
  DecoderConfig cfg;
  cfg.activation = Activation::identity;
  Matrix h(2, 1);
  h << 1, 0;
  const DecoderOutput out = gdn_decode(op, h, scalar(1), scalar(1), scalar(1), cfg);
  CHECK(max_abs(out.cache.m - (Matrix(2, 1) << 8, -7).finished()) < 1e-13);
  // Psi^-1 via the eigen oracle: components 1/2 (m0+m1) on (1,1) with r(0)=1,
  // 1/2 (m0-m1) on (1,-1) with r(2)=19/3.
  const double low = 0.5;
  const double high = 7.5 * 19.0 / 3.0;
  const Matrix z = (Matrix(2, 1) << low + high, low - high).finished();
  CHECK(max_abs(out.cache.z - z) < 1e-12);
  const Matrix r = z.cwiseMax(0.0);
  const double r_low = 0.5 * (r(0, 0) + r(1, 0));
  const double r_high = 0.5 * (r(0, 0) - r(1, 0)) * (-1.0 / 3.0);
  CHECK(max_abs(out.x - (Matrix(2, 1) << r_low + r_high, r_low - r_high).finished()) < 1e-12);
}

TEST_CASE("gdn_decode composition matches the spectral oracle") {
  Rng rng = make_rng(29);
  for (int t = 0; t < 4; ++t) {
    const SparseGraph g = testing::random_graph(8 + static_cast<Index>(rng() % 56), 0.15, rng);
    const LaplacianOperator op(g);
    const Index n = g.num_nodes();
    const Matrix h = testing::random_matrix(n, 3, rng);
    DecoderConfig cfg;
    cfg.activation = Activation::identity;
    const Matrix eye = Matrix::Identity(3, 3);
    const Matrix actual = gdn_decode(op, h, eye, eye, eye, cfg).x;
    const auto s = testing::dense_spectrum(testing::dense_normalized_laplacian(g.dense_adjacency()));
    const auto poly = [](std::vector<double> c) {
      return [c](double l) {
        double acc = 0, p = 1;
        for (double v : c) acc += v * p, p *= l;
        return acc;
      };
    };
    const Matrix m = testing::spectral_apply(s, poly({1, 1, 1, 1}), h);
    const Matrix z = testing::spectral_apply(s, poly({1, 1, 0.5, 1.0 / 6}), m);
    const Matrix expected = testing::spectral_apply(s, poly({1, -1, 0.5, -1.0 / 6}), z.cwiseMax(0.0));
    CHECK(max_abs(actual - expected) <= 1e-10 * std::max(1.0, max_abs(expected)));
  }
}

TEST_CASE("masked_mse") {
  Rng rng = make_rng(1);
  const Matrix x = testing::random_matrix(6, 4, rng);
  Mask all = Mask::Constant(6, 4, true);
  CHECK(masked_mse(x, x, all).value == 0.0);
  CHECK(masked_mse(scalar(2), scalar(0), Mask::Constant(1, 1, true)).value == 4.0);
  const Matrix y = testing::random_matrix(6, 4, rng);
  CHECK(std::abs(masked_mse(x, y, all).value - (x - y).squaredNorm() / 24.0) <= 1e-12);
  Mask some = Mask::Constant(6, 4, false);
  some(0, 0) = true;
  const LossResult r = masked_mse(x, y, some);
  CHECK(r.grad(0, 0) == doctest::Approx(2.0 * (y(0, 0) - x(0, 0))));
  CHECK(r.grad(1, 1) == 0.0);
  CHECK_THROWS_AS(masked_mse(x, y, Mask::Constant(6, 4, false)), UsageError);
  CHECK_THROWS_AS(masked_mse(x, scalar(1), all), UsageError);
}

TEST_CASE("autoencoder gradients match central finite differences") {
  struct Case {
    DecoderKind kind;
    Normalization norm;
    DecoderInput input;
  };
  const std::vector<Case> cases = {
      {DecoderKind::gdn, Normalization::symmetric, DecoderInput::stack},
      {DecoderKind::gdn, Normalization::left, DecoderInput::stack},
      {DecoderKind::gdn, Normalization::symmetric, DecoderInput::last_layer},
      {DecoderKind::inverse_only, Normalization::symmetric, DecoderInput::stack},
      {DecoderKind::gala, Normalization::symmetric, DecoderInput::stack},
      {DecoderKind::gcn, Normalization::symmetric, DecoderInput::stack},
  };
  std::uint64_t seed = 100;
  for (const Case& c : cases) {
    GradFixture f = make_fixture(seed++, c.kind, c.norm, c.input);
    auto shared = std::make_shared<const SparseGraph>(f.graph);
    const LaplacianOperator enc(shared, c.norm);
    const LaplacianOperator dec(shared);
    const ForwardResult fwd = autoencoder_forward(enc, dec, f.x, f.params, f.config);
    const LossResult loss = masked_mse(f.x, fwd.output, f.mask);
    const ModelParams grads = autoencoder_backward(fwd.cache, f.params, f.config, loss.grad);
    // both ReLU regions must be exercised
    CHECK((fwd.cache.decoder.z.array() > 0).any());
    CHECK((fwd.cache.decoder.z.array() < 0).any());
    const auto objective = [&] {
      return masked_mse(f.x, autoencoder_forward(enc, dec, f.x, f.params, f.config).output, f.mask)
          .value;
    };
    auto tensors = f.params.tensors();
    const auto analytic = grads.tensors();
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      const Matrix numeric = testing::finite_difference(*tensors[i], objective);
      const double err = testing::max_relative_error(*analytic[i], numeric);
      INFO(to_string(c.kind) << " tensor " << ModelParams::names()[i] << " rel err " << err);
      CHECK(err <= 1e-4);
    }
  }
}

TEST_CASE("backward: zero loss gradient, dead units, missing cache") {
  GradFixture f = make_fixture(3, DecoderKind::gdn, Normalization::symmetric, DecoderInput::stack);
  const LaplacianOperator op(f.graph);
  const ForwardResult fwd = autoencoder_forward(op, op, f.x, f.params, f.config);
  const ModelParams zero =
      autoencoder_backward(fwd.cache, f.params, f.config, Matrix::Zero(16, 5));
  for (const Matrix* g : zero.tensors()) CHECK(g->isZero());

  // W4 = 0 makes every wavelet-domain pre-activation zero, so ReLU is dead.
  ModelParams dead = f.params;
  dead.w4.setZero();
  const ForwardResult fd = autoencoder_forward(op, op, f.x, dead, f.config);
  const ModelParams gd = autoencoder_backward(fd.cache, dead, f.config, Matrix::Ones(16, 5));
  CHECK(gd.w5.isZero());

  CHECK_THROWS_AS(autoencoder_backward(ForwardCache{}, f.params, f.config, Matrix::Ones(16, 5)),
                  UsageError);
}

TEST_CASE("adam_step") {
  Matrix theta = scalar(0.0);
  Matrix grad = scalar(0.5);
  AdamState state;
  std::array<Matrix*, 1> p{&theta};
  std::array<const Matrix*, 1> g{&grad};
  adam_step(p, g, state, 0.01);
  CHECK(theta(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(state.t == 1);

  Matrix still = scalar(1.25);
  Matrix zero = scalar(0.0);
  AdamState s2;
  std::array<Matrix*, 1> p2{&still};
  std::array<const Matrix*, 1> g2{&zero};
  for (int i = 0; i < 10; ++i) adam_step(p2, g2, s2, 0.1);
  CHECK(still(0, 0) == 1.25);

  Matrix bad = scalar(std::nan(""));
  std::array<const Matrix*, 1> g3{&bad};
  const Matrix before = theta;
  const AdamState saved = state;
  CHECK_THROWS_AS(adam_step(p, g3, state, 0.01), NumericalError);
  CHECK(theta == before);
  CHECK(state.t == saved.t);
}

TEST_CASE("train_autoencoder: improves, beats mean, deterministic") {
  Rng rng = make_rng(8);
  const SparseGraph g = erdos_renyi(64, 0.08, rng);
  // smooth features: diffused noise
  const LaplacianOperator op(g);
  Matrix x = apply_filter(op, heat_filter(2.0, 8, false), testing::random_matrix(64, 6, rng));
  const Mask all = Mask::Constant(64, 6, true);
  TrainConfig cfg;
  cfg.model.dims = {6, 16, 8, 0, DecoderInput::stack};
  cfg.epochs = 100;
  cfg.lr = 0.01;
  cfg.keep_prob = 0.8;
  cfg.seed = 4;
  const TrainResult a = train_autoencoder(g, x, x, all, cfg);
  REQUIRE(a.loss_log.size() == 100);
  CHECK(a.loss_log.back() < a.loss_log.front());
  const Matrix recon = reconstruct(g, x, a.params, cfg.model);
  const double rmse = std::sqrt((recon - x).squaredNorm() / static_cast<double>(x.size()));
  const double mean_rmse =
      std::sqrt((x.array() - x.mean()).square().sum() / static_cast<double>(x.size()));
  CHECK(rmse < mean_rmse);
  const TrainResult b = train_autoencoder(g, x, x, all, cfg);
  for (std::size_t i = 0; i < 5; ++i) CHECK(*a.params.tensors()[i] == *b.params.tensors()[i]);
  CHECK(a.loss_log == b.loss_log);
}

TEST_CASE("checkpoint round trip") {
  GradFixture f = make_fixture(9, DecoderKind::gala, Normalization::left, DecoderInput::stack);
  const auto path = std::filesystem::temp_directory_path() / "gdn_checkpoint_test.json";
  save_checkpoint(path, f.params, f.config, 9);
  const Checkpoint ck = load_checkpoint(path);
  CHECK(ck.seed == 9);
  CHECK(ck.config.decoder.kind == DecoderKind::gala);
  CHECK(ck.config.encoder_normalization == Normalization::left);
  for (std::size_t i = 0; i < 5; ++i) CHECK(*ck.params.tensors()[i] == *f.params.tensors()[i]);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
}
