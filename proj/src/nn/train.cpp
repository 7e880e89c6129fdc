#include "gdn/train.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include "json.hpp"

#include "gdn/adam.hpp"
#include "gdn/error.hpp"

namespace gdn {

TrainResult train_autoencoder(const SparseGraph& graph, const Matrix& input, const Matrix& target,
                              const Mask& observed, const TrainConfig& config) {
  if (input.rows() != graph.num_nodes()) throw UsageError("train_autoencoder: row mismatch");
  if (config.epochs < 0) throw UsageError("train_autoencoder: negative epoch count");
  AutoencoderConfig model = config.model;
  model.dims.input = input.cols();

  Rng init_rng = make_rng(config.seed, 1);
  Rng edge_rng = make_rng(config.seed, 2);

  TrainResult result;
  result.params = init_params(model.dims, init_rng);
  result.loss_log.reserve(static_cast<std::size_t>(config.epochs));

  auto full_graph = std::make_shared<const SparseGraph>(graph);
  const LaplacianOperator full_encoder_op(full_graph, model.encoder_normalization, model.self_loops);
  const LaplacianOperator decoder_op(full_graph, Normalization::symmetric, false);

  AdamState adam;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::unique_ptr<LaplacianOperator> dropped;
    if (config.keep_prob < 1.0) {
      dropped = std::make_unique<LaplacianOperator>(
          std::make_shared<const SparseGraph>(drop_edge(graph, config.keep_prob, edge_rng)),
          model.encoder_normalization, model.self_loops);
    }
    const LaplacianOperator& encoder_op = dropped ? *dropped : full_encoder_op;
    const ForwardResult fwd =
        autoencoder_forward(encoder_op, decoder_op, input, result.params, model);
    const LossResult loss = masked_mse(target, fwd.output, observed);
    if (!std::isfinite(loss.value)) {
      throw NumericalError("training diverged at epoch " + std::to_string(epoch));
    }
    result.loss_log.push_back(loss.value);
    const ModelParams grads = autoencoder_backward(fwd.cache, result.params, model, loss.grad);
    adam_step(result.params, grads, adam, config.lr);
  }
  return result;
}

Matrix reconstruct(const SparseGraph& graph, const Matrix& input, const ModelParams& params,
                   const AutoencoderConfig& config) {
  auto shared = std::make_shared<const SparseGraph>(graph);
  const LaplacianOperator encoder_op(shared, config.encoder_normalization, config.self_loops);
  const LaplacianOperator decoder_op(shared, Normalization::symmetric, false);
  return autoencoder_forward(encoder_op, decoder_op, input, params, config).output;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j, const std::string& name) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw IoError("checkpoint: tensor " + name + " has inconsistent shape");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index jj = 0; jj < cols; ++jj) m(i, jj) = data[k++].get<double>();
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const AutoencoderConfig& config, std::uint64_t seed) {
  json doc;
  doc["format"] = "gdn-checkpoint";
  doc["format_version"] = kCheckpointFormatVersion;
  doc["seed"] = seed;
  doc["dims"] = {{"input", config.dims.input},
                 {"hidden1", config.dims.hidden1},
                 {"hidden2", config.dims.hidden2},
                 {"decoder_width", config.dims.resolved_decoder_width()},
                 {"decoder_input", config.dims.decoder_input == DecoderInput::stack ? "stack" : "h2"}};
  doc["encoder"] = {{"activation", to_string(config.encoder.activation)},
                    {"normalization",
                     config.encoder_normalization == Normalization::symmetric ? "symmetric" : "left"},
                    {"self_loops", config.self_loops}};
  doc["decoder"] = {{"kind", to_string(config.decoder.kind)},
                    {"inverse_order", config.decoder.inverse_order},
                    {"wavelet_scale", config.decoder.wavelet_scale},
                    {"wavelet_order", config.decoder.wavelet_order},
                    {"activation", to_string(config.decoder.activation)}};
  json tensors = json::object();
  const auto names = ModelParams::names();
  const auto values = params.tensors();
  for (std::size_t i = 0; i < names.size(); ++i) tensors[names[i]] = matrix_to_json(*values[i]);
  doc["params"] = std::move(tensors);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("checkpoint '" + path.string() + "': " + e.what());
  }
  try {
    if (doc.at("format") != "gdn-checkpoint") throw IoError("not a gdn checkpoint");
    if (doc.at("format_version").get<int>() != kCheckpointFormatVersion) {
      throw IoError("unsupported checkpoint format version");
    }
    Checkpoint ck;
    ck.seed = doc.at("seed").get<std::uint64_t>();
    const json& dims = doc.at("dims");
    ck.config.dims.input = dims.at("input").get<Index>();
    ck.config.dims.hidden1 = dims.at("hidden1").get<Index>();
    ck.config.dims.hidden2 = dims.at("hidden2").get<Index>();
    ck.config.dims.decoder_width = dims.at("decoder_width").get<Index>();
    ck.config.dims.decoder_input =
        dims.at("decoder_input") == "stack" ? DecoderInput::stack : DecoderInput::last_layer;
    const json& enc = doc.at("encoder");
    ck.config.encoder.activation = parse_activation(enc.at("activation").get<std::string>());
    ck.config.encoder_normalization =
        enc.at("normalization") == "left" ? Normalization::left : Normalization::symmetric;
    ck.config.self_loops = enc.at("self_loops").get<bool>();
    const json& dec = doc.at("decoder");
    ck.config.decoder.kind = parse_decoder_kind(dec.at("kind").get<std::string>());
    ck.config.decoder.inverse_order = dec.at("inverse_order").get<std::size_t>();
    ck.config.decoder.wavelet_scale = dec.at("wavelet_scale").get<double>();
    ck.config.decoder.wavelet_order = dec.at("wavelet_order").get<std::size_t>();
    ck.config.decoder.activation = parse_activation(dec.at("activation").get<std::string>());
    const auto names = ModelParams::names();
    auto tensors = ck.params.tensors();
    for (std::size_t i = 0; i < names.size(); ++i) {
      *tensors[i] = matrix_from_json(doc.at("params").at(names[i]), names[i]);
    }
    return ck;
  } catch (const json::exception& e) {
    throw IoError("checkpoint '" + path.string() + "': " + e.what());
  } catch (const UsageError& e) {
    throw IoError("checkpoint '" + path.string() + "': " + e.what());
  }
}

}  // namespace gdn
