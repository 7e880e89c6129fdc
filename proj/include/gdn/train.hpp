#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gdn/graph.hpp"
#include "gdn/nn.hpp"

namespace gdn {

struct TrainConfig {
  AutoencoderConfig model;
  double lr = 0.005;
  int epochs = 200;
  double keep_prob = 1.0;  // DropEdge retention probability
  std::uint64_t seed = 0;
};

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_log;  // masked training loss before each update
};

/// Full-batch training of the GCN encoder / GDN decoder autoencoder. The
/// network sees `input` (unobserved entries already blanked) and the loss is
/// the masked MSE against `target` over `observed`.
TrainResult train_autoencoder(const SparseGraph& graph, const Matrix& input, const Matrix& target,
                              const Mask& observed, const TrainConfig& config);

/// Deterministic reconstruction on the full graph (no DropEdge).
Matrix reconstruct(const SparseGraph& graph, const Matrix& input, const ModelParams& params,
                   const AutoencoderConfig& config);

// ---------------------------------------------------------------------------
// Checkpoints: JSON container with a format tag, version, config and tensors.

inline constexpr int kCheckpointFormatVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const AutoencoderConfig& config, std::uint64_t seed);

struct Checkpoint {
  ModelParams params;
  AutoencoderConfig config;
  std::uint64_t seed = 0;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gdn
