#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdn/graph.hpp"
#include "gdn/train.hpp"

namespace gdn {

// ---------------------------------------------------------------------------
// Self checks shipped with the CLI.

struct GradientCheckRow {
  std::string model;   // "autoencoder:<decoder>" or "generation"
  std::string tensor;
  double max_relative_error = 0.0;
};

/// Central differences against the analytic gradients of every parameter of
/// the autoencoder (each decoder kind) and of the generation loss with
/// frozen noise, on a random connected graph with `nodes` nodes.
std::vector<GradientCheckRow> gradient_check(Index nodes, std::uint64_t seed);

struct OracleCheckResult {
  double max_relative_error = 0.0;
  int graphs = 0;
  int filters = 0;
};

/// apply_filter against the dense eigendecomposition on `trials` random
/// graphs of up to `nodes` nodes, for inverse orders 1 and 3 and heat s = 1
/// orders 3 and 10. Error is the relative Frobenius norm.
OracleCheckResult oracle_check(Index nodes, int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Plot data.

struct KernelTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// lambda on an even grid over [0, 2]; exact and truncated inverse kernels,
/// exact and truncated heat kernels exp(-s lambda) for each order.
KernelTable kernel_approximation_table(const std::vector<std::size_t>& orders, double scale,
                                       int points);

/// Max |q(lambda) - exp(-s lambda)| over a dense grid on [0, 2].
double heat_truncation_error(double scale, std::size_t order, int points = 2001);

struct DecoderSpectrum {
  std::string decoder;
  Vector energy;  // per eigenvalue, summed over feature columns
  double high_frequency_fraction = 0.0;
};

struct DecoderSpectra {
  Vector eigenvalues;
  Vector original_energy;
  double original_high_fraction = 0.0;
  std::vector<DecoderSpectrum> decoders;
};

/// Trains one autoencoder per decoder kind on the full signal (every entry
/// observed) and compares the spectral energy of the reconstructions.
DecoderSpectra decoder_spectra(const SparseGraph& graph, const Matrix& x, const TrainConfig& config,
                               const std::vector<DecoderKind>& kinds);

}  // namespace gdn
