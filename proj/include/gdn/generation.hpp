#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gdn/graph.hpp"
#include "gdn/nn.hpp"

namespace gdn {

// ---------------------------------------------------------------------------
// Molecule-style datasets: many small graphs with one-hot node labels.

struct LabeledGraph {
  SparseGraph graph;
  std::vector<int> node_labels;
  int graph_label = 0;
};

struct GraphDataset {
  std::string name;
  std::vector<LabeledGraph> graphs;
  int num_node_labels = 0;  // one-hot width

  Matrix features(std::size_t g) const;
};

/// TU layout: <name>_A.txt, <name>_graph_indicator.txt, <name>_node_labels.txt
/// and, when present, <name>_graph_labels.txt. Edge labels are ignored.
GraphDataset load_tu_dataset(const std::filesystem::path& dir, const std::string& name);

/// Block format, one graph per block:
///   graph <n> <m> [label]
///   <n> lines with a node label
///   <m> lines "u v" (0-based)
GraphDataset parse_graph_blocks(std::istream& in);
void write_graph_blocks(std::ostream& out, const GraphDataset& data);

/// Either a TU directory (detected by *_A.txt) or a block file.
GraphDataset load_graph_dataset(const std::filesystem::path& path);

/// 188 tree-plus-ring graphs around 18 nodes with 7 node labels whose
/// placement depends on the local structure.
GraphDataset synthetic_molecules(std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Variational graph autoencoder with an optional GDN feature decoder.

inline constexpr double kLogVarFloor = -10.0;
inline constexpr double kLogVarCeil = 10.0;
inline constexpr double kLogitClamp = 30.0;

struct VgaeDims {
  Index input = 0;
  Index hidden = 32;
  Index latent = 16;
  Index decoder_width = 32;  // width of the projection Z Wp fed to the GDN decoder
};

/// W0 (d x h) shared layer, Wmu / Wlv (h x z) heads, Wp (z x m) projection,
/// W3 (m x m), W4 (m x m), W5 (m x d) GDN decoder.
struct VgaeParams {
  Matrix w0, w_mu, w_lv, wp, w3, w4, w5;

  std::array<Matrix*, 7> tensors() { return {&w0, &w_mu, &w_lv, &wp, &w3, &w4, &w5}; }
  std::array<const Matrix*, 7> tensors() const {
    return {&w0, &w_mu, &w_lv, &wp, &w3, &w4, &w5};
  }
  static constexpr std::array<const char*, 7> names() {
    return {"W0", "Wmu", "Wlv", "Wp", "W3", "W4", "W5"};
  }
};

VgaeParams init_vgae_params(const VgaeDims& dims, Rng& rng);

struct LatentState {
  Matrix mu;
  Matrix log_var;  // clamped to [kLogVarFloor, kLogVarCeil]
  Matrix z;
};

struct VgaeEncoderCache {
  Matrix px, pre, h, ph, log_var_raw;
};

/// H = leaky_relu(P X W0); mu = P H Wmu; log_var = P H Wlv;
/// Z = mu + exp(log_var / 2) * eta.
LatentState variational_encode(const LaplacianOperator& op, const Matrix& x,
                               const VgaeParams& params, const Matrix& eta,
                               VgaeEncoderCache* cache = nullptr);

/// KL(q || N(0, I)) averaged over nodes.
double kl_divergence(const Matrix& mu, const Matrix& log_var);

double edge_logit(const Matrix& z, Index i, Index j);
double edge_probability(const Matrix& z, Index i, Index j);

struct GenerationWeights {
  double feature = 1.0;  // 0 turns the GDN term off
  double kl = 1.0;
};

struct GenerationLoss {
  double total = 0.0;
  double edge = 0.0;
  double kl = 0.0;
  double feature = 0.0;
};

struct GenerationModelConfig {
  VgaeDims dims;
  DecoderConfig decoder;
  GenerationWeights weights;
};

/// Loss over one graph: positively reweighted BCE over all unordered node
/// pairs (mean per pair), KL, and the weighted feature MSE of the GDN decode
/// of Z Wp. With `grads` set, fills exact gradients for the given eta.
GenerationLoss generation_loss(const SparseGraph& graph, const Matrix& x, const VgaeParams& params,
                               const Matrix& eta, const GenerationModelConfig& config,
                               VgaeParams* grads = nullptr);

// ---------------------------------------------------------------------------
// Metrics.

/// Exact ROC AUC by rank sums with tie averaging; nullopt without both classes.
std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Average precision over distinct score thresholds.
std::optional<double> average_precision(const std::vector<double>& scores,
                                        const std::vector<int>& labels);

struct EdgeMetrics {
  double log_likelihood = 0.0;  // mean per-pair log p(A_ij | Z)
  std::optional<double> auc;
  std::optional<double> ap;
};

/// Scores every unordered pair of one graph with Z = mu.
EdgeMetrics evaluate_graph(const SparseGraph& graph, const Matrix& x, const VgaeParams& params);

// ---------------------------------------------------------------------------
// Training.

struct GeneratorConfig {
  GenerationModelConfig model;
  int iterations = 200;
  double lr = 0.01;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct GeneratorRun {
  VgaeParams params;
  std::vector<double> loss_log;
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> test_index;
  double log_likelihood = 0.0;  // means over test graphs
  double auc = 0.0;
  double ap = 0.0;
};

/// Seeded split, full-batch Adam over the train graphs (one update per
/// iteration, gradients averaged over graphs), evaluation on the test graphs.
GeneratorRun train_generator(const GraphDataset& data, const GeneratorConfig& config);

}  // namespace gdn
