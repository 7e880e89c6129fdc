#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdn/graph.hpp"
#include "gdn/train.hpp"

namespace gdn {

/// Feature matrix with its defined cells (rating datasets leave most cells
/// undefined; dense datasets define every cell).
struct FeatureData {
  Matrix values;  // undefined cells hold 0
  Mask defined;
};

FeatureData fully_defined(Matrix values);

/// Ground truth split into observed (train) and held-out (test) entries.
struct MaskedFeatures {
  Matrix x;
  Mask train;
  Mask test;
  double missing_rate = 0.0;

  /// X with every non-train entry zeroed: what a model is allowed to see.
  Matrix observed_input() const;
};

/// Each defined entry goes to the test split independently with probability
/// `missing_rate`. Throws UsageError if either split ends up empty.
MaskedFeatures generate_mask(const FeatureData& data, double missing_rate, Rng& rng);

/// Split from an explicit test mask (must be a subset of the defined cells).
MaskedFeatures masked_from_test(const FeatureData& data, const Mask& test);

/// Observed entries are copied; every other entry gets the mean of the
/// observed entries (per column when `per_column`, falling back to the global
/// mean for columns with no observations).
Matrix mean_impute(const MaskedFeatures& mf, bool per_column = false);

/// Feature-space KNN: for every missing (i, c), the mean of column c over the
/// k most cosine-similar nodes that observe c. Similarity uses the entries
/// both nodes observe; nodes without a defined similarity are never donors.
/// Falls back to the global observed mean when no donor exists.
Matrix knn_impute(const MaskedFeatures& mf, int k);

/// Hard-rank iterative SVD completion.
Matrix svd_impute(const MaskedFeatures& mf, Index rank, int iters, std::uint64_t seed = 0);

/// Best rank-`rank` approximation. Exact (full SVD) for small matrices,
/// randomized subspace iteration otherwise.
Matrix low_rank_approximation(const Matrix& a, Index rank, Rng& rng);

/// sqrt(mean over mask of (truth - prediction)^2).
double evaluate_rmse(const Matrix& truth, const Matrix& prediction, const Mask& mask);

/// Copies observed entries of mf.x over `prediction`.
Matrix restore_observed(const MaskedFeatures& mf, Matrix prediction);

// ---------------------------------------------------------------------------
// Benchmark orchestration.

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods = {"mean", "knn",          "svd",        "gdn",
                                                   "inverse_only", "gcn_decoder", "gala"};
  return methods;
}

struct BenchmarkConfig {
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double missing_rate = 0.1;
  std::optional<Mask> test_mask;  // overrides random masking when set
  bool per_column_mean = false;
  int knn_k = 5;
  Index svd_rank = 16;
  int svd_iters = 100;
  TrainConfig train;  // decoder kind and seed are set per method / seed
  int threads = 1;
  std::string config_hash;
};

struct ImputationReport {
  std::string method;
  double rmse_mean = 0.0;
  std::vector<double> rmse_per_seed;
  std::vector<std::uint64_t> seeds;
  std::string config_hash;
  double seconds = 0.0;
};

/// Imputed matrix for one method on one split.
Matrix impute_with(const std::string& method, const SparseGraph& graph, const MaskedFeatures& mf,
                   const BenchmarkConfig& config, std::uint64_t seed);

/// For every method and seed: fresh mask (seeded), fit, and test RMSE. The
/// reported RMSE is the mean of the per-seed RMSEs.
std::vector<ImputationReport> run_benchmark(const SparseGraph& graph, const FeatureData& data,
                                            const BenchmarkConfig& config);

struct SweepRow {
  double missing_rate;
  std::string method;
  double rmse;
};

std::vector<SweepRow> run_sweep(const SparseGraph& graph, const FeatureData& data,
                                const BenchmarkConfig& config, const std::vector<double>& rates);

}  // namespace gdn
