#include <algorithm>
#include <chrono>

#include "gdn/error.hpp"
#include "gdn/imputation.hpp"
#include "gdn/parallel.hpp"

namespace gdn {

namespace {

bool is_model_method(const std::string& method) {
  return method == "gdn" || method == "inverse_only" || method == "gcn_decoder" ||
         method == "gala";
}

void validate_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw UsageError("no imputation methods selected");
  const auto& known = known_methods();
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw UsageError("unknown imputation method '" + m + "'");
    }
  }
}

MaskedFeatures split_for_seed(const FeatureData& data, const BenchmarkConfig& config,
                              double rate, std::uint64_t seed) {
  if (config.test_mask) return masked_from_test(data, *config.test_mask);
  Rng rng = make_rng(seed, 10);
  return generate_mask(data, rate, rng);
}

}  // namespace

Matrix impute_with(const std::string& method, const SparseGraph& graph, const MaskedFeatures& mf,
                   const BenchmarkConfig& config, std::uint64_t seed) {
  if (method == "mean") return mean_impute(mf, config.per_column_mean);
  if (method == "knn") return knn_impute(mf, config.knn_k);
  if (method == "svd") return svd_impute(mf, config.svd_rank, config.svd_iters, seed);
  if (!is_model_method(method)) throw UsageError("unknown imputation method '" + method + "'");

  TrainConfig train = config.train;
  train.seed = seed;
  train.model.dims.input = mf.x.cols();
  train.model.decoder.kind = parse_decoder_kind(method);
  const Matrix input = mf.observed_input();
  const TrainResult fit = train_autoencoder(graph, input, mf.x, mf.train, train);
  return restore_observed(mf, reconstruct(graph, input, fit.params, train.model));
}

std::vector<ImputationReport> run_benchmark(const SparseGraph& graph, const FeatureData& data,
                                            const BenchmarkConfig& config) {
  validate_methods(config.methods);
  if (config.seeds.empty()) throw UsageError("no seeds given");
  if (data.values.rows() != graph.num_nodes()) {
    throw UsageError("feature rows do not match the graph's node count");
  }
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_seeds = config.seeds.size();
  std::vector<double> rmse(n_methods * n_seeds);
  std::vector<double> seconds(n_methods * n_seeds);

  parallel_for(n_seeds, config.threads, [&](std::size_t s) {
    const std::uint64_t seed = config.seeds[s];
    const MaskedFeatures mf = split_for_seed(data, config, config.missing_rate, seed);
    for (std::size_t m = 0; m < n_methods; ++m) {
      const auto start = std::chrono::steady_clock::now();
      const Matrix pred = impute_with(config.methods[m], graph, mf, config, seed);
      rmse[m * n_seeds + s] = evaluate_rmse(mf.x, pred, mf.test);
      seconds[m * n_seeds + s] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  std::vector<ImputationReport> reports;
  for (std::size_t m = 0; m < n_methods; ++m) {
    ImputationReport r;
    r.method = config.methods[m];
    r.seeds = config.seeds;
    r.config_hash = config.config_hash;
    r.rmse_per_seed.assign(rmse.begin() + static_cast<std::ptrdiff_t>(m * n_seeds),
                           rmse.begin() + static_cast<std::ptrdiff_t>((m + 1) * n_seeds));
    double sum = 0.0;
    for (double v : r.rmse_per_seed) sum += v;
    r.rmse_mean = sum / static_cast<double>(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s) r.seconds += seconds[m * n_seeds + s];
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<SweepRow> run_sweep(const SparseGraph& graph, const FeatureData& data,
                                const BenchmarkConfig& config, const std::vector<double>& rates) {
  if (config.test_mask) throw UsageError("a sweep cannot use an explicit test mask");
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    BenchmarkConfig at_rate = config;
    at_rate.missing_rate = rate;
    for (const auto& report : run_benchmark(graph, data, at_rate)) {
      rows.push_back({rate, report.method, report.rmse_mean});
    }
  }
  return rows;
}

}  // namespace gdn
