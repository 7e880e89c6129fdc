#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "gdn/cli.hpp"
#include "gdn/datasets.hpp"
#include "gdn/error.hpp"
#include "gdn/experiments.hpp"
#include "gdn/format.hpp"
#include "gdn/generation.hpp"
#include "gdn/generators.hpp"
#include "gdn/imputation.hpp"
#include "gdn/noise.hpp"
#include "gdn/parallel.hpp"
#include "gdn/train.hpp"

namespace gdn::cli {

using nlohmann::json;

namespace {

void log(const std::string& line) { std::cerr << "[gdn] " << line << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

void write_json(const std::string& path, const json& report) {
  write_text(path, report.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("config " + path + " is not valid JSON: " + e.what());
  }
}

json public_config(const json& resolved) {
  json c = resolved;
  c.erase("threads");
  return c;
}

std::vector<std::uint64_t> seeds_of(const json& config, const char* key = "seeds") {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : config.at(key)) {
    if (s.get<long long>() < 0) throw UsageError(std::string(key) + ": seeds must be non-negative");
    seeds.push_back(s.get<std::uint64_t>());
  }
  if (seeds.empty()) throw UsageError(std::string(key) + ": no seeds");
  return seeds;
}

Index positive(const json& config, const char* key) {
  const long long v = config.at(key).get<long long>();
  if (v < 1) throw UsageError(std::string(key) + " must be >= 1");
  return static_cast<Index>(v);
}

int thread_count(const json& config) {
  return static_cast<int>(positive(config, "threads"));
}

TrainConfig train_config(const json& c) {
  TrainConfig t;
  t.model.dims.hidden1 = positive(c, "dim1");
  t.model.dims.hidden2 = positive(c, "dim2");
  t.model.dims.decoder_width = c.at("decoder_width").get<Index>();
  if (t.model.dims.decoder_width < 0) throw UsageError("decoder_width must be >= 0");
  const std::string input = c.at("decoder_input").get<std::string>();
  if (input == "stack") {
    t.model.dims.decoder_input = DecoderInput::stack;
  } else if (input == "last_layer") {
    t.model.dims.decoder_input = DecoderInput::last_layer;
  } else {
    throw UsageError("decoder_input must be stack or last_layer");
  }
  t.lr = c.at("lr").get<double>();
  if (!(t.lr > 0)) throw UsageError("lr must be positive");
  t.epochs = static_cast<int>(c.at("epochs").get<long long>());
  if (t.epochs < 0) throw UsageError("epochs must be >= 0");
  t.keep_prob = c.at("keep_prob").get<double>();
  if (c.contains("drop_rate")) {
    const double drop = c["drop_rate"].get<double>();
    if (!(drop >= 0 && drop < 1)) throw UsageError("drop_rate must lie in [0, 1)");
    t.keep_prob = 1.0 - drop;
  }
  if (!(t.keep_prob > 0 && t.keep_prob <= 1)) throw UsageError("keep_prob must lie in (0, 1]");
  const std::string norm = c.at("normalization").get<std::string>();
  if (norm == "symmetric") {
    t.model.encoder_normalization = Normalization::symmetric;
  } else if (norm == "left") {
    t.model.encoder_normalization = Normalization::left;
  } else {
    throw UsageError("normalization must be symmetric or left");
  }
  t.model.decoder.inverse_order = static_cast<std::size_t>(positive(c, "inverse_order"));
  t.model.decoder.wavelet_scale = c.at("wavelet_scale").get<double>();
  if (!(t.model.decoder.wavelet_scale > 0)) throw UsageError("wavelet_scale must be positive");
  t.model.decoder.wavelet_order = static_cast<std::size_t>(positive(c, "wavelet_order"));
  t.model.self_loops = c.at("self_loops").get<bool>();
  return t;
}

struct LoadedData {
  std::string name;
  SparseGraph graph;
  FeatureData features;
};

SparseGraph pad_graph(const SparseGraph& g, Index rows) {
  if (g.num_nodes() > rows) {
    throw UsageError("graph has " + std::to_string(g.num_nodes()) + " nodes but features have " +
                     std::to_string(rows) + " rows");
  }
  if (g.num_nodes() == rows) return g;
  return SparseGraph::from_edges(rows, g.edges());
}

LoadedData load_feature_data(const json& c) {
  LoadedData d;
  if (c.contains("graph") || c.contains("features")) {
    if (!c.contains("graph") || !c.contains("features")) {
      throw UsageError("--graph and --features must be given together");
    }
    d.name = c["features"].get<std::string>();
    d.features = load_feature_csv(c["features"].get<std::string>());
    d.graph = pad_graph(load_edge_list(c["graph"].get<std::string>()), d.features.values.rows());
    return d;
  }
  if (c.contains("linqs_dir")) {
    const std::string cells = c.at("defined_cells").get<std::string>();
    if (cells != "all" && cells != "balanced") throw UsageError("defined_cells must be all or balanced");
    d.name = c["linqs_name"].get<std::string>();
    FeatureGraph fg = load_linqs(c["linqs_dir"].get<std::string>(), d.name,
                                 cells == "balanced" ? DefinedCells::balanced : DefinedCells::all,
                                 c.at("data_seed").get<std::uint64_t>());
    d.graph = std::move(fg.graph);
    d.features = std::move(fg.features);
    return d;
  }
  if (c.contains("synthetic_nodes")) {
    d.name = "synthetic";
    FeatureGraph fg = synthetic_dataset(positive(c, "synthetic_nodes"), positive(c, "synthetic_dims"),
                                        c.at("high_fraction").get<double>(),
                                        c.at("data_seed").get<std::uint64_t>());
    d.graph = std::move(fg.graph);
    d.features = std::move(fg.features);
    return d;
  }
  throw UsageError("no dataset: give --graph/--features, --linqs-dir, or --profile synthetic");
}

json dataset_summary(const LoadedData& d) {
  return {{"name", d.name},
          {"nodes", d.graph.num_nodes()},
          {"edges", d.graph.num_edges()},
          {"features", d.features.values.cols()},
          {"defined_entries", d.features.defined.count()}};
}

BenchmarkConfig benchmark_config(const json& c, const std::string& hash) {
  BenchmarkConfig b;
  b.methods = c.at("methods").get<std::vector<std::string>>();
  b.seeds = seeds_of(c);
  if (c.contains("missing_rate")) b.missing_rate = c["missing_rate"].get<double>();
  b.per_column_mean = c.at("per_column_mean").get<bool>();
  b.knn_k = static_cast<int>(positive(c, "knn_k"));
  b.svd_rank = positive(c, "svd_rank");
  b.svd_iters = static_cast<int>(c.at("svd_iters").get<long long>());
  if (b.svd_iters < 0) throw UsageError("svd_iters must be >= 0");
  b.train = train_config(c);
  b.threads = thread_count(c);
  b.config_hash = hash;
  return b;
}

int cmd_impute(const json& c) {
  const std::string hash = config_hash(c);
  const LoadedData data = load_feature_data(c);
  BenchmarkConfig b = benchmark_config(c, hash);
  if (c.contains("mask")) b.test_mask = load_mask_csv(c["mask"].get<std::string>());
  log("impute on " + data.name + ": " + std::to_string(data.graph.num_nodes()) + " nodes, " +
      std::to_string(data.features.values.cols()) + " features");
  const auto reports = run_benchmark(data.graph, data.features, b);
  json out = {{"command", "impute"},   {"version", kVersion},
              {"config_hash", hash},   {"config", public_config(c)},
              {"dataset", dataset_summary(data)}, {"reports", json::array()}};
  std::ostringstream csv;
  csv << "method,seed,rmse\n";
  for (const auto& r : reports) {
    out["reports"].push_back({{"method", r.method},
                              {"rmse_mean", r.rmse_mean},
                              {"rmse_per_seed", r.rmse_per_seed},
                              {"seeds", r.seeds},
                              {"config_hash", r.config_hash},
                              {"seconds", r.seconds}});
    for (std::size_t s = 0; s < r.seeds.size(); ++s) {
      csv << r.method << ',' << r.seeds[s] << ',' << format_double(r.rmse_per_seed[s]) << '\n';
    }
    log(r.method + " rmse " + format_double(r.rmse_mean));
  }
  write_json(c.at("out").get<std::string>(), out);
  if (c.contains("csv")) write_text(c["csv"].get<std::string>(), csv.str());
  return 0;
}

int cmd_sweep(const json& c) {
  const std::string hash = config_hash(c);
  const LoadedData data = load_feature_data(c);
  const BenchmarkConfig b = benchmark_config(c, hash);
  const auto rates = c.at("rates").get<std::vector<double>>();
  const auto rows = run_sweep(data.graph, data.features, b, rates);
  std::ostringstream csv;
  csv << "missing_rate,method,rmse\n";
  json out = {{"command", "sweep"}, {"version", kVersion}, {"config_hash", hash},
              {"config", public_config(c)}, {"dataset", dataset_summary(data)},
              {"rows", json::array()}};
  for (const auto& r : rows) {
    csv << format_double(r.missing_rate) << ',' << r.method << ',' << format_double(r.rmse) << '\n';
    out["rows"].push_back({{"missing_rate", r.missing_rate}, {"method", r.method}, {"rmse", r.rmse}});
  }
  write_text(c.at("out").get<std::string>(), csv.str());
  if (c.contains("json")) write_json(c["json"].get<std::string>(), out);
  return 0;
}

int cmd_generate(const json& c) {
  const std::string hash = config_hash(c);
  const std::string source = c.at("dataset").get<std::string>();
  const GraphDataset data =
      source == "synthetic"
          ? synthetic_molecules(static_cast<std::size_t>(positive(c, "synthetic_graphs")),
                                c.at("data_seed").get<std::uint64_t>())
          : load_graph_dataset(source);
  const std::string term = c.at("feature_term").get<std::string>();
  std::vector<std::pair<std::string, double>> settings;
  const double weight = c.at("feature_weight").get<double>();
  if (term == "on" || term == "both") settings.emplace_back("on", weight);
  if (term == "off" || term == "both") settings.emplace_back("off", 0.0);
  if (settings.empty()) throw UsageError("feature_term must be on, off or both");

  GeneratorConfig base;
  base.iterations = static_cast<int>(c.at("iters").get<long long>());
  base.lr = c.at("lr").get<double>();
  base.train_fraction = c.at("train_fraction").get<double>();
  base.model.dims.hidden = positive(c, "hidden");
  base.model.dims.latent = positive(c, "latent");
  base.model.dims.decoder_width = positive(c, "decoder_width");
  base.model.decoder.inverse_order = static_cast<std::size_t>(positive(c, "inverse_order"));
  base.model.decoder.wavelet_scale = c.at("wavelet_scale").get<double>();
  base.model.decoder.wavelet_order = static_cast<std::size_t>(positive(c, "wavelet_order"));
  base.model.weights.kl = c.at("kl_weight").get<double>();
  json seed_source = c;
  if (c.contains("seed")) seed_source["seeds"] = json::array({c["seed"]});
  const auto seeds = seeds_of(seed_source);

  double nodes = 0;
  for (const auto& g : data.graphs) nodes += static_cast<double>(g.graph.num_nodes());
  json out = {{"command", "generate"},
              {"version", kVersion},
              {"config_hash", hash},
              {"config", public_config(c)},
              {"dataset",
               {{"name", data.name},
                {"graphs", data.graphs.size()},
                {"node_labels", data.num_node_labels},
                {"avg_nodes", nodes / static_cast<double>(data.graphs.size())}}},
              {"log_likelihood_normalization", "mean per node pair"},
              {"runs", json::array()}};
  for (const auto& [name, w] : settings) {
    std::vector<GeneratorRun> runs(seeds.size());
    const auto start = std::chrono::steady_clock::now();
    parallel_for(seeds.size(), thread_count(c), [&](std::size_t s) {
      GeneratorConfig cfg = base;
      cfg.seed = seeds[s];
      cfg.model.weights.feature = w;
      runs[s] = train_generator(data, cfg);
    });
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<double> ll, auc, ap;
    for (const auto& r : runs) {
      ll.push_back(r.log_likelihood);
      auc.push_back(r.auc);
      ap.push_back(r.ap);
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    out["runs"].push_back({{"feature_term", name},
                           {"log_lik", mean(ll)},
                           {"auc", mean(auc)},
                           {"ap", mean(ap)},
                           {"seeds", seeds},
                           {"per_seed", {{"log_lik", ll}, {"auc", auc}, {"ap", ap}}},
                           {"seconds", seconds}});
    log("feature term " + name + ": auc " + format_double(mean(auc)) + " ap " +
        format_double(mean(ap)));
  }
  write_json(c.at("out").get<std::string>(), out);
  return 0;
}

std::vector<NamedGraph> builtin_noise_suite() {
  SparseGraph pairs = complete_graph(2);
  for (int k = 0; k < 3; ++k) pairs = disjoint_union(pairs, complete_graph(2));
  Rng rng = make_rng(0, 80);
  return {{"k2", complete_graph(2)},
          {"k2x4", pairs},
          {"p3", path_graph(3)},
          {"p6", path_graph(6)},
          {"er16", erdos_renyi(16, 0.3, rng)}};
}

int cmd_noise(const json& c) {
  const std::string hash = config_hash(c);
  std::vector<NamedGraph> suite;
  if (c.contains("graph")) {
    const std::string path = c["graph"].get<std::string>();
    suite.push_back({std::filesystem::path(path).stem().string(), load_edge_list(path)});
  } else {
    suite = builtin_noise_suite();
  }
  const Index limit = positive(c, "oracle_limit");
  for (const auto& g : suite) {
    if (g.graph.num_nodes() > limit) {
      throw UsageError("graph " + g.name + " exceeds the oracle limit of " + std::to_string(limit));
    }
  }
  std::vector<RecoveryKernel> kernels;
  const json kernel_names = c.contains("kernel") ? json::array({c["kernel"]}) : c.at("kernels");
  for (const auto& k : kernel_names) kernels.push_back(parse_recovery_kernel(k.get<std::string>()));
  std::vector<InvertibleActivation> acts;
  const json act_names =
      c.contains("activation") ? json::array({c["activation"]}) : c.at("activations");
  for (const auto& a : act_names) acts.push_back(parse_noise_activation(a.get<std::string>()));
  MonteCarloConfig mc;
  mc.sigma = c.at("sigma").get<double>();
  mc.trials = c.at("trials").get<std::int64_t>();
  mc.seed = c.at("seed").get<std::uint64_t>();
  mc.threads = thread_count(c);

  json out = {{"command", "noise"}, {"version", kVersion}, {"config_hash", hash},
              {"config", public_config(c)}, {"ratio", "Var(x')/Var(eps) per unit"},
              {"rows", json::array()}, {"skipped", json::array()}};
  std::vector<AmplificationReport> rows;
  for (std::size_t g = 0; g < suite.size(); ++g) {
    for (const auto& k : kernels) {
      try {
        MonteCarloConfig per = mc;
        per.seed = mc.seed + g;
        for (auto& r : amplification_report({suite[g]}, {k}, acts, per)) rows.push_back(std::move(r));
      } catch (const NumericalError& e) {
        out["skipped"].push_back({{"graph", suite[g].name}, {"kernel", k.name}, {"reason", e.what()}});
        log("skipped " + suite[g].name + " / " + k.name + ": " + e.what());
      }
    }
  }
  for (const auto& r : rows) {
    out["rows"].push_back({{"graph", r.graph},
                           {"kernel", r.kernel},
                           {"activation", r.activation},
                           {"sigma", r.sigma},
                           {"trials", r.trials},
                           {"rejected", r.rejected},
                           {"analytic", r.analytic},
                           {"taylor", r.taylor},
                           {"monte_carlo", r.monte_carlo}});
  }
  write_json(c.at("out").get<std::string>(), out);
  if (c.contains("csv")) {
    std::ostringstream csv;
    write_amplification_csv(csv, rows);
    write_text(c["csv"].get<std::string>(), csv.str());
  }
  return 0;
}

int cmd_spectra(const json& c) {
  const std::string hash = config_hash(c);
  const std::string kind = c.at("kind").get<std::string>();
  std::ostringstream csv;
  if (kind == "kernels") {
    std::vector<std::size_t> orders;
    for (const auto& o : c.at("orders")) {
      if (o.get<long long>() < 0) throw UsageError("orders must be >= 0");
      orders.push_back(o.get<std::size_t>());
    }
    const KernelTable table = kernel_approximation_table(
        orders, c.at("scale").get<double>(), static_cast<int>(positive(c, "points")));
    for (std::size_t k = 0; k < table.columns.size(); ++k) csv << (k ? "," : "") << table.columns[k];
    csv << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) csv << (k ? "," : "") << format_double(row[k]);
      csv << '\n';
    }
    write_text(c.at("out").get<std::string>(), csv.str());
    return 0;
  }
  if (kind != "decoders") throw UsageError("kind must be kernels or decoders");

  const TrainConfig train = train_config(c);
  const auto seeds = seeds_of(c);
  const bool from_files = c.contains("graph") || c.contains("features");
  const std::vector<DecoderKind> kinds{DecoderKind::gdn, DecoderKind::gcn, DecoderKind::inverse_only};
  std::vector<DecoderSpectra> results(seeds.size());
  parallel_for(seeds.size(), thread_count(c), [&](std::size_t s) {
    SparseGraph graph;
    Matrix x;
    if (from_files) {
      json files = c;
      const LoadedData d = load_feature_data(files);
      if (d.features.defined.count() != d.features.defined.size()) {
        throw UsageError("decoder spectra need a fully defined feature matrix");
      }
      graph = d.graph;
      x = d.features.values;
    } else {
      const FeatureGraph fg =
          synthetic_dataset(positive(c, "synthetic_nodes"), positive(c, "synthetic_dims"),
                            c.at("high_fraction").get<double>(),
                            c.at("data_seed").get<std::uint64_t>() + seeds[s]);
      graph = fg.graph;
      x = fg.features.values;
    }
    if (graph.num_nodes() > positive(c, "oracle_limit")) throw UsageError("graph exceeds the oracle limit");
    TrainConfig t = train;
    t.seed = seeds[s];
    results[s] = decoder_spectra(graph, x, t, kinds);
  });

  csv << "seed,lambda,original";
  for (DecoderKind k : kinds) csv << ',' << to_string(k);
  csv << '\n';
  json summary = {{"command", "spectra"}, {"version", kVersion}, {"config_hash", hash},
                  {"config", public_config(c)}, {"threshold", 1.0}, {"seeds", seeds}};
  std::vector<double> original_fraction;
  std::map<std::string, std::vector<double>> fractions;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const DecoderSpectra& r = results[s];
    for (Index i = 0; i < r.eigenvalues.size(); ++i) {
      csv << seeds[s] << ',' << format_double(r.eigenvalues[i]) << ','
          << format_double(r.original_energy[i]);
      for (const auto& d : r.decoders) csv << ',' << format_double(d.energy[i]);
      csv << '\n';
    }
    original_fraction.push_back(r.original_high_fraction);
    for (const auto& d : r.decoders) fractions[d.decoder].push_back(d.high_frequency_fraction);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  summary["original_high_fraction"] = {{"mean", mean(original_fraction)}, {"per_seed", original_fraction}};
  for (const auto& [name, v] : fractions) {
    summary["decoders"][name] = {{"high_fraction_mean", mean(v)}, {"per_seed", v}};
    log(name + " high-frequency fraction " + format_double(mean(v)));
  }
  write_text(c.at("out").get<std::string>(), csv.str());
  if (c.contains("json")) write_json(c["json"].get<std::string>(), summary);
  return 0;
}

int cmd_gradcheck(const json& c) {
  constexpr double kTolerance = 1e-4;
  const auto rows = gradient_check(positive(c, "nodes"), c.at("seed").get<std::uint64_t>());
  double worst = 0.0;
  json out = {{"command", "gradcheck"}, {"config_hash", config_hash(c)}, {"rows", json::array()}};
  for (const auto& r : rows) {
    std::cout << r.model << ' ' << r.tensor << ' ' << format_double(r.max_relative_error) << '\n';
    worst = std::max(worst, r.max_relative_error);
    out["rows"].push_back({{"model", r.model}, {"tensor", r.tensor}, {"max_relative_error", r.max_relative_error}});
  }
  out["max_relative_error"] = worst;
  out["tolerance"] = kTolerance;
  std::cout << "max relative error " << format_double(worst) << '\n';
  if (c.contains("out")) write_json(c["out"].get<std::string>(), out);
  if (!(worst <= kTolerance)) {
    throw NumericalError("gradient check failed: max relative error " + format_double(worst) +
                         " exceeds " + format_double(kTolerance));
  }
  return 0;
}

int cmd_oracle_check(const json& c) {
  constexpr double kTolerance = 1e-10;
  const OracleCheckResult r = oracle_check(positive(c, "nodes"), static_cast<int>(positive(c, "trials")),
                                           c.at("seed").get<std::uint64_t>());
  std::cout << "graphs " << r.graphs << " filters " << r.filters << " max relative error "
            << format_double(r.max_relative_error) << '\n';
  if (c.contains("out")) {
    write_json(c["out"].get<std::string>(),
               {{"command", "oracle-check"}, {"config_hash", config_hash(c)}, {"graphs", r.graphs},
                {"filters", r.filters}, {"max_relative_error", r.max_relative_error},
                {"tolerance", kTolerance}});
  }
  if (!(r.max_relative_error <= kTolerance)) {
    throw NumericalError("oracle check failed: max relative error " +
                         format_double(r.max_relative_error) + " exceeds " + format_double(kTolerance));
  }
  return 0;
}

int dispatch(const std::string& command, const json& config) {
  if (command == "impute") return cmd_impute(config);
  if (command == "sweep") return cmd_sweep(config);
  if (command == "generate") return cmd_generate(config);
  if (command == "noise") return cmd_noise(config);
  if (command == "spectra") return cmd_spectra(config);
  if (command == "gradcheck") return cmd_gradcheck(config);
  if (command == "oracle-check") return cmd_oracle_check(config);
  throw UsageError("unknown command '" + command + "'");
}

void report_error(const char* kind, int code, const std::string& message) {
  std::cerr << json{{"error", kind}, {"exit_code", code}, {"message", message}}.dump() << '\n';
}

std::string flag_name(const char* key) {
  std::string name = key;
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Graph deconvolution toolkit: imputation, generation, noise and spectral checks", "gdn"};
  app.set_version_flag("--version", std::string("gdn ") + kVersion + " (checkpoint format " +
                                        std::to_string(kCheckpointFormatVersion) + ")");
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& command : command_names()) {
    CLI::App* sub = app.add_subcommand(command);
    sub->add_option("--config", config_paths[command], "JSON config file");
    for (const auto& spec : command_keys(command)) {
      options[command][spec.key] = sub->add_option(flag_name(spec.key), values[command][spec.key], spec.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", 2, e.what());
    return 2;
  }

  try {
    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    json flags = json::object();
    for (const auto& spec : command_keys(command)) {
      if (options[command][spec.key]->count() > 0) {
        flags[spec.key] = parse_value(spec, values[command][spec.key]);
      }
    }
    json file = json::object();
    if (!config_paths[command].empty()) file = read_json_file(config_paths[command]);
    return dispatch(command, resolve_config(command, file, flags));
  } catch (const UsageError& e) {
    report_error("usage", 2, e.what());
    return 2;
  } catch (const IoError& e) {
    report_error("io", 3, e.what());
    return 3;
  } catch (const NumericalError& e) {
    report_error("numerical", 4, e.what());
    return 4;
  } catch (const json::exception& e) {
    report_error("usage", 2, e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", 1, e.what());
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage{"gdn"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace gdn::cli
