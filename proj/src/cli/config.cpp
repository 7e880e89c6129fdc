#include <algorithm>
#include <cstdio>
#include <map>

#include "gdn/cli.hpp"
#include "gdn/error.hpp"

namespace gdn::cli {

using nlohmann::json;

namespace {

using V = ValueType;

const std::vector<KeySpec> kModelKeys{
    {"dim1", V::integer, "first encoder layer width"},
    {"dim2", V::integer, "second encoder layer width"},
    {"decoder_width", V::integer, "decoder width (0: encoder output width)"},
    {"decoder_input", V::text, "stack | last_layer"},
    {"lr", V::real, "Adam learning rate"},
    {"epochs", V::integer, "training epochs"},
    {"keep_prob", V::real, "DropEdge keep probability"},
    {"drop_rate", V::real, "DropEdge drop probability; overrides keep_prob"},
    {"normalization", V::text, "encoder Laplacian: symmetric | left"},
    {"inverse_order", V::integer, "Maclaurin order of the inverse filter"},
    {"wavelet_scale", V::real, "heat wavelet scale s"},
    {"wavelet_order", V::integer, "Maclaurin order of the wavelet kernels"},
    {"self_loops", V::boolean, "renormalized encoder propagation"},
};

const std::vector<KeySpec> kDataKeys{
    {"graph", V::text, "edge list file"},
    {"features", V::text, "feature CSV (nan = undefined)"},
    {"linqs_dir", V::text, "directory with <name>.content and <name>.cites"},
    {"linqs_name", V::text, "LINQS file stem"},
    {"defined_cells", V::text, "all | balanced"},
    {"synthetic_nodes", V::integer, "synthetic graph size"},
    {"synthetic_dims", V::integer, "synthetic feature width"},
    {"high_fraction", V::real, "synthetic high-frequency energy share"},
    {"data_seed", V::integer, "seed of the synthetic data / balanced cells"},
};

std::vector<KeySpec> join(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::map<std::string, std::vector<KeySpec>>& registry() {
  static const std::map<std::string, std::vector<KeySpec>> keys = {
      {"impute",
       join({{{"profile", V::text, "hyper-parameter profile"}},
             kDataKeys,
             {{"mask", V::text, "test mask CSV (1 = test entry)"},
              {"missing_rate", V::real, "share of defined entries held out"},
              {"methods", V::text_list, "mean,knn,svd,gdn,inverse_only,gcn_decoder,gala"},
              {"seeds", V::int_list, "trial seeds"},
              {"knn_k", V::integer, "KNN neighbours"},
              {"svd_rank", V::integer, "SVD rank"},
              {"svd_iters", V::integer, "SVD iterations"},
              {"per_column_mean", V::boolean, "column means for the mean baseline"}},
             kModelKeys,
             {{"out", V::text, "report JSON path"},
              {"csv", V::text, "per-seed CSV path"},
              {"threads", V::integer, "worker threads"}}})},
      {"sweep",
       join({{{"profile", V::text, "hyper-parameter profile"}},
             kDataKeys,
             {{"rates", V::real_list, "missing rates"},
              {"methods", V::text_list, "methods"},
              {"seeds", V::int_list, "trial seeds"},
              {"knn_k", V::integer, "KNN neighbours"},
              {"svd_rank", V::integer, "SVD rank"},
              {"svd_iters", V::integer, "SVD iterations"},
              {"per_column_mean", V::boolean, "column means for the mean baseline"}},
             kModelKeys,
             {{"out", V::text, "sweep CSV path"},
              {"json", V::text, "sweep JSON path"},
              {"threads", V::integer, "worker threads"}}})},
      {"generate",
       {{"profile", V::text, "hyper-parameter profile"},
        {"dataset", V::text, "TU directory, block file, or 'synthetic'"},
        {"synthetic_graphs", V::integer, "graphs in the synthetic surrogate"},
        {"data_seed", V::integer, "synthetic dataset seed"},
        {"feature_term", V::text, "on | off | both"},
        {"iters", V::integer, "training iterations"},
        {"lr", V::real, "Adam learning rate"},
        {"seeds", V::int_list, "trial seeds"},
        {"seed", V::integer, "single trial seed; overrides seeds"},
        {"hidden", V::integer, "shared GCN layer width"},
        {"latent", V::integer, "latent width"},
        {"decoder_width", V::integer, "GDN decoder width"},
        {"inverse_order", V::integer, "Maclaurin order of the inverse filter"},
        {"wavelet_scale", V::real, "heat wavelet scale s"},
        {"wavelet_order", V::integer, "Maclaurin order of the wavelet kernels"},
        {"feature_weight", V::real, "weight of the feature term when on"},
        {"kl_weight", V::real, "weight of the KL term"},
        {"train_fraction", V::real, "share of graphs used for training"},
        {"out", V::text, "report JSON path"},
        {"threads", V::integer, "worker threads"}}},
      {"noise",
       {{"graph", V::text, "edge list (default: built-in suite)"},
        {"kernels", V::text_list, "exact-inverse, truncated-inverse:K, identity"},
        {"kernel", V::text, "single kernel; overrides kernels"},
        {"activations", V::text_list, "identity, leaky_relu, tanh, sigmoid"},
        {"activation", V::text, "single activation; overrides activations"},
        {"sigma", V::real, "noise standard deviation"},
        {"trials", V::integer, "Monte Carlo trials"},
        {"seed", V::integer, "seed"},
        {"oracle_limit", V::integer, "largest graph for the eigen oracle"},
        {"out", V::text, "report JSON path"},
        {"csv", V::text, "report CSV path"},
        {"threads", V::integer, "worker threads"}}},
      {"spectra",
       join({{{"profile", V::text, "hyper-parameter profile"},
              {"kind", V::text, "kernels | decoders"},
              {"orders", V::int_list, "truncation orders for the kernel table"},
              {"scale", V::real, "heat kernel scale for the kernel table"},
              {"points", V::integer, "lambda grid points"},
              {"graph", V::text, "edge list file"},
              {"features", V::text, "feature CSV"},
              {"synthetic_nodes", V::integer, "synthetic graph size"},
              {"synthetic_dims", V::integer, "synthetic feature width"},
              {"high_fraction", V::real, "synthetic high-frequency energy share"},
              {"data_seed", V::integer, "synthetic data seed"},
              {"seeds", V::int_list, "training seeds"},
              {"oracle_limit", V::integer, "largest graph for the eigen oracle"}},
             kModelKeys,
             {{"out", V::text, "CSV path"},
              {"json", V::text, "summary JSON path"},
              {"threads", V::integer, "worker threads"}}})},
      {"gradcheck",
       {{"nodes", V::integer, "graph size"},
        {"seed", V::integer, "seed"},
        {"out", V::text, "report JSON path"},
        {"threads", V::integer, "worker threads"}}},
      {"oracle-check",
       {{"nodes", V::integer, "largest graph size"},
        {"trials", V::integer, "random graphs"},
        {"seed", V::integer, "seed"},
        {"out", V::text, "report JSON path"},
        {"threads", V::integer, "worker threads"}}},
  };
  return keys;
}

json command_defaults(const std::string& command) {
  const json model = {{"dim1", 256},          {"dim2", 128},          {"decoder_width", 0},
                      {"decoder_input", "stack"}, {"lr", 0.005},      {"epochs", 200},
                      {"keep_prob", 1.0},     {"inverse_order", 3},   {"wavelet_scale", 1.0},
                      {"wavelet_order", 3},   {"self_loops", false},
                      {"normalization", "symmetric"}};
  const json data = {{"linqs_name", "cora"}, {"defined_cells", "all"}, {"synthetic_dims", 16},
                     {"high_fraction", 0.5}, {"data_seed", 0}};
  const json baselines = {{"seeds", {0, 1, 2, 3, 4}}, {"knn_k", 5}, {"svd_rank", 16},
                          {"svd_iters", 100}, {"per_column_mean", false}, {"threads", 1}};
  if (command == "impute" || command == "sweep") {
    json d = model;
    d.update(data);
    d.update(baselines);
    d["methods"] = {"mean", "knn", "svd", "gdn"};
    if (command == "impute") {
      d["missing_rate"] = 0.1;
      d["out"] = "report.json";
    } else {
      d["rates"] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
      d["out"] = "sweep.csv";
    }
    return d;
  }
  if (command == "generate") {
    return {{"dataset", "synthetic"}, {"synthetic_graphs", 188}, {"data_seed", 0},
            {"feature_term", "on"},   {"iters", 200},            {"lr", 0.01},
            {"seeds", {0, 1, 2, 3, 4}}, {"hidden", 32},          {"latent", 16},
            {"decoder_width", 32},    {"inverse_order", 3},      {"wavelet_scale", 1.0},
            {"wavelet_order", 3},     {"feature_weight", 1.0},   {"kl_weight", 1.0},
            {"train_fraction", 0.5},  {"out", "generate.json"},  {"threads", 1}};
  }
  if (command == "noise") {
    return {{"kernels", {"exact-inverse", "truncated-inverse:3"}},
            {"activations", {"identity"}},
            {"sigma", 0.1},
            {"trials", 100000},
            {"seed", 0},
            {"oracle_limit", 2048},
            {"out", "noise.json"},
            {"threads", 1}};
  }
  if (command == "spectra") {
    json d = model;
    d.update({{"kind", "kernels"},       {"orders", {1, 2, 3, 5, 10}}, {"scale", 1.0},
              {"points", 201},           {"synthetic_nodes", 200},     {"synthetic_dims", 1},
              {"high_fraction", 0.5},    {"data_seed", 0},             {"seeds", {0, 1, 2, 3, 4}},
              {"oracle_limit", 2048},    {"out", "spectra.csv"},       {"threads", 1}});
    d["dim1"] = 64;
    d["dim2"] = 32;
    return d;
  }
  if (command == "gradcheck") return {{"nodes", 16}, {"seed", 0}, {"threads", 1}};
  if (command == "oracle-check") return {{"nodes", 64}, {"trials", 20}, {"seed", 0}, {"threads", 1}};
  throw UsageError("unknown command '" + command + "'");
}

const char* type_name(ValueType t) {
  switch (t) {
    case V::integer: return "integer";
    case V::real: return "number";
    case V::text: return "string";
    case V::boolean: return "boolean";
    case V::int_list: return "list of integers";
    case V::real_list: return "list of numbers";
    case V::text_list: return "list of strings";
  }
  return "value";
}

bool matches(ValueType t, const json& v) {
  auto all = [&](auto pred) {
    return v.is_array() && std::all_of(v.begin(), v.end(), pred);
  };
  switch (t) {
    case V::integer: return v.is_number_integer();
    case V::real: return v.is_number();
    case V::text: return v.is_string();
    case V::boolean: return v.is_boolean();
    case V::int_list: return all([](const json& e) { return e.is_number_integer(); });
    case V::real_list: return all([](const json& e) { return e.is_number(); });
    case V::text_list: return all([](const json& e) { return e.is_string(); });
  }
  return false;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    out.push_back(item);
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("expected an integer, got '" + s + "'");
  return v;
}

double to_real(const std::string& s) {
  // Parsed as JSON so the decimal point never depends on the locale.
  const json v = json::parse(s, nullptr, false);
  if (!v.is_number()) throw UsageError("expected a number, got '" + s + "'");
  return v.get<double>();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"impute",  "sweep",     "generate",    "noise",
                                                 "spectra", "gradcheck", "oracle-check"};
  return names;
}

const std::vector<KeySpec>& command_keys(const std::string& command) {
  const auto it = registry().find(command);
  if (it == registry().end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names = {"ciao",     "douban",   "cora",     "citeseer",
                                                 "amaphoto", "amacomp", "synthetic"};
  return names;
}

json profile_defaults(const std::string& profile, const std::string& command) {
  json p;
  if (profile == "ciao") {
    p = {{"dim1", 256}, {"dim2", 128}, {"lr", 0.005}, {"epochs", 200}, {"keep_prob", 1.0}};
  } else if (profile == "douban") {
    p = {{"dim1", 256}, {"dim2", 128}, {"lr", 0.005}, {"epochs", 200}, {"keep_prob", 0.5}};
  } else if (profile == "cora") {
    p = {{"dim1", 512},        {"dim2", 64},          {"lr", 0.002},
         {"epochs", 200},      {"keep_prob", 0.5},    {"linqs_name", "cora"},
         {"defined_cells", "balanced"}};
  } else if (profile == "citeseer") {
    p = {{"dim1", 256},   {"dim2", 128},      {"lr", 0.005},
         {"epochs", 200}, {"keep_prob", 0.5}, {"linqs_name", "citeseer"}};
  } else if (profile == "amaphoto" || profile == "amacomp") {
    p = {{"dim1", 256}, {"dim2", 128}, {"lr", 0.005}, {"epochs", 100}, {"keep_prob", 1.0}};
  } else if (profile == "synthetic") {
    p = {{"dim1", 64},           {"dim2", 32},          {"lr", 0.005},
         {"epochs", 200},        {"keep_prob", 1.0},    {"synthetic_nodes", 200},
         {"synthetic_dims", 16}, {"high_fraction", 0.5}, {"dataset", "synthetic"}};
  } else {
    throw UsageError("unknown profile '" + profile + "'");
  }
  json out = json::object();
  for (const auto& spec : command_keys(command)) {
    if (p.contains(spec.key)) out[spec.key] = p[spec.key];
  }
  return out;
}

json parse_value(const KeySpec& spec, const std::string& text) {
  const std::string flag = std::string("--") + spec.key;
  try {
    switch (spec.type) {
      case V::integer: return to_integer(text);
      case V::real: return to_real(text);
      case V::text: return text;
      case V::boolean:
        if (text == "true" || text == "on" || text == "1") return true;
        if (text == "false" || text == "off" || text == "0") return false;
        throw UsageError("expected true/false, got '" + text + "'");
      case V::int_list: {
        json out = json::array();
        for (const auto& item : split_list(text)) out.push_back(to_integer(item));
        return out;
      }
      case V::real_list: {
        json out = json::array();
        for (const auto& item : split_list(text)) out.push_back(to_real(item));
        return out;
      }
      case V::text_list: {
        json out = json::array();
        for (const auto& item : split_list(text)) out.push_back(item);
        return out;
      }
    }
  } catch (const UsageError& e) {
    throw UsageError(std::string(spec.key) + ": " + e.what());
  }
  return json();
}

void validate_config(const json& config, const std::string& command, const std::string& origin) {
  if (!config.is_object()) throw UsageError(origin + ": expected a JSON object");
  const auto& keys = command_keys(command);
  for (const auto& [key, value] : config.items()) {
    const auto it = std::find_if(keys.begin(), keys.end(),
                                 [&](const KeySpec& s) { return key == s.key; });
    if (it == keys.end()) {
      throw UsageError(origin + ": unknown key '" + key + "' for command " + command);
    }
    if (!matches(it->type, value)) {
      throw UsageError(origin + ": key '" + key + "' must be a " + type_name(it->type));
    }
  }
}

json resolve_config(const std::string& command, const json& file, const json& flags) {
  validate_config(file, command, "config file");
  validate_config(flags, command, "flags");
  json resolved = command_defaults(command);
  std::string profile;
  if (flags.contains("profile")) {
    profile = flags["profile"].get<std::string>();
  } else if (file.contains("profile")) {
    profile = file["profile"].get<std::string>();
  }
  if (!profile.empty()) resolved.update(profile_defaults(profile, command));
  resolved.update(file);
  resolved.update(flags);
  validate_config(resolved, command, "resolved config");
  return resolved;
}

std::string config_hash(const json& resolved) {
  json canonical = resolved;
  for (const char* key : {"threads", "out", "csv", "json"}) canonical.erase(key);
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gdn::cli
