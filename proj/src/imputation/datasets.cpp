#include "gdn/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "gdn/error.hpp"
#include "gdn/generators.hpp"
#include "gdn/laplacian.hpp"
#include "gdn/spectral.hpp"

namespace gdn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void csv_error(const std::string& what, std::size_t line) {
  throw IoError(what + " at line " + std::to_string(line));
}

// Reads rows of comma-separated cells; `cell` converts one field.
template <typename Cell, typename T>
std::vector<std::vector<T>> read_rows(std::istream& in, const char* kind, Cell cell) {
  std::vector<std::vector<T>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<T> row;
    for (std::string_view field : split_fields(line)) {
      T value{};
      if (!cell(field, value)) csv_error(std::string(kind) + ": bad cell '" + std::string(field) + "'", line_no);
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      csv_error(std::string(kind) + ": ragged row", line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(std::string(kind) + ": no rows");
  return rows;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

FeatureData parse_feature_csv(std::istream& in) {
  auto rows = read_rows<bool (*)(std::string_view, double&), double>(
      in, "feature csv", [](std::string_view f, double& v) {
        if (f == "nan" || f == "NaN" || f == "NAN") {
          v = std::numeric_limits<double>::quiet_NaN();
          return true;
        }
        if (!f.empty() && f.front() == '+') f.remove_prefix(1);
        const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
        return res.ec == std::errc() && res.ptr == f.data() + f.size() && std::isfinite(v);
      });
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size());
  FeatureData data{Matrix::Zero(n, d), Mask::Constant(n, d, true)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (std::isnan(v)) {
        data.defined(i, j) = false;
      } else {
        data.values(i, j) = v;
      }
    }
  }
  return data;
}

FeatureData load_feature_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_feature_csv(in);
}

void write_feature_csv(std::ostream& out, const FeatureData& data) {
  for (Index i = 0; i < data.values.rows(); ++i) {
    for (Index j = 0; j < data.values.cols(); ++j) {
      if (j) out << ',';
      out << (data.defined(i, j) ? format_double(data.values(i, j)) : "nan");
    }
    out << '\n';
  }
}

Mask parse_mask_csv(std::istream& in) {
  auto rows = read_rows<bool (*)(std::string_view, bool&), bool>(
      in, "mask csv", [](std::string_view f, bool& v) {
        if (f == "0" || f == "1") {
          v = f == "1";
          return true;
        }
        return false;
      });
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size());
  Mask mask(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) mask(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return mask;
}

Mask load_mask_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_mask_csv(in);
}

void write_mask_csv(std::ostream& out, const Mask& mask) {
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) out << (j ? "," : "") << (mask(i, j) ? '1' : '0');
    out << '\n';
  }
}

FeatureGraph load_linqs(const std::filesystem::path& dir, const std::string& name,
                        DefinedCells defined, std::uint64_t seed) {
  auto content = open_or_throw(dir / (name + ".content"));
  std::unordered_map<std::string, Index> index_of;
  std::vector<std::vector<double>> rows;
  FeatureGraph out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(content, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    std::vector<std::string> rest;
    for (std::string tok; fields >> tok;) rest.push_back(tok);
    if (rest.size() < 2) csv_error(name + ".content: too few fields", line_no);
    std::vector<double> row;
    for (std::size_t k = 0; k + 1 < rest.size(); ++k) {
      if (rest[k] != "0" && rest[k] != "1") csv_error(name + ".content: non-binary word", line_no);
      row.push_back(rest[k] == "1" ? 1.0 : 0.0);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      csv_error(name + ".content: ragged row", line_no);
    }
    if (!index_of.emplace(id, static_cast<Index>(rows.size())).second) {
      csv_error(name + ".content: duplicate id " + id, line_no);
    }
    out.labels.push_back(rest.back());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(name + ".content: no nodes");

  auto cites = open_or_throw(dir / (name + ".cites"));
  std::vector<Edge> edges;
  line_no = 0;
  while (std::getline(cites, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) csv_error(name + ".cites: expected two ids", line_no);
    const auto ia = index_of.find(a);
    const auto ib = index_of.find(b);
    if (ia == index_of.end() || ib == index_of.end() || ia->second == ib->second) continue;
    edges.push_back({ia->second, ib->second});
  }
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size());
  out.graph = SparseGraph::from_edges(n, edges);

  Matrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  out.features = fully_defined(std::move(x));
  if (defined == DefinedCells::balanced) {
    Mask& def = out.features.defined;
    def = out.features.values.array() > 0.5;
    std::vector<Index> zeros;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) {
        if (!def(i, j)) zeros.push_back(i * d + j);
      }
    }
    const std::size_t take = std::min<std::size_t>(zeros.size(), static_cast<std::size_t>(def.count()));
    Rng rng = make_rng(seed, 20);
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(zeros.size() - k));
      std::swap(zeros[k], zeros[pick]);
      def(zeros[k] / d, zeros[k] % d) = true;
    }
  }
  return out;
}

Matrix planted_signal(const SparseGraph& graph, Index d, double high_fraction, Rng& rng) {
  if (!(high_fraction >= 0.0 && high_fraction <= 1.0)) {
    throw UsageError("high_fraction must lie in [0, 1]");
  }
  const LaplacianOperator op(graph);
  const EigenSystem es = eigen_decompose(op);
  const Index n = graph.num_nodes();
  const Matrix coeffs = standard_normal_matrix(n, d, rng);
  Matrix weighted = Matrix::Zero(n, d);
  for (Index c = 0; c < d; ++c) {
    double low_energy = 0.0;
    double high_energy = 0.0;
    for (Index i = 0; i < n; ++i) {
      (es.eigenvalues(i) > 1.0 ? high_energy : low_energy) += coeffs(i, c) * coeffs(i, c);
    }
    const double scale = static_cast<double>(n);
    const double low = low_energy > 0 ? std::sqrt(scale * (1.0 - high_fraction) / low_energy) : 0.0;
    const double high = high_energy > 0 ? std::sqrt(scale * high_fraction / high_energy) : 0.0;
    for (Index i = 0; i < n; ++i) {
      weighted(i, c) = coeffs(i, c) * (es.eigenvalues(i) > 1.0 ? high : low);
    }
  }
  return es.eigenvectors * weighted;
}

FeatureGraph synthetic_dataset(Index n, Index d, double high_fraction, std::uint64_t seed) {
  if (n < 4) throw UsageError("synthetic dataset needs at least 4 nodes");
  Rng rng = make_rng(seed, 21);
  const Index half = n / 2;
  const double p_in = std::min(1.0, 8.0 / static_cast<double>(half));
  const double p_out = std::min(1.0, 1.0 / static_cast<double>(n));
  FeatureGraph out;
  out.graph = stochastic_block_model({half, n - half}, p_in, p_out, rng);
  out.features = fully_defined(planted_signal(out.graph, d, high_fraction, rng));
  return out;
}

}  // namespace gdn
