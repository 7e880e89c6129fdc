#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdn/format.hpp"
#include "gdn/graph.hpp"
#include "gdn/imputation.hpp"

namespace gdn {

/// Feature CSV: n rows of d comma-separated reals, `nan` for undefined cells.
/// No header.
FeatureData parse_feature_csv(std::istream& in);
FeatureData load_feature_csv(const std::filesystem::path& path);
void write_feature_csv(std::ostream& out, const FeatureData& data);

/// Mask CSV: 0/1 per cell, 1 marks a test entry.
Mask parse_mask_csv(std::istream& in);
Mask load_mask_csv(const std::filesystem::path& path);
void write_mask_csv(std::ostream& out, const Mask& mask);

struct FeatureGraph {
  SparseGraph graph;
  FeatureData features;
  std::vector<std::string> labels;
};

enum class DefinedCells { all, balanced };

/// Citation dataset in the LINQS layout: `<name>.content` (id, binary words,
/// label) and `<name>.cites` (cited, citing). Citations to unknown ids are
/// skipped. With `balanced`, the defined cells are every 1 plus an equal
/// number of 0s drawn uniformly with `seed`.
FeatureGraph load_linqs(const std::filesystem::path& dir, const std::string& name,
                        DefinedCells defined = DefinedCells::all, std::uint64_t seed = 0);

/// d graph signals whose spectral energy is split between the band below
/// lambda = 1 (weight 1 - high_fraction) and the band above it.
Matrix planted_signal(const SparseGraph& graph, Index d, double high_fraction, Rng& rng);

/// Two-block SBM with a planted mixed-frequency signal.
FeatureGraph synthetic_dataset(Index n, Index d, double high_fraction, std::uint64_t seed);

}  // namespace gdn
