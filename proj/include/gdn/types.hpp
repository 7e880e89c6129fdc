#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace gdn {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Engine for stream `stream` of base seed `seed`. Streams are pairwise
/// independent and do not depend on the order in which they are created.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) built from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal draw (Box-Muller, one output per call). Platform
/// independent, unlike std::normal_distribution.
double standard_normal(Rng& rng);

Matrix standard_normal_matrix(Index rows, Index cols, Rng& rng);

}  // namespace gdn
