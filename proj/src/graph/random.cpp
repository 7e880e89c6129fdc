#include <cmath>
#include <numbers>

#include "gdn/types.hpp"

namespace gdn {

double standard_normal(Rng& rng) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix standard_normal_matrix(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  // Row-major fill order so results do not depend on Eigen's storage order.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = standard_normal(rng);
  }
  return out;
}

}  // namespace gdn
