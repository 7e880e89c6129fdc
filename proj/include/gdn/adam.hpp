#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gdn/types.hpp"

namespace gdn {

struct AdamState {
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double epsilon = 1e-8;

  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;
};

/// One bias-corrected Adam update. Throws NumericalError, leaving params and
/// state untouched, if any gradient entry is not finite.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, double lr);

/// Convenience overload for parameter structs exposing tensors().
template <typename Params>
void adam_step(Params& params, const Params& grads, AdamState& state, double lr) {
  auto p = params.tensors();
  auto g = grads.tensors();
  adam_step(std::span<Matrix* const>(p), std::span<const Matrix* const>(g), state, lr);
}

}  // namespace gdn
