#include "gdn/adam.hpp"

#include <cmath>

#include "gdn/error.hpp"

namespace gdn {

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, double lr) {
  if (params.size() != grads.size()) throw UsageError("adam_step: parameter/gradient count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->rows() != grads[i]->rows() || params[i]->cols() != grads[i]->cols()) {
      throw UsageError("adam_step: gradient shape mismatch for tensor " + std::to_string(i));
    }
    if (!grads[i]->allFinite()) {
      throw NumericalError("adam_step: non-finite gradient in tensor " + std::to_string(i));
    }
  }
  if (state.m.empty()) {
    for (const Matrix* p : params) {
      state.m.push_back(Matrix::Zero(p->rows(), p->cols()));
      state.v.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (state.m.size() != params.size()) throw UsageError("adam_step: state does not match params");

  ++state.t;
  const double correction1 = 1.0 - std::pow(AdamState::beta1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(AdamState::beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& m = state.m[i];
    Matrix& v = state.v[i];
    const Matrix& g = *grads[i];
    m = AdamState::beta1 * m + (1.0 - AdamState::beta1) * g;
    v = AdamState::beta2 * v + (1.0 - AdamState::beta2) * g.cwiseAbs2();
    params[i]->array() -= lr * (m.array() / correction1) /
                          ((v.array() / correction2).sqrt() + AdamState::epsilon);
  }
}

}  // namespace gdn
