#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdn/graph.hpp"
#include "gdn/spectral.hpp"

namespace gdn {

/// Spectral recovery kernel applied to the de-activated noisy signal.
struct RecoveryKernel {
  std::string name;  // "exact-inverse", "truncated-inverse:K", "identity"
  SpectralKernel response;
};

RecoveryKernel exact_inverse_recovery();
RecoveryKernel truncated_inverse_recovery(std::size_t order);
RecoveryKernel identity_recovery();
RecoveryKernel parse_recovery_kernel(const std::string& spec);

enum class NoiseActivation { identity, leaky_relu, tanh, sigmoid };

/// Invertible activation of the generative model. Leaky ReLU follows
/// sigma(x) = x for x > 0 and x / alpha otherwise, alpha > 1.
struct InvertibleActivation {
  NoiseActivation kind = NoiseActivation::identity;
  double alpha = 5.0;

  double forward(double x) const;
  /// Inverse; NaN outside the range of forward().
  double inverse(double y) const;
  /// Derivative of the inverse at y.
  double inverse_derivative(double y) const;
  std::string name() const;
};

InvertibleActivation parse_noise_activation(const std::string& name);

/// sum_i kernel(lambda_i)^2 / N. Throws NumericalError naming the first
/// eigenvalue where the kernel is not finite.
double amplification_analytic(const EigenSystem& es, const RecoveryKernel& kernel);

/// First-order prediction of the per-unit ratio around the clean signal
/// h = act(K_c x): mean_i sum_j K_ij^2 (act^-1)'(h_j)^2.
double amplification_taylor(const EigenSystem& es, const RecoveryKernel& kernel,
                            const InvertibleActivation& act, const Vector& x);

struct MonteCarloConfig {
  double sigma = 0.1;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  double max_rejection = 0.5;
};

struct MonteCarloResult {
  double ratio = 0.0;  // mean over coordinates of Var(x'_i) / sigma^2
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
};

/// Simulates h_hat = act(K_c x) + eps, x' = K act^-1(h_hat) with fresh white
/// noise per trial. Trials whose noisy signal leaves the inverse's domain
/// are rejected and counted; more than `max_rejection` of them aborts with
/// NumericalError. Trial t draws its noise from its own counter-derived
/// stream, so the result does not depend on the thread count.
MonteCarloResult amplification_monte_carlo(const EigenSystem& es, const RecoveryKernel& kernel,
                                           const InvertibleActivation& act, const Vector& x,
                                           const MonteCarloConfig& config);

struct AmplificationReport {
  std::string graph;
  std::string kernel;
  std::string activation;
  double sigma = 0.0;
  std::int64_t trials = 0;
  std::int64_t rejected = 0;
  double analytic = 0.0;
  double taylor = 0.0;
  double monte_carlo = 0.0;
};

struct NamedGraph {
  std::string name;
  SparseGraph graph;
};

/// Every graph x kernel x activation combination. The base signal for graph
/// g is a standard normal vector drawn from the report seed.
std::vector<AmplificationReport> amplification_report(const std::vector<NamedGraph>& graphs,
                                                     const std::vector<RecoveryKernel>& kernels,
                                                     const std::vector<InvertibleActivation>& activations,
                                                     const MonteCarloConfig& config);

/// Header `graph,kernel,activation,analytic,monte_carlo,trials`.
void write_amplification_csv(std::ostream& out, const std::vector<AmplificationReport>& rows);

}  // namespace gdn
