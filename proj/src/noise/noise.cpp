#include "gdn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "gdn/format.hpp"
#include "gdn/error.hpp"

namespace gdn {

RecoveryKernel exact_inverse_recovery() {
  return {"exact-inverse", [](double lambda) { return exact_inverse_kernel(lambda); }};
}

RecoveryKernel truncated_inverse_recovery(std::size_t order) {
  const PolynomialFilter f = maclaurin_inverse(order);
  return {"truncated-inverse:" + std::to_string(order), [f](double lambda) { return f(lambda); }};
}

RecoveryKernel identity_recovery() {
  return {"identity", [](double) { return 1.0; }};
}

RecoveryKernel parse_recovery_kernel(const std::string& spec) {
  if (spec == "exact-inverse") return exact_inverse_recovery();
  if (spec == "identity") return identity_recovery();
  const std::string prefix = "truncated-inverse:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string digits = spec.substr(prefix.size());
    if (!digits.empty() && digits.size() <= 4 &&
        std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return truncated_inverse_recovery(static_cast<std::size_t>(std::stoul(digits)));
    }
  }
  throw UsageError("unknown kernel '" + spec + "' (exact-inverse, truncated-inverse:K, identity)");
}

double InvertibleActivation::forward(double x) const {
  switch (kind) {
    case NoiseActivation::identity: return x;
    case NoiseActivation::leaky_relu: return x > 0 ? x : x / alpha;
    case NoiseActivation::tanh: return std::tanh(x);
    case NoiseActivation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

double InvertibleActivation::inverse(double y) const {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (kind) {
    case NoiseActivation::identity: return y;
    case NoiseActivation::leaky_relu: return y > 0 ? y : alpha * y;
    case NoiseActivation::tanh: return (y > -1.0 && y < 1.0) ? std::atanh(y) : nan;
    case NoiseActivation::sigmoid: return (y > 0.0 && y < 1.0) ? std::log(y / (1.0 - y)) : nan;
  }
  return y;
}

double InvertibleActivation::inverse_derivative(double y) const {
  switch (kind) {
    case NoiseActivation::identity: return 1.0;
    case NoiseActivation::leaky_relu: return y > 0 ? 1.0 : alpha;
    case NoiseActivation::tanh: return 1.0 / (1.0 - y * y);
    case NoiseActivation::sigmoid: return 1.0 / (y - y * y);
  }
  return 1.0;
}

std::string InvertibleActivation::name() const {
  switch (kind) {
    case NoiseActivation::identity: return "identity";
    case NoiseActivation::leaky_relu: return "leaky_relu";
    case NoiseActivation::tanh: return "tanh";
    case NoiseActivation::sigmoid: return "sigmoid";
  }
  return "identity";
}

InvertibleActivation parse_noise_activation(const std::string& name) {
  if (name == "identity") return {NoiseActivation::identity};
  if (name == "leaky_relu") return {NoiseActivation::leaky_relu};
  if (name == "tanh") return {NoiseActivation::tanh};
  if (name == "sigmoid") return {NoiseActivation::sigmoid};
  throw UsageError("unknown activation '" + name + "' (identity, leaky_relu, tanh, sigmoid)");
}

double amplification_analytic(const EigenSystem& es, const RecoveryKernel& kernel) {
  double sum = 0.0;
  for (Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double r = kernel.response(es.eigenvalues[i]);
    if (!std::isfinite(r)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "kernel " << kernel.name << " is not finite at eigenvalue lambda="
          << es.eigenvalues[i] << " (index " << i << ")";
      throw NumericalError(msg.str());
    }
    sum += r * r;
  }
  return sum / static_cast<double>(es.eigenvalues.size());
}

namespace {

Vector clean_signal(const EigenSystem& es, const InvertibleActivation& act, const Vector& x) {
  if (x.size() != es.eigenvalues.size()) throw UsageError("base signal has the wrong length");
  Vector h = exact_filter_apply(es, [](double l) { return 1.0 - l; }, x);
  for (Index i = 0; i < h.size(); ++i) h[i] = act.forward(h[i]);
  return h;
}

// Per-coordinate running mean / M2 over a block of trials (Welford), merged
// with Chan's pairwise update.
struct Moments {
  std::int64_t count = 0;
  std::int64_t rejected = 0;
  Vector mean;
  Vector m2;

  explicit Moments(Index n) : mean(Vector::Zero(n)), m2(Vector::Zero(n)) {}

  void add(const Vector& v) {
    ++count;
    const Vector delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta.cwiseProduct(v - mean);
  }

  void merge(const Moments& o) {
    rejected += o.rejected;
    if (o.count == 0) return;
    if (count == 0) {
      count = o.count;
      mean = o.mean;
      m2 = o.m2;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const Vector delta = o.mean - mean;
    mean += delta * (nb / (na + nb));
    m2 += o.m2 + delta.cwiseAbs2() * (na * nb / (na + nb));
    count += o.count;
  }
};

constexpr std::int64_t kTrialBlock = 4096;

}  // namespace

double amplification_taylor(const EigenSystem& es, const RecoveryKernel& kernel,
                            const InvertibleActivation& act, const Vector& x) {
  const Matrix k = exact_filter_matrix(es, kernel.response);
  const Vector h = clean_signal(es, act, x);
  Vector slope2(h.size());
  for (Index j = 0; j < h.size(); ++j) {
    const double d = act.inverse_derivative(h[j]);
    slope2[j] = d * d;
  }
  return (k.cwiseAbs2() * slope2).mean();
}

MonteCarloResult amplification_monte_carlo(const EigenSystem& es, const RecoveryKernel& kernel,
                                           const InvertibleActivation& act, const Vector& x,
                                           const MonteCarloConfig& config) {
  if (config.trials < 2) throw UsageError("monte carlo needs at least two trials");
  if (!(config.sigma > 0.0)) throw UsageError("sigma must be positive");
  const Index n = es.eigenvalues.size();
  const Matrix k = exact_filter_matrix(es, kernel.response);
  const Vector h = clean_signal(es, act, x);

  const std::int64_t blocks = (config.trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Moments> partial(static_cast<std::size_t>(blocks), Moments(n));
  auto run_block = [&](std::int64_t b) {
    Moments& m = partial[static_cast<std::size_t>(b)];
    const std::int64_t stop = std::min(config.trials, (b + 1) * kTrialBlock);
    Vector noisy(n);
    for (std::int64_t t = b * kTrialBlock; t < stop; ++t) {
      Rng rng = make_rng(config.seed, 0x100000000ULL + static_cast<std::uint64_t>(t));
      bool valid = true;
      for (Index i = 0; i < n; ++i) {
        noisy[i] = act.inverse(h[i] + config.sigma * standard_normal(rng));
        valid = valid && std::isfinite(noisy[i]);
      }
      if (!valid) {
        ++m.rejected;
        continue;
      }
      m.add(k * noisy);
    }
  };

  const auto workers = static_cast<std::int64_t>(std::clamp<std::int64_t>(config.threads, 1, blocks));
  if (workers == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  Moments total(n);
  for (const Moments& m : partial) total.merge(m);
  MonteCarloResult r;
  r.accepted = total.count;
  r.rejected = total.rejected;
  if (static_cast<double>(r.rejected) > config.max_rejection * static_cast<double>(config.trials)) {
    throw NumericalError("monte carlo rejected " + std::to_string(r.rejected) + " of " +
                         std::to_string(config.trials) + " trials (activation domain)");
  }
  if (r.accepted < 2) throw NumericalError("monte carlo kept fewer than two trials");
  const Vector var = total.m2 / static_cast<double>(r.accepted - 1);
  r.ratio = var.mean() / (config.sigma * config.sigma);
  return r;
}

std::vector<AmplificationReport> amplification_report(
    const std::vector<NamedGraph>& graphs, const std::vector<RecoveryKernel>& kernels,
    const std::vector<InvertibleActivation>& activations, const MonteCarloConfig& config) {
  std::vector<AmplificationReport> rows;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const EigenSystem es = eigen_decompose(LaplacianOperator(graphs[g].graph));
    Rng rng = make_rng(config.seed, 60 + g);
    const Vector x = standard_normal_matrix(graphs[g].graph.num_nodes(), 1, rng).col(0);
    for (const auto& kernel : kernels) {
      const double analytic = amplification_analytic(es, kernel);
      for (const auto& act : activations) {
        const MonteCarloResult mc = amplification_monte_carlo(es, kernel, act, x, config);
        AmplificationReport r;
        r.graph = graphs[g].name;
        r.kernel = kernel.name;
        r.activation = act.name();
        r.sigma = config.sigma;
        r.trials = config.trials;
        r.rejected = mc.rejected;
        r.analytic = analytic;
        r.taylor = amplification_taylor(es, kernel, act, x);
        r.monte_carlo = mc.ratio;
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

void write_amplification_csv(std::ostream& out, const std::vector<AmplificationReport>& rows) {
  out << "graph,kernel,activation,analytic,monte_carlo,trials\n";
  for (const auto& r : rows) {
    out << r.graph << ',' << r.kernel << ',' << r.activation << ',' << format_double(r.analytic)
        << ',' << format_double(r.monte_carlo) << ',' << r.trials << '\n';
  }
}

}  // namespace gdn
