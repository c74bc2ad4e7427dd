#pragma once

// Gamma family of void-volume distributions, parametrized by the mean mu and
// the shape beta (1/beta is the squared coefficient of variation). beta = 1 is
// the exponential law of a Poisson process with density n = 1/mu.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "voidgeom/errors.hpp"
#include "voidgeom/specfun.hpp"

namespace voidgeom {

/// A point (mu, beta) of the gamma parameter surface.
struct GammaParams {
  double mu = 1.0;
  double beta = 1.0;

  GammaParams() = default;
  GammaParams(double mean, double shape) : mu(mean), beta(shape) {
    if (!(mu > 0.0) || !std::isfinite(mu) || !(beta > 0.0) || !std::isfinite(beta)) {
      throw DomainError("GammaParams: mu and beta must be positive and finite");
    }
  }

  double mean() const { return mu; }
  double variance() const { return mu * mu / beta; }

  friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

/// Homogeneous Poisson process of galaxies with mean density n.
struct PoissonModel {
  double n = 1.0;

  explicit PoissonModel(double density) : n(density) {
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DomainError("PoissonModel: density must be positive and finite");
    }
  }

  /// The exponential void-volume law of this process.
  GammaParams void_volume_law() const { return {1.0 / n, 1.0}; }
};

/// Observed void volumes.
class VolumeSample {
 public:
  VolumeSample() = default;
  explicit VolumeSample(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("VolumeSample: observations must be positive and finite");
      }
    }
  }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t count() const noexcept { return values_.size(); }

  friend bool operator==(const VolumeSample&, const VolumeSample&) = default;

 private:
  std::vector<double> values_;
};

/// Departure from randomness read off the fitted shape.
enum class Classification { clustered, random, dispersed };

inline constexpr double kRandomBand = 0.02;

inline Classification classify(double beta, double band = kRandomBand) {
  if (std::abs(beta - 1.0) <= band) return Classification::random;
  return beta < 1.0 ? Classification::clustered : Classification::dispersed;
}

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::clustered:
      return "clustered";
    case Classification::random:
      return "random";
    case Classification::dispersed:
      return "dispersed";
  }
  return "unknown";
}

/// Fitted parameters plus diagnostics.
struct FitReport {
  GammaParams params;
  double entropy = 0.0;
  /// Entropy of the random model with the same mean minus `entropy`; never negative.
  double entropy_deficit = 0.0;
  double log_likelihood = 0.0;
  double solver_residual = 0.0;
  int iterations = 0;
  std::size_t sample_count = 0;
  double sample_mean = 0.0;
  double sample_cv = 0.0;
  Classification label = Classification::random;
};

/// ln f(v; mu, beta). v = 0 is admitted for beta >= 1 only.
inline double gamma_log_pdf(double v, const GammaParams& p) {
  if (!(v >= 0.0)) throw DomainError("gamma_pdf: volume must be non-negative");
  const double rate = p.beta / p.mu;
  if (v == 0.0) {
    if (p.beta < 1.0) throw DomainError("gamma_pdf: density diverges at 0 for beta < 1");
    if (p.beta > 1.0) return -std::numeric_limits<double>::infinity();
    return std::log(rate);
  }
  return p.beta * std::log(rate) + (p.beta - 1.0) * std::log(v) - v * rate -
         specfun::log_gamma(p.beta);
}

inline double gamma_pdf(double v, const GammaParams& p) { return std::exp(gamma_log_pdf(v, p)); }

/// Probability that a region of the given volume holds exactly m galaxies.
inline double poisson_void_probability(const PoissonModel& model, double volume, unsigned m) {
  if (!(volume >= 0.0) || !std::isfinite(volume)) {
    throw DomainError("poisson_void_probability: volume must be non-negative");
  }
  const double expected = model.n * volume;
  if (expected == 0.0) return m == 0 ? 1.0 : 0.0;
  if (m == 0) return std::exp(-expected);
  const double mm = static_cast<double>(m);
  return std::exp(mm * std::log(expected) - expected - specfun::log_gamma(mm + 1.0));
}

/// Differential Shannon entropy of the gamma density.
inline double shannon_entropy(const GammaParams& p) {
  const double b = p.beta;
  return b + (1.0 - b) * specfun::digamma(b) + std::log(p.mu) + specfun::log_gamma(b) -
         std::log(b);
}

inline double log_likelihood(const VolumeSample& sample, const GammaParams& p) {
  double total = 0.0;
  for (double x : sample.values()) total += gamma_log_pdf(x, p);
  return total;
}

namespace detail {

struct ShapeRoot {
  double beta;
  double residual;
  int iterations;
};

inline constexpr double kDegenerateGap = 1e-13;

/// Root of ln(beta) - digamma(beta) = gap for gap > 0. The left side falls
/// strictly from +inf to 0, so the root is bracketed by [1e-8, 1e8] for any
/// gap the double type can resolve; Newton steps that leave the bracket are
/// replaced by geometric bisection.
inline ShapeRoot solve_shape_equation(double gap) {
  const auto f = [gap](double b) { return std::log(b) - specfun::digamma(b) - gap; };
  const auto df = [](double b) { return 1.0 / b - specfun::trigamma(b); };

  double lo = 1e-8;
  double hi = 1e8;
  double b = (3.0 - gap + std::sqrt((gap - 3.0) * (gap - 3.0) + 24.0 * gap)) / (12.0 * gap);
  if (!(b > lo && b < hi)) b = std::sqrt(lo * hi);

  const double tol = std::min(1e-10, 1e-8 * gap);
  double fb = f(b);
  int it = 0;
  for (; it < 200; ++it) {
    if (std::abs(fb) <= tol) break;
    // f decreasing: f > 0 means the root is to the right.
    if (fb > 0.0) {
      lo = b;
    } else {
      hi = b;
    }
    double next = b - fb / df(b);
    if (!(next > lo && next < hi)) next = std::sqrt(lo * hi);
    if (std::abs(next - b) <= 4.0 * std::numeric_limits<double>::epsilon() * b) {
      b = next;
      fb = f(b);
      ++it;
      break;
    }
    b = next;
    fb = f(b);
  }
  return {b, std::abs(fb), it};
}

inline FitReport finish_report(GammaParams params, double log_lik, double residual, int iterations) {
  FitReport r;
  r.params = params;
  r.entropy = shannon_entropy(params);
  r.entropy_deficit = std::max(0.0, shannon_entropy({params.mu, 1.0}) - r.entropy);
  r.log_likelihood = log_lik;
  r.solver_residual = residual;
  r.iterations = iterations;
  r.label = classify(params.beta);
  return r;
}

}  // namespace detail

/// Maximum-likelihood fit: mu is the sample mean, beta solves
/// ln(beta) - digamma(beta) = ln(mean) - mean(ln x).
inline FitReport mle_fit(const VolumeSample& sample) {
  const auto& xs = sample.values();
  if (xs.size() < 2) throw DegenerateSampleError("mle_fit: at least two observations required");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double mean_log = 0.0;
  for (double x : xs) mean_log += std::log(x);
  mean_log /= n;
  const double gap = std::log(mean) - mean_log;

  if (gap < -detail::kDegenerateGap) {
    throw InconsistencyError("mle_fit: negative log-moment gap " + std::to_string(gap));
  }
  if (gap < detail::kDegenerateGap) {
    throw DegenerateSampleError("mle_fit: observations carry no spread (all equal)");
  }

  const auto root = detail::solve_shape_equation(gap);
  const GammaParams fitted{mean, root.beta};
  auto report = detail::finish_report(fitted, log_likelihood(sample, fitted), root.residual,
                                      root.iterations);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  report.sample_count = xs.size();
  report.sample_mean = mean;
  report.sample_cv = std::sqrt(ss / n) / mean;
  return report;
}

namespace detail {

/// Uniform on the open interval (0, 1) from the top 53 bits.
inline double open_uniform(std::mt19937_64& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

/// Standard normal by the Marsaglia polar method; one variate per call.
inline double standard_normal(std::mt19937_64& rng) {
  for (;;) {
    const double u = 2.0 * open_uniform(rng) - 1.0;
    const double v = 2.0 * open_uniform(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

/// Marsaglia-Tsang squeeze sampler for Gamma(shape, 1), shape >= 1.
inline double standard_gamma_large_shape(double shape, std::mt19937_64& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = open_uniform(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double standard_gamma(double shape, std::mt19937_64& rng) {
  if (shape >= 1.0) return standard_gamma_large_shape(shape, rng);
  // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
  const double g = standard_gamma_large_shape(shape + 1.0, rng);
  return g * std::exp(std::log(open_uniform(rng)) / shape);
}

}  // namespace detail

/// `count` independent draws from f(.; mu, beta); deterministic in `seed`.
inline VolumeSample sample_gamma(const GammaParams& p, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw DomainError("sample_gamma: count must be positive");
  std::mt19937_64 rng(seed);
  const double scale = p.mu / p.beta;
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    const double v = scale * detail::standard_gamma(p.beta, rng);
    if (v > 0.0) out.push_back(v);  // drops underflowed draws at extreme small shape
  }
  return VolumeSample(std::move(out));
}

}  // namespace voidgeom
