#pragma once

// Diameter law of spherical voids whose volumes V = pi D^3 / 6 follow the
// gamma family, its moments, and the two-stage moment fit: the diameter
// coefficient of variation depends on beta alone, so beta comes from the CV
// and mu from the mean.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "voidgeom/errors.hpp"
#include "voidgeom/gamma_model.hpp"
#include "voidgeom/specfun.hpp"

namespace voidgeom {

class DiameterSample {
 public:
  DiameterSample() = default;
  explicit DiameterSample(std::vector<double> values) : values_(std::move(values)) {
    for (double d : values_) {
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw DomainError("DiameterSample: diameters must be positive and finite");
      }
    }
  }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t count() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Class centres with probability weights; weights are rescaled to sum to 1.
class HistogramData {
 public:
  HistogramData() = default;
  HistogramData(std::vector<double> centers, std::vector<double> fractions)
      : centers_(std::move(centers)), fractions_(std::move(fractions)) {
    if (centers_.size() != fractions_.size()) {
      throw DomainError("HistogramData: centre and fraction counts differ");
    }
    if (centers_.empty()) throw DomainError("HistogramData: no classes");
    if (std::all_of(centers_.begin(), centers_.end(),
                    [&](double c) { return c == centers_.front(); }) &&
        centers_.size() > 1) {
      throw DegenerateSampleError("HistogramData: all class centres coincide (zero variance)");
    }
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      if (!(centers_[i] > 0.0) || !std::isfinite(centers_[i])) {
        throw DomainError("HistogramData: class centres must be positive");
      }
      if (i > 0 && !(centers_[i] > centers_[i - 1])) {
        throw DomainError("HistogramData: class centres must be strictly increasing");
      }
      if (!(fractions_[i] >= 0.0) || !std::isfinite(fractions_[i])) {
        throw DomainError("HistogramData: fractions must be non-negative");
      }
    }
    raw_sum_ = std::accumulate(fractions_.begin(), fractions_.end(), 0.0);
    if (!(raw_sum_ > 0.0)) throw DomainError("HistogramData: fractions sum to zero");
    for (double& w : fractions_) w /= raw_sum_;
  }

  const std::vector<double>& centers() const noexcept { return centers_; }
  const std::vector<double>& fractions() const noexcept { return fractions_; }
  /// Sum of the fractions as supplied, before normalization.
  double raw_sum() const noexcept { return raw_sum_; }

 private:
  std::vector<double> centers_;
  std::vector<double> fractions_;
  double raw_sum_ = 1.0;
};

struct DiameterMoments {
  double mean = 0.0;
  double variance = 0.0;
  double cv = 0.0;
};

inline double diameter_to_volume(double d) { return std::numbers::pi * d * d * d / 6.0; }
inline double volume_to_diameter(double v) { return std::cbrt(6.0 * v / std::numbers::pi); }

/// ln h(d), where h(d) = f(pi d^3 / 6) * pi d^2 / 2.
inline double diameter_log_pdf(double d, const GammaParams& p) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DomainError("diameter_pdf: diameter must be positive and finite");
  }
  // Log space throughout: pi d^3 / 6 underflows long before ln d does.
  const double log_d = std::log(d);
  const double log_v = std::log(std::numbers::pi / 6.0) + 3.0 * log_d;
  const double rate = p.beta / p.mu;
  // (beta - 1) ln V + ln(pi d^2 / 2) collapses to beta ln V - ln d + ln 3.
  return p.beta * std::log(rate) + p.beta * log_v - log_d + std::log(3.0) -
         std::exp(log_v) * rate - specfun::log_gamma(p.beta);
}

inline double diameter_pdf(double d, const GammaParams& p) {
  return std::exp(diameter_log_pdf(d, p));
}

/// CV(D)^2 = Gamma(b) Gamma(b + 2/3) / Gamma(b + 1/3)^2 - 1, evaluated through
/// log-gamma ratios so large beta keeps full relative accuracy.
inline double diameter_cv_squared(double beta) {
  if (!(beta > 0.0)) throw DomainError("diameter_cv: beta must be positive");
  const double log_ratio =
      specfun::log_gamma_ratio(beta, 2.0 / 3.0) - 2.0 * specfun::log_gamma_ratio(beta, 1.0 / 3.0);
  return std::expm1(log_ratio);
}

inline double diameter_cv(double beta) { return std::sqrt(diameter_cv_squared(beta)); }

inline DiameterMoments diameter_moments(const GammaParams& p) {
  const double log_scale = std::log(std::numbers::pi * p.beta / (6.0 * p.mu)) / 3.0;
  DiameterMoments m;
  m.mean = std::exp(specfun::log_gamma_ratio(p.beta, 1.0 / 3.0) - log_scale);
  m.cv = diameter_cv(p.beta);
  m.variance = m.mean * m.mean * m.cv * m.cv;
  return m;
}

/// mu that gives diameter mean `mean` at shape `beta`.
inline double mu_from_diameter_mean(double mean, double beta) {
  if (!(mean > 0.0)) throw DomainError("mu_from_diameter_mean: mean must be positive");
  return std::numbers::pi * beta / 6.0 * mean * mean * mean *
         std::exp(-3.0 * specfun::log_gamma_ratio(beta, 1.0 / 3.0));
}

struct ShapeFromCv {
  double beta;
  double residual;
  int iterations;
};

inline constexpr double kShapeBracketLow = 1e-6;
inline constexpr double kShapeBracketHigh = 1e6;

/// Inverts CV(beta) by bisection in log(beta) over [1e-6, 1e6].
inline ShapeFromCv solve_beta_from_cv(double cv) {
  const double cv_max = diameter_cv(kShapeBracketLow);
  const double cv_min = diameter_cv(kShapeBracketHigh);
  if (!(cv >= cv_min && cv <= cv_max)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "beta_from_cv: cv " << cv << " outside attainable range [" << cv_min << ", " << cv_max
        << "]";
    throw OutOfRangeError(msg.str(), cv_min, cv_max);
  }
  double lo = std::log(kShapeBracketLow);
  double hi = std::log(kShapeBracketHigh);
  int it = 0;
  // CV falls with beta: CV(lo) >= cv >= CV(hi).
  while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo)) && it < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (diameter_cv(std::exp(mid)) > cv) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  const double b_lo = std::exp(lo);
  const double b_hi = std::exp(hi);
  const double r_lo = std::abs(diameter_cv(b_lo) - cv);
  const double r_hi = std::abs(diameter_cv(b_hi) - cv);
  return r_lo <= r_hi ? ShapeFromCv{b_lo, r_lo, it} : ShapeFromCv{b_hi, r_hi, it};
}

inline double beta_from_cv(double cv) { return solve_beta_from_cv(cv).beta; }

namespace detail {

inline FitReport fit_from_moments(double mean, double cv, double log_lik, std::size_t count) {
  if (!(cv > 1e-13)) throw DegenerateSampleError("fit_diameter_data: zero variance");
  const auto shape = solve_beta_from_cv(cv);
  const GammaParams fitted{mu_from_diameter_mean(mean, shape.beta), shape.beta};
  auto report = finish_report(fitted, log_lik, shape.residual, shape.iterations);
  report.sample_count = count;
  report.sample_mean = mean;
  report.sample_cv = cv;
  return report;
}

}  // namespace detail

/// Two-stage fit from a diameter mean and coefficient of variation.
/// log_likelihood is left at 0 since no observations are available.
inline FitReport fit_diameter_moments(double mean, double cv) {
  if (!(mean > 0.0)) throw DomainError("fit_diameter_moments: mean must be positive");
  return detail::fit_from_moments(mean, cv, 0.0, 0);
}

/// Plug-in (1/n) moments of the raw diameters.
inline FitReport fit_diameter_data(const DiameterSample& data) {
  const auto& ds = data.values();
  if (ds.size() < 2) throw DegenerateSampleError("fit_diameter_data: at least two diameters required");
  const double n = static_cast<double>(ds.size());
  const double mean = std::accumulate(ds.begin(), ds.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : ds) ss += (d - mean) * (d - mean);
  const double cv = std::sqrt(ss / n) / mean;
  if (!(cv > 1e-13)) throw DegenerateSampleError("fit_diameter_data: zero variance");

  auto report = detail::fit_from_moments(mean, cv, 0.0, ds.size());
  double ll = 0.0;
  for (double d : ds) ll += diameter_log_pdf(d, report.params);
  report.log_likelihood = ll;
  return report;
}

/// Classes are point masses at their centres, weighted by the fractions.
/// log_likelihood is the fraction-weighted mean log density at the centres.
inline FitReport fit_diameter_data(const HistogramData& data) {
  const auto& cs = data.centers();
  const auto& ws = data.fractions();
  const auto positive = std::count_if(ws.begin(), ws.end(), [](double w) { return w > 0.0; });
  if (positive < 2) {
    throw DegenerateSampleError("fit_diameter_data: at least two classes with positive weight required");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) mean += ws[i] * cs[i];
  double var = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) var += ws[i] * (cs[i] - mean) * (cs[i] - mean);
  const double cv = std::sqrt(var) / mean;

  auto report = detail::fit_from_moments(mean, cv, 0.0, cs.size());
  double ll = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (ws[i] > 0.0) ll += ws[i] * diameter_log_pdf(cs[i], report.params);
  }
  report.log_likelihood = ll;
  return report;
}

/// Large-variance asymptote of log(P0) / (nV) for a Gaussian initial field.
inline double bernardeau_log_p0_ratio(double nv, double sigma2) {
  if (!(nv > 0.0) || !(sigma2 > 0.0)) {
    throw DomainError("bernardeau_log_p0_ratio: arguments must be positive");
  }
  return -std::pow(nv * sigma2, -3.0 / 7.0);
}

}  // namespace voidgeom
