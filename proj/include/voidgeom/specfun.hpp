#pragma once

// Log-gamma and polygamma functions of orders 0..2 on the positive real axis.
//
// Both use the same scheme: shift the argument upward with the functional
// recurrence until it is large enough for the Bernoulli-number asymptotic
// series, then sum the truncated series.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "voidgeom/errors.hpp"

namespace voidgeom::specfun {

namespace detail {

// B_2, B_4, ..., B_20
inline constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,       1.0 / 42.0,
    -1.0 / 30.0,        5.0 / 66.0,        -691.0 / 2730.0,
    7.0 / 6.0,          -3617.0 / 510.0,   43867.0 / 798.0,
    -174611.0 / 330.0};

inline constexpr double kLogGammaShift = 15.0;
inline constexpr double kPolygammaShift = 10.0;

inline void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be a positive finite real, got " +
                      std::to_string(x));
  }
}

/// Stirling remainder R(x) = ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2].
/// Valid for x >= kLogGammaShift.
inline double stirling_remainder(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double term = inv;
  double sum = 0.0;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    sum += kBernoulli[k] / (n * (n - 1.0)) * term;
    term *= inv2;
  }
  return sum;
}

inline double digamma_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double term = inv2;
  double sum = 0.0;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    sum += kBernoulli[k] / (2.0 * static_cast<double>(k + 1)) * term;
    term *= inv2;
  }
  return std::log(x) - 0.5 / x - sum;
}

inline double trigamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double term = inv2 * inv;
  double sum = 0.0;
  for (double b : kBernoulli) {
    sum += b * term;
    term *= inv2;
  }
  return inv + 0.5 * inv2 + sum;
}

inline double tetragamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double term = inv2 * inv2;
  double sum = 0.0;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    sum += (2.0 * static_cast<double>(k + 1) + 1.0) * kBernoulli[k] * term;
    term *= inv2;
  }
  return -inv2 - inv2 * inv - sum;
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  detail::require_positive(x, "log_gamma");
  double shifted = x;
  double product = 1.0;
  while (shifted < detail::kLogGammaShift) {
    product *= shifted;
    shifted += 1.0;
  }
  const double stirling = (shifted - 0.5) * std::log(shifted) - shifted +
                          0.5 * std::log(2.0 * std::numbers::pi) +
                          detail::stirling_remainder(shifted);
  return stirling - std::log(product);
}

/// ln Gamma(x + a) - ln Gamma(x) without the cancellation a direct
/// difference suffers for large x. Requires x > 0 and x + a > 0.
inline double log_gamma_ratio(double x, double a) {
  detail::require_positive(x, "log_gamma_ratio");
  detail::require_positive(x + a, "log_gamma_ratio");
  const double y = x + a;
  if (x < detail::kLogGammaShift || y < detail::kLogGammaShift) {
    return log_gamma(y) - log_gamma(x);
  }
  // (y - 1/2) ln y - y - (x - 1/2) ln x + x, rewritten around ln x.
  const double l = std::log1p(a / x);
  return (y - 0.5) * l + a * std::log(x) - a + detail::stirling_remainder(y) -
         detail::stirling_remainder(x);
}

/// ψ^(order)(x) for order in {0, 1, 2}.
inline double polygamma(int order, double x) {
  detail::require_positive(x, "polygamma");
  double shifted = x;
  double correction = 0.0;
  switch (order) {
    case 0:
      while (shifted < detail::kPolygammaShift) {
        correction -= 1.0 / shifted;
        shifted += 1.0;
      }
      return detail::digamma_asymptotic(shifted) + correction;
    case 1:
      while (shifted < detail::kPolygammaShift) {
        correction += 1.0 / (shifted * shifted);
        shifted += 1.0;
      }
      return detail::trigamma_asymptotic(shifted) + correction;
    case 2:
      while (shifted < detail::kPolygammaShift) {
        correction -= 2.0 / (shifted * shifted * shifted);
        shifted += 1.0;
      }
      return detail::tetragamma_asymptotic(shifted) + correction;
    default:
      throw DomainError("polygamma: unsupported order " + std::to_string(order));
  }
}

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }
inline double tetragamma(double x) { return polygamma(2, x); }

}  // namespace voidgeom::specfun
