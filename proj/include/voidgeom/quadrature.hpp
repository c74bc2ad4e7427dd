#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// The interval with the largest local error estimate is bisected until the
// summed estimate meets max(abs_tol, rel_tol * |I|) or the subdivision budget
// runs out. Integrable endpoint singularities are handled by repeated
// bisection; nodes never touch the endpoints.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "voidgeom/errors.hpp"

namespace voidgeom::quadrature {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrate f over the finite interval [lo, hi]; hi < lo gives the negated
/// integral over [hi, lo].
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts = {}) {
  Result result;
  if (lo == hi) {
    result.converged = true;
    return result;
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate: finite limits required");
  }
  if (hi < lo) {
    result = integrate(f, hi, lo, opts);
    result.value = -result.value;
    return result;
  }

  std::priority_queue<detail::Segment> heap;
  auto first = detail::gauss_kronrod_15(f, lo, hi);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t evals = 15;

  const auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  while (error > tolerance() && heap.size() < opts.max_subdivisions) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // interval at machine resolution
    heap.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    evals += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = error;
  result.evaluations = evals;
  result.converged = error <= tolerance();
  return result;
}

/// Integrate f over [lo, +inf) via x = lo + t / (1 - t), t in [0, 1).
template <class F>
Result integrate_to_infinity(F&& f, double lo, const Options& opts = {}) {
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = lo + t / one_minus;
    if (!std::isfinite(x)) return 0.0;
    const double fx = f(x);
    return fx == 0.0 ? 0.0 : fx / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace voidgeom::quadrature
