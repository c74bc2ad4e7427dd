#pragma once

// Riemannian geometry of the gamma parameter surface under the Fisher metric
//
//   ds^2 = (beta / mu^2) dmu^2 + (trigamma(beta) - 1/beta) dbeta^2.
//
// The chart (mu, beta) covers the whole open quadrant; the metric is diagonal,
// so only four of the six connection coefficients are non-zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "voidgeom/errors.hpp"
#include "voidgeom/quadrature.hpp"
#include "voidgeom/specfun.hpp"

namespace voidgeom::geometry {

struct ManifoldPoint {
  double mu = 1.0;
  double beta = 1.0;

  bool in_chart() const {
    return mu > 0.0 && beta > 0.0 && std::isfinite(mu) && std::isfinite(beta);
  }
};

struct TangentVector {
  double d_mu = 0.0;
  double d_beta = 0.0;
};

/// Symmetric 2x2 matrix in (mu, beta) coordinates.
struct MetricTensor {
  double g_mumu = 0.0;
  double g_mubeta = 0.0;
  double g_betabeta = 0.0;

  double operator()(int i, int j) const {
    if (i == 0 && j == 0) return g_mumu;
    if (i == 1 && j == 1) return g_betabeta;
    return g_mubeta;
  }
  double determinant() const { return g_mumu * g_betabeta - g_mubeta * g_mubeta; }
};

/// Levi-Civita connection coefficients; index 1 is mu, index 2 is beta.
struct Christoffel {
  double g1_11 = 0.0;
  double g1_12 = 0.0;
  double g1_22 = 0.0;
  double g2_11 = 0.0;
  double g2_12 = 0.0;
  double g2_22 = 0.0;

  /// Gamma^k_ij with zero-based indices.
  double operator()(int k, int i, int j) const {
    const int s = (i == 1 && j == 1) ? 2 : (i + j == 1 ? 1 : 0);
    if (k == 0) return s == 0 ? g1_11 : (s == 1 ? g1_12 : g1_22);
    return s == 0 ? g2_11 : (s == 1 ? g2_12 : g2_22);
  }
};

/// trigamma(beta) - 1/beta, the beta-beta metric component. Positive for all beta > 0.
inline double shape_metric(double beta) { return specfun::trigamma(beta) - 1.0 / beta; }

inline void require_in_chart(const ManifoldPoint& p, const char* fn) {
  if (!p.in_chart()) {
    throw DomainError(std::string(fn) + ": point (" + std::to_string(p.mu) + ", " +
                      std::to_string(p.beta) + ") outside the chart");
  }
}

inline MetricTensor metric_tensor(const ManifoldPoint& p) {
  require_in_chart(p, "metric_tensor");
  return {p.beta / (p.mu * p.mu), 0.0, shape_metric(p.beta)};
}

inline double tangent_norm_squared(const ManifoldPoint& p, const TangentVector& v) {
  const auto g = metric_tensor(p);
  return g.g_mumu * v.d_mu * v.d_mu + 2.0 * g.g_mubeta * v.d_mu * v.d_beta +
         g.g_betabeta * v.d_beta * v.d_beta;
}

inline double tangent_norm(const ManifoldPoint& p, const TangentVector& v) {
  return std::sqrt(tangent_norm_squared(p, v));
}

inline Christoffel christoffel(const ManifoldPoint& p) {
  require_in_chart(p, "christoffel");
  const double g22 = shape_metric(p.beta);
  const double dg22 = specfun::tetragamma(p.beta) + 1.0 / (p.beta * p.beta);
  Christoffel c;
  c.g1_11 = -1.0 / p.mu;
  c.g1_12 = 0.5 / p.beta;
  c.g1_22 = 0.0;
  c.g2_11 = -0.5 / (p.mu * p.mu * g22);
  c.g2_12 = 0.0;
  c.g2_22 = 0.5 * dg22 / g22;
  return c;
}

/// K(beta) = (trigamma + beta * tetragamma) / (4 (beta * trigamma - 1)^2).
/// Independent of mu; tends to -1/4 as beta -> 0 and -1/2 as beta -> inf.
inline double gaussian_curvature(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("gaussian_curvature: beta must be positive");
  }
  const double tri = specfun::trigamma(beta);
  const double denom = beta * tri - 1.0;
  return (tri + beta * specfun::tetragamma(beta)) / (4.0 * denom * denom);
}

/// A parametric curve t -> (mu(t), beta(t)) on [a, b] with its derivative.
struct CurveSpec {
  std::function<ManifoldPoint(double)> evaluate;
  std::function<TangentVector(double)> derivative;
  double a = 0.0;
  double b = 1.0;
};

/// Largest relative mismatch between `derivative` and a central difference
/// of `evaluate` at `samples` interior points.
inline double derivative_mismatch(const CurveSpec& c, int samples = 16) {
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double t = c.a + (c.b - c.a) * i / (samples + 1.0);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    const auto lo = c.evaluate(t - h);
    const auto hi = c.evaluate(t + h);
    const auto d = c.derivative(t);
    const double fd_mu = (hi.mu - lo.mu) / (2.0 * h);
    const double fd_beta = (hi.beta - lo.beta) / (2.0 * h);
    worst = std::max(worst, std::abs(fd_mu - d.d_mu) / std::max(1.0, std::abs(d.d_mu)));
    worst = std::max(worst, std::abs(fd_beta - d.d_beta) / std::max(1.0, std::abs(d.d_beta)));
  }
  return worst;
}

namespace detail {

inline quadrature::Options curve_quadrature() {
  quadrature::Options o;
  o.abs_tol = 1e-11;
  o.rel_tol = 1e-13;
  return o;
}

template <class Integrand>
double integrate_along(const CurveSpec& c, Integrand&& integrand, const char* fn) {
  if (!c.evaluate || !c.derivative) throw DomainError(std::string(fn) + ": incomplete curve");
  if (!(c.b >= c.a)) throw DomainError(std::string(fn) + ": curve domain must satisfy a <= b");
  if (c.a == c.b) return 0.0;
  auto f = [&](double t) {
    const auto p = c.evaluate(t);
    require_in_chart(p, fn);
    return integrand(p, c.derivative(t));
  };
  return quadrature::integrate(f, c.a, c.b, curve_quadrature()).value;
}

}  // namespace detail

/// Information length: integral of the tangent norm.
inline double curve_length(const CurveSpec& c) {
  return detail::integrate_along(
      c, [](const ManifoldPoint& p, const TangentVector& v) { return tangent_norm(p, v); },
      "curve_length");
}

/// Energy: integral of the squared tangent norm.
inline double curve_energy(const CurveSpec& c) {
  return detail::integrate_along(
      c, [](const ManifoldPoint& p, const TangentVector& v) { return tangent_norm_squared(p, v); },
      "curve_energy");
}

/// Straight segment between p and q in chart coordinates, on [0, 1].
inline CurveSpec chart_segment(const ManifoldPoint& p, const ManifoldPoint& q) {
  const TangentVector d{q.mu - p.mu, q.beta - p.beta};
  return {[p, d](double t) { return ManifoldPoint{p.mu + t * d.d_mu, p.beta + t * d.d_beta}; },
          [d](double) { return d; }, 0.0, 1.0};
}

struct GeodesicSample {
  double t = 0.0;
  ManifoldPoint point;
  TangentVector velocity;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double length = 0.0;
  double energy = 0.0;
};

inline constexpr double kChartGuard = 1e-9;

/// The shot path left the region mu, beta > 1e-9.
class BoundaryError : public DomainError {
 public:
  BoundaryError(const std::string& what, GeodesicSample last)
      : DomainError(what), last_(last) {}
  const GeodesicSample& last_valid() const noexcept { return last_; }

 private:
  GeodesicSample last_;
};

namespace detail {

using State = std::array<double, 4>;  // mu, beta, dmu, dbeta

inline bool state_in_chart(const State& s) {
  return s[0] > kChartGuard && s[1] > kChartGuard && std::isfinite(s[0]) &&
         std::isfinite(s[1]) && std::isfinite(s[2]) && std::isfinite(s[3]);
}

inline State geodesic_rhs(const State& s) {
  const auto c = christoffel({s[0], s[1]});
  const double u = s[2];
  const double w = s[3];
  return {u, w, -(c.g1_11 * u * u + 2.0 * c.g1_12 * u * w + c.g1_22 * w * w),
          -(c.g2_11 * u * u + 2.0 * c.g2_12 * u * w + c.g2_22 * w * w)};
}

inline State axpy(const State& s, double h, const State& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]};
}

}  // namespace detail

/// Integrates the geodesic equations from `start` with initial `velocity`
/// over [0, t_end] by classical RK4 with `steps` equal steps.
inline GeodesicPath geodesic_shoot(const ManifoldPoint& start, const TangentVector& velocity,
                                   double t_end, int steps) {
  require_in_chart(start, "geodesic_shoot");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw DomainError("geodesic_shoot: t_end must be positive");
  }
  if (steps < 1) throw DomainError("geodesic_shoot: steps must be positive");
  if (!std::isfinite(velocity.d_mu) || !std::isfinite(velocity.d_beta)) {
    throw DomainError("geodesic_shoot: velocity must be finite");
  }

  const double h = t_end / steps;
  detail::State s{start.mu, start.beta, velocity.d_mu, velocity.d_beta};
  if (!detail::state_in_chart(s)) {
    throw BoundaryError("geodesic_shoot: start within the chart guard",
                        {0.0, start, velocity});
  }

  GeodesicPath path;
  path.samples.reserve(static_cast<std::size_t>(steps) + 1);
  path.samples.push_back({0.0, start, velocity});

  const auto guard = [&](const detail::State& x) {
    if (!detail::state_in_chart(x)) {
      throw BoundaryError("geodesic_shoot: path reached the chart boundary",
                          path.samples.back());
    }
  };

  for (int i = 1; i <= steps; ++i) {
    const auto k1 = detail::geodesic_rhs(s);
    const auto s2 = detail::axpy(s, 0.5 * h, k1);
    guard(s2);
    const auto k2 = detail::geodesic_rhs(s2);
    const auto s3 = detail::axpy(s, 0.5 * h, k2);
    guard(s3);
    const auto k3 = detail::geodesic_rhs(s3);
    const auto s4 = detail::axpy(s, h, k3);
    guard(s4);
    const auto k4 = detail::geodesic_rhs(s4);
    for (int j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    guard(s);
    path.samples.push_back({i == steps ? t_end : i * h, {s[0], s[1]}, {s[2], s[3]}});
  }

  // Trapezoid over the sampled speeds; the speed is constant on a geodesic.
  double length = 0.0;
  double energy = 0.0;
  double prev_speed2 = tangent_norm_squared(path.samples.front().point, path.samples.front().velocity);
  for (std::size_t i = 1; i < path.samples.size(); ++i) {
    const double speed2 = tangent_norm_squared(path.samples[i].point, path.samples[i].velocity);
    length += 0.5 * h * (std::sqrt(prev_speed2) + std::sqrt(speed2));
    energy += 0.5 * h * (prev_speed2 + speed2);
    prev_speed2 = speed2;
  }
  path.length = length;
  path.energy = energy;
  return path;
}

/// Largest absolute deviation of the speed from its initial value.
inline double speed_drift(const GeodesicPath& path) {
  if (path.samples.empty()) return 0.0;
  const auto& first = path.samples.front();
  const double v0 = tangent_norm(first.point, first.velocity);
  double worst = 0.0;
  for (const auto& s : path.samples) {
    worst = std::max(worst, std::abs(tangent_norm(s.point, s.velocity) - v0));
  }
  return worst;
}

struct ShootingOptions {
  int steps = 400;
  int max_iterations = 50;
  double tolerance = 1e-8;  // max-norm endpoint mismatch in chart coordinates
};

struct GeodesicSolution {
  GeodesicPath path;
  TangentVector initial_velocity;
  int iterations = 0;
  double residual = 0.0;
};

/// Solves the two-point problem p -> q by single shooting: damped Newton on
/// the initial velocity with a finite-difference Jacobian of the time-1 endpoint.
inline GeodesicSolution geodesic_between(const ManifoldPoint& p, const ManifoldPoint& q,
                                         const ShootingOptions& opts = {}) {
  require_in_chart(p, "geodesic_distance");
  require_in_chart(q, "geodesic_distance");

  const auto bound = [&] { return curve_length(chart_segment(p, q)); };
  const auto fail = [&](const std::string& why) {
    throw NoConvergenceError("geodesic_distance: " + why, bound());
  };

  // Endpoint mismatch for a given initial velocity; throws BoundaryError.
  const auto mismatch = [&](const TangentVector& v) {
    const auto path = geodesic_shoot(p, v, 1.0, opts.steps);
    const auto& end = path.samples.back().point;
    return std::array<double, 2>{end.mu - q.mu, end.beta - q.beta};
  };
  const auto max_norm = [](const std::array<double, 2>& r) {
    return std::max(std::abs(r[0]), std::abs(r[1]));
  };

  TangentVector v{q.mu - p.mu, q.beta - p.beta};
  std::array<double, 2> r{};
  try {
    r = mismatch(v);
  } catch (const BoundaryError&) {
    fail("initial guess leaves the chart");
  }

  int it = 0;
  while (max_norm(r) > opts.tolerance) {
    if (it >= opts.max_iterations) fail("iteration budget exhausted");
    ++it;

    // Columns of the Jacobian d(endpoint)/d(velocity).
    std::array<std::array<double, 2>, 2> jac{};
    try {
      for (int col = 0; col < 2; ++col) {
        TangentVector dv = v;
        double& comp = col == 0 ? dv.d_mu : dv.d_beta;
        const double h = 1e-7 * std::max(1.0, std::abs(comp));
        comp += h;
        const auto rh = mismatch(dv);
        jac[0][col] = (rh[0] - r[0]) / h;
        jac[1][col] = (rh[1] - r[1]) / h;
      }
    } catch (const BoundaryError&) {
      fail("Jacobian probe leaves the chart");
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) fail("singular shooting Jacobian");
    const double step_mu = (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
    const double step_beta = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;

    double damping = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, damping *= 0.5) {
      const TangentVector trial{v.d_mu - damping * step_mu, v.d_beta - damping * step_beta};
      try {
        const auto rt = mismatch(trial);
        if (max_norm(rt) < max_norm(r)) {
          v = trial;
          r = rt;
          accepted = true;
          break;
        }
      } catch (const BoundaryError&) {
      }
    }
    if (!accepted) fail("line search stalled");
  }

  GeodesicSolution sol;
  sol.path = geodesic_shoot(p, v, 1.0, opts.steps);
  sol.initial_velocity = v;
  sol.iterations = it;
  sol.residual = max_norm(r);
  return sol;
}

/// Length of the geodesic joining p and q.
inline double geodesic_distance(const ManifoldPoint& p, const ManifoldPoint& q,
                                const ShootingOptions& opts = {}) {
  if (p.mu == q.mu && p.beta == q.beta) {
    require_in_chart(p, "geodesic_distance");
    return 0.0;
  }
  return geodesic_between(p, q, opts).path.length;
}

}  // namespace voidgeom::geometry
