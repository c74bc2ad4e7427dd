#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "voidgeom/gamma_model.hpp"
#include "voidgeom/quadrature.hpp"

using namespace voidgeom;

namespace {

const std::vector<double> kBetaGrid = {0.2, 0.37, 1.0, 2.0, 5.0};
const std::vector<double> kMuGrid = {0.5, 1.0, 1.244, 3.0};

template <class F>
double half_line(F f, double split) {
  quadrature::Options o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-13;
  return quadrature::integrate(f, 0.0, split, o).value +
         quadrature::integrate_to_infinity(f, split, o).value;
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

TEST(GammaParams, RejectsInvalid) {
  EXPECT_THROW(GammaParams(0.0, 1.0), DomainError);
  EXPECT_THROW(GammaParams(1.0, -1.0), DomainError);
  EXPECT_THROW(GammaParams(INFINITY, 1.0), DomainError);
  EXPECT_THROW(PoissonModel(0.0), DomainError);
  EXPECT_THROW(VolumeSample({1.0, 0.0}), DomainError);
}

TEST(GammaPdf, ExponentialAtOrigin) { EXPECT_DOUBLE_EQ(gamma_pdf(0.0, {1.0, 1.0}), 1.0); }

TEST(GammaPdf, ReducesToPoissonExponential) {
  for (double mu : {0.5, 2.0}) {
    for (double v : {0.1, 1.0, 5.0}) {
      EXPECT_NEAR(gamma_pdf(v, {mu, 1.0}), std::exp(-v / mu) / mu, 1e-12);
    }
  }
  const PoissonModel poisson(4.0);
  EXPECT_EQ(poisson.void_volume_law(), GammaParams(0.25, 1.0));
}

TEST(GammaPdf, OriginAndNegativeVolumes) {
  EXPECT_THROW(gamma_pdf(-0.1, {1.0, 2.0}), DomainError);
  EXPECT_THROW(gamma_pdf(0.0, {1.0, 0.37}), DomainError);
  EXPECT_EQ(gamma_pdf(0.0, {1.0, 2.0}), 0.0);
}

TEST(GammaPdf, MatchesBoostDensity) {
  for (double beta : kBetaGrid) {
    for (double mu : kMuGrid) {
      for (double v : {1e-4, 0.01, 0.3, 1.0, 4.0, 20.0}) {
        const double ref = boost::math::gamma_p_derivative(beta, v * beta / mu) * beta / mu;
        EXPECT_NEAR(gamma_pdf(v, {mu, beta}), ref, 1e-12 * std::max(1.0, ref));
      }
    }
  }
}

TEST(GammaPdf, NormalizationAndMoments) {
  for (double beta : kBetaGrid) {
    for (double mu : kMuGrid) {
      const GammaParams p{mu, beta};
      const double mass = half_line([&](double v) { return v > 0 ? gamma_pdf(v, p) : 0.0; }, mu);
      const double mean = half_line([&](double v) { return v > 0 ? v * gamma_pdf(v, p) : 0.0; }, mu);
      const double second =
          half_line([&](double v) { return v > 0 ? v * v * gamma_pdf(v, p) : 0.0; }, mu);
      EXPECT_NEAR(mass, 1.0, 1e-8) << mu << "," << beta;
      EXPECT_NEAR(mean, mu, 1e-6) << mu << "," << beta;
      EXPECT_NEAR(second - mean * mean, mu * mu / beta, 1e-6) << mu << "," << beta;
    }
  }
}

TEST(GammaPdf, MeanAtFittedShapeByQuadrature) {
  const GammaParams p{1.7, 0.37};
  EXPECT_NEAR(half_line([&](double v) { return v > 0 ? v * gamma_pdf(v, p) : 0.0; }, 1.7), 1.7,
              1e-8);
}

TEST(PoissonVoid, Examples) {
  EXPECT_EQ(poisson_void_probability(PoissonModel(1.0), 0.0, 0), 1.0);
  EXPECT_NEAR(poisson_void_probability(PoissonModel(2.0), 1.0, 0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(poisson_void_probability(PoissonModel(2.0), 1.0, 0), 0.135335, 1e-6);
  EXPECT_THROW(poisson_void_probability(PoissonModel(1.0), -1.0, 0), DomainError);
}

TEST(PoissonVoid, PmfSumsToOne) {
  double total = 0.0;
  for (unsigned m = 0; m <= 200; ++m) total += poisson_void_probability(PoissonModel(5.0), 1.0, m);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PoissonVoid, MatchesFactorialForm) {
  const PoissonModel model(0.7);
  for (unsigned m = 0; m < 10; ++m) {
    const double nv = 0.7 * 3.0;
    EXPECT_NEAR(poisson_void_probability(model, 3.0, m),
                std::pow(nv, m) * std::exp(-nv) / std::tgamma(m + 1.0), 1e-14);
  }
}

TEST(Entropy, RandomCaseClosedForm) {
  EXPECT_NEAR(shannon_entropy({1.0, 1.0}), 1.0, 1e-14);
  EXPECT_NEAR(shannon_entropy({std::numbers::e, 1.0}), 2.0, 1e-14);
  EXPECT_LT(shannon_entropy({1.0, 0.5}), 1.0);
}

TEST(Entropy, MatchesQuadratureOfMinusFLogF) {
  for (double beta : {0.5, 0.37, 1.0, 3.0}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      const GammaParams p{mu, beta};
      const double numeric = half_line(
          [&](double v) {
            if (!(v > 0)) return 0.0;
            const double lf = gamma_log_pdf(v, p);
            return -std::exp(lf) * lf;
          },
          mu);
      EXPECT_NEAR(shannon_entropy(p), numeric, 1e-8) << mu << "," << beta;
    }
  }
}

TEST(Entropy, MaximumAtRandomShape) {
  for (double mu : {0.5, 1.0, 2.0, 10.0}) {
    const double top = shannon_entropy({mu, 1.0});
    for (double beta : {0.05, 0.25, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0, 4.0, 50.0}) {
      EXPECT_LT(shannon_entropy({mu, beta}), top) << mu << "," << beta;
    }
  }
  // d S / d beta = 1 - 1/beta + (1 - beta) trigamma(beta) vanishes at beta = 1.
  const double b = 1.0;
  EXPECT_NEAR(1.0 - 1.0 / b + (1.0 - b) * specfun::trigamma(b), 0.0, 1e-15);
  const double h = 1e-5;
  EXPECT_NEAR((shannon_entropy({1.0, 1.0 + h}) - shannon_entropy({1.0, 1.0 - h})) / (2 * h), 0.0,
              1e-9);
}

TEST(LogLikelihood, Examples) {
  EXPECT_NEAR(log_likelihood(VolumeSample({1.0}), {1.0, 1.0}), -1.0, 1e-13);
  // gamma_pdf(0, (1,1)) = 1 is not admissible as an observation, so find X with
  // density 1 for (0.5, 1): 2 e^{-2X} = 1 at X = ln 2 / 2.
  const GammaParams p{0.5, 1.0};
  const double x_unit = std::log(2.0) / 2.0;
  EXPECT_NEAR(gamma_pdf(x_unit, p), 1.0, 1e-13);
  const double base = log_likelihood(VolumeSample({0.3, 0.9}), p);
  EXPECT_NEAR(log_likelihood(VolumeSample({0.3, 0.9, x_unit}), p), base, 1e-14);
}

TEST(LogLikelihood, PrefersGeneratingShape) {
  const auto sample = sample_gamma({1.0, 2.0}, 20000, 7);
  EXPECT_GT(log_likelihood(sample, {1.0, 2.0}), log_likelihood(sample, {1.0, 0.5}));
}

TEST(Sampler, DeterministicInSeed) {
  const auto a = sample_gamma({1.244, 0.37}, 1000, 42);
  const auto b = sample_gamma({1.244, 0.37}, 1000, 42);
  const auto c = sample_gamma({1.244, 0.37}, 1000, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.count(), 1000u);
}

TEST(Sampler, MomentsOfLargeSamples) {
  const auto exp_sample = sample_gamma({3.0, 1.0}, 1000000, 1);
  EXPECT_NEAR(mean_of(exp_sample.values()), 3.0, 0.03);
  const auto narrow = sample_gamma({1.0, 4.0}, 1000000, 2);
  EXPECT_NEAR(variance_of(narrow.values()), 0.25, 0.005);
}

TEST(Sampler, KolmogorovSmirnovAgainstBoostCdf) {
  // Critical value at the 0.1% level is 1.95 / sqrt(n).
  for (double beta : {0.2, 0.37, 1.0, 2.5}) {
    const std::size_t n = 20000;
    auto xs = sample_gamma({1.5, beta}, n, 11).values();
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cdf = oracle::gamma_cdf(xs[i], 1.5, beta);
      d = std::max({d, std::abs(cdf - static_cast<double>(i) / n),
                    std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LT(d, 1.95 / std::sqrt(static_cast<double>(n))) << "beta=" << beta;
  }
}

TEST(MleFit, DegenerateSample) {
  EXPECT_THROW(mle_fit(VolumeSample({1.0, 1.0, 1.0})), DegenerateSampleError);
  EXPECT_THROW(mle_fit(VolumeSample({2.5})), DegenerateSampleError);
}

TEST(MleFit, RecoversParameters) {
  struct Case {
    double mu, beta;
    std::uint64_t seed;
  };
  for (const auto& c : {Case{2.0, 0.37, 101}, Case{1.0, 1.0, 102}, Case{0.5, 3.0, 103}}) {
    const auto report = mle_fit(sample_gamma({c.mu, c.beta}, 100000, c.seed));
    EXPECT_NEAR(report.params.mu, c.mu, 0.02 * c.mu);
    EXPECT_NEAR(report.params.beta, c.beta, 0.03 * c.beta);
    EXPECT_LE(report.solver_residual, 1e-10);
    EXPECT_GE(report.entropy_deficit, 0.0);
    EXPECT_EQ(report.sample_count, 100000u);
  }
}

TEST(MleFit, SolvesShapeEquation) {
  const auto sample = sample_gamma({1.3, 0.6}, 5000, 5);
  const auto r = mle_fit(sample);
  double mean_log = 0.0;
  for (double x : sample.values()) mean_log += std::log(x);
  mean_log /= static_cast<double>(sample.count());
  const double gap = std::log(r.params.mu) - mean_log;
  EXPECT_NEAR(std::log(r.params.beta) - oracle::polygamma(0, r.params.beta), gap, 1e-10);
  EXPECT_NEAR(r.params.mu, mean_of(sample.values()), 1e-14);
}

TEST(MleFit, ExtremeShapes) {
  // Nearly constant data drives beta very high; heavy spread drives it low.
  const auto tight = mle_fit(VolumeSample({1.0, 1.0 + 1e-4, 1.0 - 1e-4, 1.0 + 2e-4}));
  EXPECT_GT(tight.params.beta, 1e7);
  const auto wide = mle_fit(VolumeSample({1e-30, 1.0, 1e30}));
  EXPECT_LT(wide.params.beta, 0.05);
  EXPECT_EQ(wide.label, Classification::clustered);
}

TEST(MleFit, IsLocalArgmax) {
  const auto sample = sample_gamma({1.244, 0.37}, 20000, 9);
  const auto r = mle_fit(sample);
  const double best = log_likelihood(sample, r.params);
  for (double fm : {0.95, 1.0, 1.05}) {
    for (double fb : {0.95, 1.0, 1.05}) {
      EXPECT_GE(best, log_likelihood(sample, {r.params.mu * fm, r.params.beta * fb}));
    }
  }
  EXPECT_NEAR(r.log_likelihood, best, 1e-9 * std::abs(best));
}

TEST(Classification, Bands) {
  EXPECT_EQ(classify(0.370), Classification::clustered);
  EXPECT_EQ(classify(0.985), Classification::random);
  EXPECT_EQ(classify(1.019), Classification::random);
  EXPECT_EQ(classify(1.5), Classification::dispersed);
  EXPECT_EQ(to_string(Classification::dispersed), "dispersed");
}
