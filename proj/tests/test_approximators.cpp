#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "beliefapprox/approximators.hpp"
#include "beliefapprox/simplex_search.hpp"

using namespace beliefapprox;

namespace {

// scipy Nelder-Mead on adaptive quadrature, tolerance 1e-10.
constexpr double kInferMean = 2.984305987097165;
constexpr double kInferVariance = 1.0472831915752845;
constexpr double kInferValue = 0.6887689958549637;
constexpr double kKlBimodalVsInferFit = 7.8600529041392502;

const Density kBimodal = Mixture1D({0.5, 0.5}, {Gaussian1D(-3.0, 1.0), Gaussian1D(3.0, 1.0)});

FitReport infer_from(double mu) {
  FitOptions o;
  o.init = std::vector<double>{mu, 1.0};
  return fit(kBimodal, ParametricFamily::gaussian(), FitDirection::inference_kl, o);
}

} // namespace

TEST(SimplexSearch, Rosenbrock) {
  auto rosen = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  SimplexSearchOptions opts;
  opts.max_iterations = 5000;
  const auto r = simplex_search(rosen, {-1.2, 1.0}, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.best[0], 1.0, 1e-6);
  EXPECT_NEAR(r.best[1], 1.0, 1e-6);
}

TEST(SimplexSearch, ReportsNonConvergenceWithBestPoint) {
  SimplexSearchOptions opts;
  opts.max_iterations = 5;
  const auto r = simplex_search([](const std::vector<double>& x) { return x[0] * x[0]; }, {3.0}, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
  EXPECT_LT(r.value, 9.0);
}

TEST(SimplexSearch, NanIsTreatedAsWorst) {
  auto f = [](const std::vector<double>& x) {
    return x[0] < 0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 1.0) * (x[0] - 1.0);
  };
  const auto r = simplex_search(f, {0.5});
  EXPECT_NEAR(r.best[0], 1.0, 1e-7);
}

TEST(Family, GaussianParametersRoundTrip) {
  const auto fam = ParametricFamily::gaussian();
  const auto theta = fam.to_unconstrained(std::vector<double>{1.5, 4.0});
  EXPECT_NEAR(theta[1], std::log(4.0), 1e-16);
  const auto nat = fam.to_natural(theta);
  EXPECT_NEAR(nat[1], 4.0, 1e-15);
  EXPECT_THROW(fam.to_unconstrained(std::vector<double>{0.0, -1.0}), ValidationError);
  EXPECT_DOUBLE_EQ(fam.to_natural(std::vector<double>{0.0, -100.0})[1], kVarianceFloor);
}

TEST(Family, SoftmaxPinsTheLastScore) {
  const auto fam = ParametricFamily::categorical(3);
  EXPECT_EQ(fam.dimension(), 2u);
  const auto p = fam.to_natural(std::vector<double>{0.0, 0.0});
  for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-16);
}

TEST(MomentMatch, BimodalTarget) {
  const auto g = moment_match_gaussian(kBimodal);
  EXPECT_NEAR(g.mean(), 0.0, 1e-15);
  EXPECT_NEAR(g.variance(), 10.0, 1e-14);
}

TEST(Fit, ApproximationDirectionMatchesMoments) {
  const auto r = fit(kBimodal, ParametricFamily::gaussian(), FitDirection::approximation_kl);
  const auto& q = std::get<Gaussian1D>(r.fitted);
  EXPECT_NEAR(q.mean(), 0.0, 1e-6);
  EXPECT_NEAR(q.variance(), 10.0, 1e-5);
  EXPECT_EQ(r.multistart_results.size(), 8u);
  EXPECT_TRUE(r.converged);
}

TEST(Fit, InferenceDirectionLocksOntoOneMode) {
  const auto plus = infer_from(2.0);
  const auto& q = std::get<Gaussian1D>(plus.fitted);
  EXPECT_NEAR(q.mean(), kInferMean, 1e-6);
  EXPECT_NEAR(q.variance(), kInferVariance, 1e-6);
  EXPECT_NEAR(plus.divergence_value, kInferValue, 1e-9);
  EXPECT_NEAR(kl(kBimodal, plus.fitted), kKlBimodalVsInferFit, 1e-5);

  const auto minus = infer_from(-2.0);
  const auto& m = std::get<Gaussian1D>(minus.fitted);
  EXPECT_NEAR(m.mean(), -kInferMean, 1e-6);
  EXPECT_NEAR(m.variance(), kInferVariance, 1e-6);
}

TEST(Fit, CategoricalFamilyRecoversTheTarget) {
  const Density p = Categorical({0.1, 0.2, 0.7}, {"a", "b", "c"});
  for (auto dir : {FitDirection::approximation_kl, FitDirection::inference_kl}) {
    const auto r = fit(p, ParametricFamily::categorical(3), dir);
    const auto& q = std::get<Categorical>(r.fitted);
    EXPECT_NEAR(q[2], 0.7, 1e-6);
    EXPECT_EQ(q.labels()[0], "a");
    EXPECT_LT(r.divergence_value, 1e-10);
  }
}

TEST(Fit, InferenceAgainstZeroProbabilityOutcomeIsNumericalFailure) {
  const Density p = Categorical({0.0, 1.0});
  EXPECT_THROW(fit(p, ParametricFamily::categorical(2), FitDirection::inference_kl), NumericalError);
}

TEST(Fit, CategoricalFamilyNeedsMatchingTarget) {
  EXPECT_THROW(fit(kBimodal, ParametricFamily::categorical(2), FitDirection::approximation_kl), ValidationError);
  EXPECT_THROW(fit(Categorical({0.5, 0.5}), ParametricFamily::categorical(3), FitDirection::approximation_kl),
               ValidationError);
}

TEST(Figure1, TableAndOrdering) {
  const auto r = figure1_demo();
  ASSERT_EQ(r.table.size(), 401u);
  for (std::size_t i = 1; i < r.table.size(); ++i) ASSERT_LT(r.table[i - 1].s, r.table[i].s);
  EXPECT_LT(r.kl_p_approx, r.kl_p_infer);
  EXPECT_GT(std::get<Gaussian1D>(r.approximation.fitted).variance(),
            std::get<Gaussian1D>(r.inference_plus.fitted).variance());
  EXPECT_NEAR(std::get<Gaussian1D>(r.inference_minus.fitted).mean(),
              -std::get<Gaussian1D>(r.inference_plus.fitted).mean(), 1e-6);
}
