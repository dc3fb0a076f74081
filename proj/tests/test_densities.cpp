#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "beliefapprox/densities.hpp"
#include "beliefapprox/quadrature.hpp"

using namespace beliefapprox;

namespace {

// Reference values frozen from mpmath at 30 digits.
constexpr double kPhi3 = 0.004431848411938008;
constexpr double kTwoSidedTail1 = 0.3173105078629141;
constexpr double kBimodalCdfAt1 = 0.51135923035317304;

Mixture1D bimodal() { return Mixture1D({0.5, 0.5}, {Gaussian1D(-3.0, 1.0), Gaussian1D(3.0, 1.0)}); }

} // namespace

TEST(Quadrature, SimpsonIsExactForCubicsOnEvenAndOddIntervalCounts) {
  for (std::size_t n : {3u, 4u, 5u, 8u, 11u}) {
    const auto xs = linspace(-1.0, 2.0, n);
    const auto w = quadrature_weights(xs, IntegrationRule::simpson);
    std::vector<double> f;
    for (double x : xs) f.push_back(x * x * x - 2.0 * x + 1.0);
    // antiderivative x^4/4 - x^2 + x on [-1, 2]
    EXPECT_NEAR(integrate(w, f), 3.75, 1e-13) << "n = " << n;
  }
}

TEST(Quadrature, TrapezoidHandlesNonUniformGrids) {
  const std::vector<double> xs{0.0, 0.1, 0.5, 1.7, 2.0};
  const auto w = quadrature_weights(xs, IntegrationRule::trapezoid);
  std::vector<double> f;
  for (double x : xs) f.push_back(3.0 * x + 1.0);
  EXPECT_NEAR(integrate(w, f), 8.0, 1e-14);
  EXPECT_THROW(quadrature_weights(xs, IntegrationRule::simpson), ValidationError);
}

TEST(Categorical, RejectsUnnormalizedOrNegativeWeights) {
  EXPECT_THROW(Categorical({0.5, 0.6}), ValidationError);
  EXPECT_THROW(Categorical({1.5, -0.5}), ValidationError);
  EXPECT_NO_THROW(Categorical({0.25, 0.75}));
  EXPECT_THROW(Categorical({0.5, 0.5}, {"a"}), ValidationError);
}

TEST(Categorical, NumericLabelsGiveASupport) {
  const Categorical c({0.2, 0.8}, {"-1", "2.5"});
  ASSERT_TRUE(c.numeric_support().has_value());
  EXPECT_DOUBLE_EQ((*c.numeric_support())[1], 2.5);
  EXPECT_FALSE(Categorical({0.5, 0.5}, {"heads", "tails"}).numeric_support().has_value());
}

TEST(Gaussian, PdfAndTailsMatchReferenceValues) {
  const Gaussian1D g(0.0, 1.0);
  EXPECT_NEAR(g.pdf(3.0), kPhi3, 1e-17);
  EXPECT_NEAR(g.cdf(-1.0) + g.survival(1.0), kTwoSidedTail1, 1e-15);
  EXPECT_NEAR(g.log_pdf(40.0), -800.0 - 0.5 * std::log(2.0 * std::numbers::pi), 1e-10);
  EXPECT_THROW(Gaussian1D(0.0, 0.0), ValidationError);
}

TEST(Mixture, SymmetricBimodalValues) {
  const auto m = bimodal();
  EXPECT_NEAR(m.pdf(0.0), kPhi3, 1e-17);
  EXPECT_NEAR(m.cdf(1.0), kBimodalCdfAt1, 1e-15);
  const auto mo = moments(m);
  EXPECT_NEAR(mo.mean, 0.0, 1e-15);
  EXPECT_NEAR(mo.variance, 10.0, 1e-14);
  EXPECT_TRUE(std::isfinite(m.log_pdf(-60.0)));
}

TEST(GridDensity, NormalizesAndInterpolates) {
  const auto xs = linspace(0.0, 2.0, 5);
  const GridDensity g(xs, {1.0, 1.0, 1.0, 1.0, 1.0});
  EXPECT_NEAR(g.raw_integral(), 2.0, 1e-15);
  EXPECT_NEAR(g.pdf(0.3), 0.5, 1e-15);
  EXPECT_EQ(g.pdf(2.5), 0.0);
  EXPECT_NEAR(g.cdf(1.0), 0.5, 1e-15);
  EXPECT_THROW(GridDensity({0.0, 1.0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(GridDensity({0.0, 2.0, 1.0}, {1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(GridDensity(xs, {0.0, 0.0, 0.0, 0.0, 0.0}), ValidationError);
}

TEST(GridDensity, DiscretizedGaussianKeepsItsMoments) {
  const Density g = Gaussian1D(1.5, 2.0);
  const auto grid = discretize(g, default_window(g));
  const auto mo = moments(Density(grid));
  EXPECT_NEAR(mo.mean, 1.5, 1e-10);
  EXPECT_NEAR(mo.variance, 2.0, 1e-9);
}

TEST(Discretize, RefusesWindowsThatDropMass) {
  const Density g = Gaussian1D(0.0, 1.0);
  EXPECT_NEAR(truncated_mass(g, -1.0, 1.0), kTwoSidedTail1, 1e-15);
  EXPECT_THROW(discretize(g, -1.0, 1.0, 101), ValidationError);
  EXPECT_THROW(discretize(g, 1.0, -1.0, 101), ValidationError);
}

TEST(Pushforward, GaussianAndMixtureTransformInClosedForm) {
  const AffineMap u(-2.0, 1.0);
  const auto g = std::get<Gaussian1D>(pushforward_affine(Gaussian1D(3.0, 0.5), u));
  EXPECT_DOUBLE_EQ(g.mean(), -5.0);
  EXPECT_DOUBLE_EQ(g.variance(), 2.0);
  const Density m = pushforward_affine(bimodal(), u);
  for (double y : {-7.0, 0.0, 2.5}) EXPECT_NEAR(pdf(m, y), bimodal().pdf((y - 1.0) / -2.0) / 2.0, 1e-16);
}

TEST(Pushforward, GridWithNegativeScaleStaysIncreasing) {
  const Density g = discretize(Gaussian1D(0.0, 1.0), -9.0, 9.0, 1001);
  const auto h = std::get<GridDensity>(pushforward_affine(g, AffineMap(-0.5, 2.0)));
  EXPECT_LT(h.grid().front(), h.grid().back());
  EXPECT_NEAR(h.pdf(2.0), 2.0 * std::get<GridDensity>(g).pdf(0.0), 1e-12);
}

TEST(SplitEvent, SplitsWeightAndKeepsLabels) {
  const Categorical c({0.4, 0.6}, {"x", "y"});
  const auto s = split_event(c, 1, 0.25);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[1], 0.15, 1e-16);
  EXPECT_NEAR(s[2], 0.45, 1e-16);
  EXPECT_EQ(s.labels()[2], "y/b");
  EXPECT_THROW(split_event(c, 2, 0.5), ValidationError);
  EXPECT_THROW(split_event(c, 0, 1.0), ValidationError);
}

TEST(Pdf, CategoricalNeedsAnIntegerIndex) {
  const Density c = Categorical({0.3, 0.7});
  EXPECT_DOUBLE_EQ(pdf(c, 1.0), 0.7);
  EXPECT_THROW(pdf(c, 0.5), ValidationError);
  EXPECT_THROW(cdf(c, 0.0), ValidationError);
}
