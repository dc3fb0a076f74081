#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "beliefapprox/axiom_lab.hpp"
#include "beliefapprox/verification_suites.hpp"

using namespace beliefapprox;

TEST(Properness, LogLossArgminSitsOnTheTarget) {
  const Categorical p({0.3, 0.2, 0.5});
  const auto r = check_properness(losses::log_loss(), p, ReferenceMeasure::counting(), 100);
  EXPECT_TRUE(r.is_proper_at_resolution);
  EXPECT_LT(r.distance_to_p, 1e-12);
  EXPECT_LT(*r.lagrange_residual, 1e-6);
}

TEST(Properness, LinearLossJumpsToAVertex) {
  const auto r = check_properness(losses::linear_score(), Categorical({0.3, 0.7}), ReferenceMeasure::counting(), 200);
  EXPECT_FALSE(r.is_proper_at_resolution);
  EXPECT_DOUBLE_EQ(r.argmin_q[1], 1.0);
  EXPECT_FALSE(r.lagrange_residual.has_value());
}

TEST(Properness, SquareLossIsProperForTwoOutcomesOnlyUnderUniformMeasure) {
  // With K = 2 and m = 1, (1 - x)^2 summed over outcomes is the Brier score.
  const LocalLoss brier_like{"(1-x)^2", [](double x) { return (1.0 - x) * (1.0 - x); }};
  const Categorical p({0.3, 0.7});
  EXPECT_TRUE(check_properness(brier_like, p, ReferenceMeasure::counting(), 200).is_proper_at_resolution);
  EXPECT_FALSE(
      check_properness(brier_like, p, ReferenceMeasure::from_values({0.4, 2.5}), 200).is_proper_at_resolution);
}

TEST(Properness, ValidatesInputs) {
  EXPECT_THROW(check_properness(losses::log_loss(), Categorical({0.5, 0.5}), ReferenceMeasure::counting(), 5),
               ValidationError);
  EXPECT_THROW(check_properness(losses::log_loss(), Categorical({1.0, 0.0}), ReferenceMeasure::counting(), 50),
               ValidationError);
  EXPECT_THROW(
      check_properness(losses::log_loss(), Categorical({0.2, 0.2, 0.2, 0.2, 0.2}), ReferenceMeasure::counting(), 50),
      ValidationError);
}

TEST(Locality, LogScoreIsLocalBrierIsNot) {
  EXPECT_TRUE(check_locality(losses::log_score(), 4, 100, 7).is_local);
  const auto b = check_locality(losses::brier_score(), 4, 100, 7);
  ASSERT_FALSE(b.is_local);
  ASSERT_TRUE(b.witness.has_value());
  EXPECT_EQ(b.witness->q[b.witness->observed], b.witness->perturbed_q[b.witness->observed]);
  EXPECT_NE(b.witness->loss_before, b.witness->loss_after);
}

TEST(Locality, SameSeedSameVerdict) {
  const auto a = check_locality(losses::brier_score(), 3, 50, 11);
  const auto b = check_locality(losses::brier_score(), 3, 50, 11);
  EXPECT_EQ(a.witness->q, b.witness->q);
}

TEST(LossShape, RecoversLogFamilyConstants) {
  const auto r = check_loss_shape(losses::scaled_log(2.0, 5.0), 1e-3, 1e3, 64);
  EXPECT_TRUE(r.in_log_family);
  EXPECT_TRUE(r.c_positive);
  EXPECT_NEAR(r.fitted_c, 2.0, 1e-6);
  EXPECT_NEAR(r.fitted_d, 5.0, 1e-6);
}

TEST(LossShape, FlagsNonLogLosses) {
  for (const auto& loss : {losses::linear(), losses::square(), losses::negative_sqrt(), losses::reciprocal()})
    EXPECT_FALSE(check_loss_shape(loss, 1e-3, 1e3, 64).in_log_family) << loss.name;
}

TEST(LossShape, NegatedLogIsInTheFamilyWithNegativeConstant) {
  const LocalLoss up{"ln x", [](double x) { return std::log(x); }};
  const auto r = check_loss_shape(up, 1e-2, 1e2, 32);
  EXPECT_TRUE(r.in_log_family);
  EXPECT_FALSE(r.c_positive);
  EXPECT_NEAR(r.fitted_c, -1.0, 1e-9);
}

TEST(Splitting, InvariantForRatiosNotForRawDensities) {
  const Categorical p({0.5, 0.5});
  const Categorical q({0.25, 0.75});
  const auto m = ReferenceMeasure::counting();
  EXPECT_TRUE(check_splitting_invariance(p, q, m, losses::log_loss(), 1, 0.4, 0.7).invariant);
  EXPECT_FALSE(
      check_splitting_invariance(p, q, m, losses::log_loss(), 1, 0.4, 0.7, LossArgument::raw_density).invariant);
}

TEST(ReferenceEqualsBelief, LossReducesToKlForCategoricalAndGaussianPairs) {
  const auto c = verify_criterion3(Categorical({0.5, 0.5}), Categorical({0.25, 0.75}));
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.kl_pq, 0.14384103622589045, 1e-16);
  EXPECT_EQ(c.self_loss, 0.0);
  const auto g = verify_criterion3(Gaussian1D(0.0, 1.0), Gaussian1D(1.0, 2.0));
  EXPECT_TRUE(g.holds);
  EXPECT_NEAR(g.kl_pq, *g.kl_closed_form, 1e-9);
}

TEST(Zoo, SixMembersTwoWithKnownConstants) {
  const auto zoo = loss_zoo();
  ASSERT_EQ(zoo.size(), 6u);
  EXPECT_EQ(std::count_if(zoo.begin(), zoo.end(), [](const ZooMember& m) { return m.known_c.has_value(); }), 2);
}

TEST(Suites, EverySuitePassesAndRunsAreRepeatable) {
  const auto first = run_suites("all");
  ASSERT_EQ(first.size(), 5u);
  for (const auto& s : first) {
    EXPECT_TRUE(s.passed) << s.suite;
    for (const auto& c : s.checks) EXPECT_TRUE(c.passed) << s.suite << ": " << c.name << " " << c.detail;
  }
  const auto again = run_suite("properness");
  EXPECT_EQ(again.checks.front().detail, first.front().checks.front().detail);
  EXPECT_THROW(run_suite("bogus"), ValidationError);
}
