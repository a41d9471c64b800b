#include "anytime/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace anytime;

namespace {

const double kInvE = std::exp(-1.0);

}  // namespace

TEST(QDelta, Examples) {
  EXPECT_NEAR(q_delta(BoundInputs::constant(1, 1, 0, kInvE, 4)), 12.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(q_delta(BoundInputs::constant(1, 0, 1, 0.05, 10)), 0.0);
}

TEST(QDelta, ConstantWeightsClosedForm) {
  for (std::size_t T : {1u, 7u, 100u, 2500u}) {
    const auto in = BoundInputs::constant(2.0, 0.3, 1.0, 0.05, T);
    const double expected = 4.0 * 2.0 * 0.3 * std::sqrt(2.0 * std::log(20.0)) * (std::sqrt(double(T)) + 1.0);
    EXPECT_NEAR(q_delta(in), expected, 1e-12 * expected);
    EXPECT_LE(q_delta(in), 8.0 * 2.0 * 0.3 * std::sqrt(2.0 * double(T) * std::log(20.0)) * (1 + 1e-12));
  }
}

TEST(RDelta, Examples) {
  EXPECT_NEAR(r_delta(BoundInputs::constant(1, 0, 1, kInvE, 4)), 4.0 + 4.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r_delta(BoundInputs::constant(1, 0, 1, 1.0 - 1e-15, 4)), 0.0, 1e-13);
  for (std::size_t T : {1u, 9u, 400u}) {
    const auto in = BoundInputs::constant(1.5, 0.0, 2.0, 0.05, T);
    const double expected = 4.0 * 2.0 * 2.25 * std::log(20.0) * (1.0 + std::sqrt(2.0));
    EXPECT_NEAR(r_delta(in), expected, 1e-12 * expected);
    EXPECT_LE(r_delta(in), 12.0 * 2.0 * 2.25 * std::log(20.0));
  }
}

TEST(Bounds, MonotoneInScaleParameters) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_real_distribution<double> d(0.01, 0.5);
  for (int i = 0; i < 200; ++i) {
    auto in = BoundInputs::constant(u(rng), u(rng), u(rng), d(rng), 50);
    const double q0 = q_delta(in);
    const double r0 = r_delta(in);
    auto bigger = in;
    bigger.diameter *= 1.5;
    bigger.sigma *= 1.2;
    bigger.smoothness *= 1.3;
    bigger.delta *= 0.5;
    EXPECT_GE(q_delta(bigger), q0);
    EXPECT_GE(r_delta(bigger), r0);
  }
}

TEST(Bounds, InvalidInputs) {
  EXPECT_THROW(q_delta(BoundInputs::constant(1, 1, 1, 0.0, 4)), std::invalid_argument);
  EXPECT_THROW(q_delta(BoundInputs::constant(1, 1, 1, 0.5, 0)), std::invalid_argument);
  auto in = BoundInputs::constant(1, 1, 1, 0.5, 4);
  in.weights.pop_back();
  EXPECT_THROW(r_delta(in), std::invalid_argument);
}

TEST(SgdBound, Example) {
  const double bound = sgd_excess_bound(BoundInputs::constant(1, 1, 1, 0.05, 100, 1.0));
  const double l = std::log(20.0);
  EXPECT_NEAR(bound, 0.02 + std::max(8.0 * std::sqrt(2.0 * l / 100.0), 12.0 * l / 100.0), 1e-12);
  EXPECT_NEAR(bound, 1.978, 1e-3);
}

TEST(SgdBound, NoiselessUsesCurvatureBranch) {
  const double bound = sgd_excess_bound(BoundInputs::constant(2, 0, 1, 0.05, 50, 0.5));
  EXPECT_NEAR(bound, 8.0 / 25.0 + 12.0 * 4.0 * std::log(20.0) / 50.0, 1e-12);
}

TEST(SgdBound, VanishesWithHorizon) {
  double prev = 1e300;
  for (std::size_t T : {10u, 1000u, 100000u, 10000000u}) {
    const double b = sgd_excess_bound(BoundInputs::constant(1, 1, 1, 0.05, T, 1.0));
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(SgdBound, HypothesisViolationsNamed) {
  try {
    sgd_excess_bound(BoundInputs::constant(1, 1, 2, 0.05, 10, 1.0));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1/lambda"), std::string::npos);
  }
  auto in = BoundInputs::constant(1, 1, 1, 0.05, 3, 1.0);
  in.weights = {1, 2, 1};
  try {
    sgd_excess_bound(in);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("alpha_t = 1"), std::string::npos);
  }
}

TEST(SmdBound, ReducesForConstantSchedules) {
  auto in = BoundInputs::constant(1.0, 0.5, 1.0, 0.05, 100, 1.0);
  const double expected = (2.0 * 1.0 + std::max(q_delta(in), r_delta(in))) / 100.0;
  EXPECT_NEAR(smd_excess_bound(in), expected, 1e-14);
  in.bregman_diameter = 0.0;
  EXPECT_NEAR(smd_excess_bound(in), std::max(q_delta(in), r_delta(in)) / 100.0, 1e-14);
  EXPECT_DOUBLE_EQ(sgd_bregman_diameter(3.0), 18.0);
}

TEST(SmdBound, ScheduleViolation) {
  auto in = BoundInputs::constant(1.0, 0.5, 1.0, 0.05, 3, 1.0);
  in.steps = {0.5, 1.0, 1.0};
  EXPECT_THROW(smd_excess_bound(in), std::invalid_argument);
}

TEST(Bernstein, Examples) {
  EXPECT_NEAR(bernstein_deviation({1, 2, 3}), 2.0 + std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(bernstein_deviation({1.5, 2, 0}), std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(bernstein_deviation({0, 2, 3}), 0.0);
  EXPECT_THROW(bernstein_deviation({-1, 2, 3}), std::invalid_argument);
}
