#include "anytime/learners.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace anytime;

namespace {

const FeasibleSet kUnitBall = FeasibleSet::l2_ball(Vector{0, 0}, 1.0);

// Brute-force argmin of (s/2)|h|^2 + <theta, h> over the unit ball by
// projected gradient descent.
Vector numeric_leader(double s, const DualVector& theta) {
  Vector h = Vector::zeros(theta.dim());
  for (int i = 0; i < 20000; ++i) {
    h = kUnitBall.project(Vector(h.coords() - 0.1 * (s * h.coords() + theta.coords())));
  }
  return h;
}

}  // namespace

TEST(Regularizers, Strengths) {
  const auto c = RegularizerSchedule::constant(2.0);
  EXPECT_EQ(c.strength(0), 0.0);
  EXPECT_EQ(c.strength(5), 2.0);
  const auto g = RegularizerSchedule::sqrt_growth(1.5);
  EXPECT_DOUBLE_EQ(g.strength(4), 3.0);
  const Vector center{0, 0};
  EXPECT_DOUBLE_EQ(g.psi(4, Vector{1, 1}, center), 3.0);
  EXPECT_DOUBLE_EQ(g.phi(0, Vector{1, 1}, center), g.psi(1, Vector{1, 1}, center));
  EXPECT_GE(g.phi(3, Vector{1, 1}, center), 0.0);
  EXPECT_THROW(RegularizerSchedule::constant(0.0), std::invalid_argument);
}

TEST(FtrlStep, Examples) {
  const auto regs = RegularizerSchedule::constant(1.0);
  EXPECT_EQ(ftrl_step(kUnitBall, regs, 1, DualVector{2, 0}), (Vector{-1, 0}));
  EXPECT_EQ(ftrl_step(kUnitBall, regs, 1, DualVector{0, 0}), (Vector{0, 0}));
  const auto strong = RegularizerSchedule::constant(4.0);
  const Vector h = ftrl_step(kUnitBall, strong, 1, DualVector{1, 0});
  EXPECT_NEAR(h[0], -0.25, 1e-15);
  EXPECT_NEAR(h[1], 0.0, 1e-15);
  const Vector numeric = numeric_leader(4.0, DualVector{1, 0});
  EXPECT_LE((h - numeric).norm(Norm::L2), 1e-8);
}

TEST(FtrlStep, LeaderMatchesNumericArgmin) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const DualVector theta{n(rng), n(rng)};
    EXPECT_LE((quadratic_leader(kUnitBall, 1.5, theta) - numeric_leader(1.5, theta)).norm(Norm::L2), 1e-8);
  }
}

TEST(SmdStep, EuclideanExample) {
  const auto step = smd_step(kUnitBall, MirrorMap::euclidean(), Vector{0, 0}, 1.0, DualVector{-4, 0});
  EXPECT_EQ(step.dual_point, (Vector{4, 0}));
  EXPECT_EQ(step.next, (Vector{1, 0}));
}

TEST(SmdStep, EntropyMultiplicativeWeights) {
  const auto simplex = FeasibleSet::simplex(2);
  const auto step =
      smd_step(simplex, MirrorMap::negative_entropy(), Vector{0.5, 0.5}, std::log(2.0), DualVector{1, 0});
  EXPECT_NEAR(step.next[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(step.next[1], 2.0 / 3.0, 1e-15);
}

TEST(SmdStep, EntropyMatchesProximalArgmin) {
  // argmin_h beta <g, h> + KL(h; h_t) over the 2-simplex, by grid search on h_0.
  const auto simplex = FeasibleSet::simplex(2);
  const auto map = MirrorMap::negative_entropy();
  const Vector h{0.3, 0.7};
  const DualVector g{0.4, -1.1};
  const double beta = 0.8;
  const Vector next = smd_step(simplex, map, h, beta, g).next;
  double best = 0.0;
  double best_val = 1e300;
  for (int i = 1; i < 200000; ++i) {
    const double x = i / 200000.0;
    const Vector cand{x, 1.0 - x};
    const double val = beta * pairing(g, cand) + map.bregman(cand, h);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  EXPECT_NEAR(next[0], best, 1e-5);
}

TEST(SmdStep, VanishingStep) {
  const Vector h{0.2, -0.4};
  EXPECT_EQ(smd_step(kUnitBall, MirrorMap::euclidean(), h, 0.0, DualVector{100, -3}).next, h);
}

TEST(SmdStep, EuclideanEqualsProjectedSgd) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Index d = 1 + static_cast<Index>(i % 6);
    const auto ball = FeasibleSet::l2_ball(Vector::zeros(d), u(rng));
    Eigen::VectorXd h(d), g(d);
    for (Index j = 0; j < d; ++j) {
      h[j] = n(rng);
      g[j] = n(rng);
    }
    const Vector hp = ball.project(Vector(h));
    const double beta = u(rng);
    const Vector expected = ball.project(Vector(hp.coords() - beta * g));
    const Vector got = smd_step(ball, MirrorMap::euclidean(), hp, beta, DualVector(g)).next;
    EXPECT_LE((got.coords() - expected.coords()).lpNorm<Eigen::Infinity>(), 1e-15);
  }
}

TEST(AoFtrlStep, ZeroHintIsFtrl) {
  const auto regs = RegularizerSchedule::sqrt_growth(1.0);
  const DualVector theta{0.3, -0.8};
  EXPECT_EQ(aoftrl_step(kUnitBall, regs, 3, 1.0, DualVector{0, 0}, theta), ftrl_step(kUnitBall, regs, 3, theta));
}

TEST(AoFtrlStep, HintOnly) {
  const auto regs = RegularizerSchedule::constant(1.0);
  EXPECT_EQ(aoftrl_step(kUnitBall, regs, 1, 1.0, DualVector{1, 0}, DualVector{0, 0}), (Vector{-1, 0}));
}

TEST(AoFtrlStep, PerfectHintBeatsPlainFtrl) {
  const std::vector<DualVector> losses{DualVector{1, 0}, DualVector{0.5, 1}, DualVector{-1, 0.5}};
  const auto regs = RegularizerSchedule::constant(1.0);
  double plain = 0.0;
  double optimistic = 0.0;
  DualVector theta = DualVector::zeros(2);
  Vector h_plain = kUnitBall.center();
  Vector h_opt = aoftrl_step(kUnitBall, regs, 0, 1.0, losses[0], theta);
  for (std::size_t t = 0; t < losses.size(); ++t) {
    plain += pairing(losses[t], h_plain);
    optimistic += pairing(losses[t], h_opt);
    theta += losses[t];
    h_plain = ftrl_step(kUnitBall, regs, t + 1, theta);
    const DualVector hint = t + 1 < losses.size() ? losses[t + 1] : DualVector::zeros(2);
    h_opt = aoftrl_step(kUnitBall, regs, t + 1, 1.0, hint, theta);
  }
  EXPECT_LE(optimistic, plain);
}

TEST(Learners, FtrlLearnerAccumulatesWeightedGradients) {
  FtrlLearner learner(kUnitBall, RegularizerSchedule::constant(4.0));
  EXPECT_EQ(learner.current(), (Vector{0, 0}));
  learner.update(DualVector{0.5, 0}, StepContext{1, 2.0, 1.0});
  EXPECT_EQ(learner.accumulated(), (DualVector{1, 0}));
  EXPECT_NEAR(learner.current()[0], -0.25, 1e-15);
}

TEST(Learners, AoFtrlHintIsLatestGradient) {
  AoFtrlLearner learner(kUnitBall, RegularizerSchedule::constant(1.0));
  EXPECT_EQ(learner.hint(), DualVector::zeros(2));
  learner.update(DualVector{0.2, 0.1}, StepContext{1, 1.0, 1.0});
  EXPECT_EQ(learner.hint(), (DualVector{0.2, 0.1}));
  EXPECT_EQ(learner.current(), (Vector{-0.4, -0.2}));
}

TEST(Learners, MirrorDescentUsesScheduledStep) {
  MirrorDescentLearner learner(kUnitBall, MirrorMap::euclidean(), StepSchedule::sequence({0.5, 0.25}), Vector{0, 0});
  learner.update(DualVector{-1, 0}, StepContext{1, 1.0, 1.0});
  EXPECT_EQ(learner.current(), (Vector{0.5, 0}));
  learner.update(DualVector{-1, 0}, StepContext{2, 1.0, 1.0});
  EXPECT_EQ(learner.current(), (Vector{0.75, 0}));
  EXPECT_EQ(learner.step_size(2), 0.25);
}

TEST(Weights, ConstantAndAoFtrl) {
  EXPECT_EQ(constant_weights(5), (std::vector<double>{1, 1, 1, 1, 1}));
  const auto w = aoftrl_weights(3, 1.0, RegularizerSchedule::constant(1.0));
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 1.0);
  EXPECT_DOUBLE_EQ(w[2], std::sqrt(2.0));
}

TEST(Weights, MirrorDescentScheduleValidation) {
  const std::vector<double> alpha{1, 1, 1};
  EXPECT_NO_THROW(validate_mirror_descent_schedule(alpha, std::vector<double>{1, 1, 1}, 1.0, 1.0));
  EXPECT_THROW(validate_mirror_descent_schedule(alpha, std::vector<double>{2, 2, 2}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(validate_mirror_descent_schedule(alpha, std::vector<double>{0.5, 1.0, 1.0}, 1.0, 1.0),
               std::invalid_argument);
}
