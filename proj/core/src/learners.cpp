#include "anytime/learners.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace anytime {

RegularizerSchedule RegularizerSchedule::constant(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("regularizer strength must be positive");
  return RegularizerSchedule(Kind::Constant, s);
}

RegularizerSchedule RegularizerSchedule::sqrt_growth(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("regularizer strength must be positive");
  return RegularizerSchedule(Kind::SqrtGrowth, s);
}

double RegularizerSchedule::strength(std::size_t t) const {
  if (t == 0) return 0.0;
  if (kind_ == Kind::Constant) return base_;
  return base_ * std::sqrt(static_cast<double>(t));
}

double RegularizerSchedule::psi(std::size_t t, const Vector& h, const Vector& center) const {
  return 0.5 * strength(t) * (h.coords() - center.coords()).squaredNorm();
}

double RegularizerSchedule::phi(std::size_t t, const Vector& h, const Vector& center) const {
  return 0.5 * (strength(t + 1) - strength(t)) * (h.coords() - center.coords()).squaredNorm();
}

StepSchedule StepSchedule::constant(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("step size must be positive");
  StepSchedule s;
  s.constant_ = beta;
  return s;
}

StepSchedule StepSchedule::sequence(std::vector<double> betas) {
  if (betas.empty()) throw std::invalid_argument("step sequence must be nonempty");
  for (double b : betas) {
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("step sizes must be positive");
  }
  StepSchedule s;
  s.values_ = std::move(betas);
  return s;
}

double StepSchedule::at(std::size_t t) const {
  if (values_.empty()) return constant_;
  if (t == 0 || t > values_.size()) throw std::out_of_range("step schedule index out of range");
  return values_[t - 1];
}

// ---------------------------------------------------------------------------

Vector quadratic_leader(const FeasibleSet& set, double strength, const DualVector& theta) {
  if (!(strength > 0.0)) throw std::invalid_argument("quadratic_leader: strength must be positive");
  return set.project(Vector(set.center().coords() - theta.coords() / strength));
}

Vector ftrl_step(const FeasibleSet& set, const RegularizerSchedule& regs, std::size_t t,
                 const DualVector& accumulated) {
  return quadratic_leader(set, regs.strength(t + 1), accumulated);
}

Vector aoftrl_step(const FeasibleSet& set, const RegularizerSchedule& regs, std::size_t t, double alpha_next,
                   const DualVector& hint, const DualVector& accumulated) {
  return quadratic_leader(set, regs.strength(t + 1), accumulated + alpha_next * hint);
}

SmdStep smd_step(const FeasibleSet& set, const MirrorMap& map, const Vector& h, double beta, const DualVector& g) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("smd_step: beta must be nonnegative");
  if (h.dim() != g.dim()) throw std::invalid_argument("smd_step: dimension mismatch");
  if (map.kind() == MirrorMap::Kind::Euclidean) {
    Vector dual_point(h.coords() - beta * g.coords());
    Vector next = set.project(dual_point);
    return {std::move(dual_point), std::move(next)};
  }
  if (set.kind() != FeasibleSet::Kind::Simplex) {
    throw std::invalid_argument("smd_step: entropy map requires the simplex");
  }
  if (h.coords().minCoeff() <= 0.0) throw DomainError("smd_step: entropy iterate on the boundary");
  // log h' = log h - beta g; the Bregman projection onto the simplex normalizes.
  const Eigen::ArrayXd log_dual = h.coords().array().log() - beta * g.coords().array();
  Vector dual_point(log_dual.exp().matrix());
  const double top = log_dual.maxCoeff();
  Eigen::ArrayXd p = (log_dual - top).exp();
  p /= p.sum();
  p = p.max(MirrorMap::kEntropyFloor);
  p /= p.sum();
  return {std::move(dual_point), Vector(p.matrix())};
}

// ---------------------------------------------------------------------------

FtrlLearner::FtrlLearner(FeasibleSet set, RegularizerSchedule regs)
    : set_(std::move(set)),
      regs_(regs),
      h_(quadratic_leader(set_, regs_.strength(1), DualVector::zeros(set_.dim()))),
      theta_(DualVector::zeros(set_.dim())) {}

void FtrlLearner::update(const DualVector& g_bar, const StepContext& ctx) {
  theta_ += ctx.alpha * g_bar;
  h_ = ftrl_step(set_, regs_, ctx.t, theta_);
}

MirrorDescentLearner::MirrorDescentLearner(FeasibleSet set, MirrorMap map, StepSchedule steps, Vector h1)
    : set_(std::move(set)), map_(map), steps_(std::move(steps)), h_(std::move(h1)) {
  if (!set_.contains(h_, 1e-9)) throw std::invalid_argument("mirror descent: h1 must be feasible");
  if (map_.kind() == MirrorMap::Kind::NegativeEntropy) {
    if (set_.kind() != FeasibleSet::Kind::Simplex) {
      throw std::invalid_argument("mirror descent: entropy map requires the simplex");
    }
    h_ = map_.project(set_, h_);
  }
}

void MirrorDescentLearner::update(const DualVector& g_bar, const StepContext& ctx) {
  SmdStep step = smd_step(set_, map_, h_, steps_.at(ctx.t), g_bar);
  dual_point_ = std::move(step.dual_point);
  h_ = std::move(step.next);
}

AoFtrlLearner::AoFtrlLearner(FeasibleSet set, RegularizerSchedule regs)
    : set_(std::move(set)),
      regs_(regs),
      h_(quadratic_leader(set_, regs_.strength(1), DualVector::zeros(set_.dim()))),
      theta_(DualVector::zeros(set_.dim())),
      hint_(DualVector::zeros(set_.dim())) {}

void AoFtrlLearner::update(const DualVector& g_bar, const StepContext& ctx) {
  theta_ += ctx.alpha * g_bar;
  hint_ = g_bar;
  h_ = aoftrl_step(set_, regs_, ctx.t, ctx.alpha_next, hint_, theta_);
}

// ---------------------------------------------------------------------------

std::vector<double> constant_weights(std::size_t horizon) { return std::vector<double>(horizon, 1.0); }

std::vector<double> aoftrl_weights(std::size_t horizon, double smoothness, const RegularizerSchedule& regs) {
  if (!(smoothness > 0.0)) throw std::invalid_argument("aoftrl_weights: smoothness must be positive");
  std::vector<double> alpha;
  alpha.reserve(horizon);
  double running = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double a = (t == 1) ? 1.0 : std::sqrt(regs.strength(t) / smoothness * running);
    alpha.push_back(a);
    running += a;
  }
  return alpha;
}

void validate_mirror_descent_schedule(std::span<const double> weights, std::span<const double> steps,
                                      double strong_convexity, double smoothness) {
  if (weights.size() != steps.size()) {
    throw std::invalid_argument("schedule check: weights and steps must have equal length");
  }
  const double cap = smoothness > 0.0 ? strong_convexity / smoothness : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(weights[i] > 0.0) || !(steps[i] > 0.0)) {
      throw std::invalid_argument("schedule check: weights and steps must be positive");
    }
    if (steps[i] > cap * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "schedule check: beta_" << i + 1 << " = " << steps[i] << " exceeds s/lambda = " << cap;
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && weights[i] / weights[i - 1] < (steps[i] / steps[i - 1]) * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "schedule check: alpha_t/alpha_{t-1} < beta_t/beta_{t-1} at t = " << i + 1;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace anytime
