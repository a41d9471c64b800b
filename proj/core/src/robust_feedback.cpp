#include "anytime/robust_feedback.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anytime {

ProcessResult process(const DualVector& g, const Anchor& anchor, double threshold, Norm dual) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("process: threshold must be nonnegative");
  g.check_same_dim(anchor.g_tilde);
  if (dual_norm(g - anchor.g_tilde, dual) > threshold) return {anchor.g_tilde, true};
  return {g, false};
}

ThresholdSchedule ThresholdSchedule::smooth_theory(double eps_sigma, double smoothness, double c0, Norm primal) {
  if (!(eps_sigma >= 0.0) || !(smoothness >= 0.0) || !(c0 > 0.0)) {
    throw std::invalid_argument("smooth_theory: need eps_sigma >= 0, lambda >= 0, c0 > 0");
  }
  ThresholdSchedule s;
  s.kind_ = Kind::SmoothTheory;
  s.eps_sigma_ = eps_sigma;
  s.smoothness_ = smoothness;
  s.c0_ = c0;
  s.primal_ = primal;
  return s;
}

ThresholdSchedule ThresholdSchedule::heuristic(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("heuristic threshold must be positive");
  ThresholdSchedule s;
  s.kind_ = Kind::Heuristic;
  s.constant_ = c;
  return s;
}

ThresholdSchedule ThresholdSchedule::heuristic_for(std::size_t n_train, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("heuristic_for: delta must be in (0,1)");
  if (n_train == 0) throw std::invalid_argument("heuristic_for: empty training set");
  return heuristic(std::sqrt(static_cast<double>(n_train) / std::log(1.0 / delta)));
}

double ThresholdSchedule::at(const Vector& h_bar, const Anchor& anchor) const {
  if (kind_ == Kind::Heuristic) return constant_;
  return eps_sigma_ + smoothness_ * anytime::primal_norm(anchor.h_tilde - h_bar, primal_) + c0_;
}

double lemma2_min_horizon(double delta, double eps_sigma) {
  const double ceil_eps = std::ceil(eps_sigma);
  return std::log(1.0 / delta) * ceil_eps * ceil_eps;
}

double lemma2_c0(double smoothness, double diameter, double sigma, std::size_t horizon, double delta,
                 double eps_sigma) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("lemma2_c0: delta must be in (0,1)");
  if (!(smoothness >= 0.0) || !(diameter >= 0.0) || !(sigma >= 0.0) || !(eps_sigma >= 0.0)) {
    throw std::invalid_argument("lemma2_c0: parameters must be nonnegative");
  }
  if (horizon == 0) throw std::invalid_argument("lemma2_c0: horizon must be >= 1");
  const double min_t = lemma2_min_horizon(delta, eps_sigma);
  if (static_cast<double>(horizon) < min_t) {
    std::ostringstream msg;
    msg << "lemma2_c0: horizon T=" << horizon << " is below the minimum admissible T="
        << static_cast<std::size_t>(std::ceil(min_t)) << " (log(1/delta) * ceil(eps_sigma)^2)";
    throw std::invalid_argument(msg.str());
  }
  const double noise_branch = sigma * std::sqrt(static_cast<double>(horizon) / std::log(1.0 / delta));
  const double c0 = std::max(smoothness * diameter, noise_branch) + eps_sigma;
  if (!(c0 > 0.0)) throw std::invalid_argument("lemma2_c0: resulting c0 must be positive");
  return c0;
}

Anchor build_anchor(AnchorStrategy strategy, const Objective& obj, const Vector& h_tilde, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("build_anchor: delta must be in (0,1)");
  if (!obj.feasible_set().contains(h_tilde, 1e-9)) {
    throw std::invalid_argument("build_anchor: primal anchor must be feasible");
  }
  if (strategy == AnchorStrategy::Exact) return Anchor{h_tilde, obj.gradient(h_tilde), 0.0, delta};

  const auto* finite_sum = dynamic_cast<const FiniteSumObjective*>(&obj);
  if (finite_sum == nullptr) {
    throw std::invalid_argument("build_anchor: empirical anchors need a finite-sum objective");
  }
  const std::size_t n = finite_sum->example_count();
  if (n == 0) throw std::invalid_argument("build_anchor: empty dataset");
  // Mean of per-example gradients, accumulated in fixed-size chunks.
  constexpr std::size_t kChunk = 1024;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(obj.dim());
  std::vector<std::size_t> positions;
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t stop = std::min(n, start + kChunk);
    positions.resize(stop - start);
    for (std::size_t i = start; i < stop; ++i) positions[i - start] = i;
    sum += static_cast<double>(positions.size()) * finite_sum->batch_gradient(h_tilde, positions).coords();
  }
  return Anchor{h_tilde, DualVector(sum / static_cast<double>(n)), 0.0, delta};
}

}  // namespace anytime
