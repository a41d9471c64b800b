#include "anytime/bounds.hpp"

#include "anytime/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anytime {

BoundInputs BoundInputs::constant(double diameter, double sigma, double smoothness, double delta,
                                  std::size_t horizon, double step) {
  BoundInputs in;
  in.diameter = diameter;
  in.sigma = sigma;
  in.smoothness = smoothness;
  in.delta = delta;
  in.horizon = horizon;
  in.weights.assign(horizon, 1.0);
  if (step > 0.0) in.steps.assign(horizon, step);
  in.bregman_diameter = sgd_bregman_diameter(diameter);
  return in;
}

void BoundInputs::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bounds: delta must be in (0,1)");
  if (!(diameter >= 0.0) || !(sigma >= 0.0) || !(smoothness >= 0.0) || !(bregman_diameter >= 0.0)) {
    throw std::invalid_argument("bounds: scale parameters must be nonnegative");
  }
  if (horizon == 0) throw std::invalid_argument("bounds: horizon must be >= 1");
  if (weights.size() != horizon) throw std::invalid_argument("bounds: need exactly T weights");
  if (!steps.empty() && steps.size() != horizon) throw std::invalid_argument("bounds: need exactly T steps");
  for (double a : weights) {
    if (!(a > 0.0)) throw std::invalid_argument("bounds: weights must be positive");
  }
}

namespace {

struct WeightSummary {
  double sum = 0.0;
  double sum_sq = 0.0;
  double max = 0.0;
};

WeightSummary summarize(const std::vector<double>& w) {
  WeightSummary s;
  for (double a : w) {
    s.sum += a;
    s.sum_sq += a * a;
    s.max = std::max(s.max, a);
  }
  return s;
}

}  // namespace

double q_delta(const BoundInputs& in) {
  in.validate();
  const WeightSummary w = summarize(in.weights);
  const double t = static_cast<double>(in.horizon);
  const double log_inv = std::log(1.0 / in.delta);
  return 2.0 * in.diameter * in.sigma * std::sqrt(2.0 * log_inv) *
         (w.sum / std::sqrt(t) + std::sqrt(w.sum_sq) + 2.0 * w.max);
}

double r_delta(const BoundInputs& in) {
  in.validate();
  const WeightSummary w = summarize(in.weights);
  const double t = static_cast<double>(in.horizon);
  const double log_inv = std::log(1.0 / in.delta);
  return 2.0 * in.smoothness * in.diameter * in.diameter * log_inv *
         (w.sum / t + std::sqrt(w.sum_sq / t) + 2.0 * std::sqrt(2.0) * w.max);
}

double sgd_bregman_diameter(double diameter) { return 2.0 * diameter * diameter; }

double sgd_excess_bound(const BoundInputs& in) {
  in.validate();
  if (in.steps.empty()) throw std::invalid_argument("sgd_excess_bound: step sizes are required");
  for (double a : in.weights) {
    if (a != 1.0) throw std::invalid_argument("sgd_excess_bound: the SGD corollary needs alpha_t = 1 for all t");
  }
  if (in.smoothness > 0.0) {
    for (std::size_t i = 0; i < in.steps.size(); ++i) {
      if (in.steps[i] > 1.0 / in.smoothness) {
        std::ostringstream msg;
        msg << "sgd_excess_bound: the SGD corollary needs beta_t <= 1/lambda, but beta_" << i + 1 << " = "
            << in.steps[i] << " > " << 1.0 / in.smoothness;
        throw std::invalid_argument(msg.str());
      }
    }
  }
  const double t = static_cast<double>(in.horizon);
  const double d = in.diameter;
  const double log_inv = std::log(1.0 / in.delta);
  const double optimization = 2.0 * d * d / (t * in.steps.back());
  const double noise = 8.0 * d * in.sigma * std::sqrt(2.0 * log_inv / t);
  const double curvature = 12.0 * in.smoothness * d * d * log_inv / t;
  return optimization + std::max(noise, curvature);
}

double smd_excess_bound(const BoundInputs& in) {
  in.validate();
  if (in.steps.empty()) throw std::invalid_argument("smd_excess_bound: step sizes are required");
  validate_mirror_descent_schedule(in.weights, in.steps, in.strong_convexity, in.smoothness);
  const double weight_sum = std::accumulate(in.weights.begin(), in.weights.end(), 0.0);
  const double leading = in.bregman_diameter > 0.0 ? (in.weights.back() / in.steps.back()) * in.bregman_diameter : 0.0;
  return (leading + std::max(q_delta(in), r_delta(in))) / weight_sum;
}

double bernstein_deviation(const BernsteinParams& p) {
  if (!(p.gamma1 >= 0.0) || !(p.gamma2 >= 0.0) || !(p.bound >= 0.0)) {
    throw std::invalid_argument("bernstein_deviation: parameters must be nonnegative");
  }
  return std::sqrt(2.0 * p.gamma1 * p.gamma2) + std::sqrt(2.0) / 3.0 * p.bound * p.gamma1;
}

}  // namespace anytime
