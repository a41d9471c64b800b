#include "anytime/conversion.hpp"

#include <cmath>
#include <stdexcept>

namespace anytime {

AnytimeState AnytimeState::start(Vector h1, double alpha1) {
  if (!(alpha1 > 0.0) || !std::isfinite(alpha1)) throw std::invalid_argument("weights must be positive");
  AnytimeState s{h1, h1, {alpha1}, alpha1};
  return s;
}

Vector weighting_update(AnytimeState& state, const Vector& h_next, double alpha_next) {
  if (!(alpha_next > 0.0) || !std::isfinite(alpha_next)) {
    throw std::invalid_argument("weighting_update: weight must be positive and finite");
  }
  state.h_bar.check_same_dim(h_next);
  const double total = state.weight_sum + alpha_next;
  const double share = alpha_next / total;
  state.h_bar = Vector(state.h_bar.coords() + share * (h_next.coords() - state.h_bar.coords()));
  state.h = h_next;
  state.weights.push_back(alpha_next);
  state.weight_sum = total;
  return state.h_bar;
}

double RunTrace::weight_sum(std::size_t horizon) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < horizon && i < steps.size(); ++i) sum += steps[i].alpha;
  return sum;
}

// ---------------------------------------------------------------------------

AnytimeConversion::AnytimeConversion(OnlineLearner& learner, GradientOracle& oracle, std::vector<double> weights,
                                     std::optional<RobustFeedback> robust, RunOptions options)
    : learner_(learner),
      oracle_(oracle),
      weights_(std::move(weights)),
      robust_(std::move(robust)),
      options_(options),
      state_(AnytimeState::start(learner.current(), weights_.empty() ? 0.0 : weights_.front())) {}

double AnytimeConversion::weight(std::size_t t) const {
  if (t == 0 || t > weights_.size()) throw std::out_of_range("anytime conversion: weight sequence too short");
  return weights_[t - 1];
}

void AnytimeConversion::set_anchor(Anchor anchor) {
  if (!robust_) throw std::logic_error("set_anchor: run has no truncation step");
  robust_->anchor = std::move(anchor);
}

StepRecord AnytimeConversion::feedback() {
  const Vector& query_point = options_.query_at == QueryPoint::Main ? state_.h_bar : state_.h;
  StepRecord rec;
  rec.t = t_;
  rec.h = state_.h;
  rec.h_bar = state_.h_bar;
  rec.alpha = weight(t_);
  rec.beta = learner_.step_size(t_);
  rec.g_raw = oracle_.query(query_point);
  if (robust_) {
    const double c = robust_->schedule.at(state_.h_bar, robust_->anchor);
    ProcessResult processed = process(rec.g_raw, robust_->anchor, c, robust_->dual);
    rec.threshold = c;
    rec.truncated = processed.truncated;
    rec.g_bar = std::move(processed.gradient);
  } else {
    rec.g_bar = rec.g_raw;
  }
  stats_.record(rec.truncated);
  return rec;
}

StepRecord AnytimeConversion::probe() { return feedback(); }

StepRecord AnytimeConversion::step() {
  StepRecord rec = feedback();
  learner_.update(rec.g_bar, StepContext{t_, rec.alpha, weight(t_ + 1)});
  weighting_update(state_, learner_.current(), weight(t_ + 1));
  ++t_;
  return rec;
}

RunTrace run(OnlineLearner& learner, GradientOracle& oracle, std::span<const double> weights,
             std::optional<RobustFeedback> robust, std::size_t horizon, RunOptions options) {
  if (horizon == 0) throw std::invalid_argument("run: horizon must be >= 1");
  if (weights.size() < horizon) throw std::invalid_argument("run: need at least T weights");
  AnytimeConversion loop(learner, oracle, std::vector<double>(weights.begin(), weights.begin() + horizon),
                         std::move(robust), options);
  RunTrace trace;
  trace.steps.reserve(horizon);
  for (std::size_t t = 1; t < horizon; ++t) trace.steps.push_back(loop.step());
  if (options.final_probe) {
    trace.steps.push_back(loop.probe());
  } else {
    StepRecord last;
    last.t = horizon;
    last.h = loop.state().h;
    last.h_bar = loop.state().h_bar;
    last.alpha = weights[horizon - 1];
    trace.steps.push_back(std::move(last));
  }
  trace.final_h_bar = loop.state().h_bar;
  trace.stats = loop.stats();
  return trace;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t resolve_horizon(const RunTrace& trace, std::size_t horizon) {
  if (horizon == 0) horizon = trace.horizon();
  if (horizon == 0 || horizon > trace.horizon()) throw std::invalid_argument("audit: horizon out of range");
  return horizon;
}

const DualVector& processed_gradient(const StepRecord& rec) {
  if (rec.g_bar.dim() == 0) throw std::invalid_argument("audit: trace step has no feedback (final probe off?)");
  return rec.g_bar;
}

}  // namespace

double regret(const RunTrace& trace, const Vector& h_star, std::size_t horizon) {
  horizon = resolve_horizon(trace, horizon);
  double sum = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const StepRecord& rec = trace.steps[i];
    sum += rec.alpha * pairing(processed_gradient(rec), rec.h - h_star);
  }
  return sum;
}

AnytimeAudit anytime_identity_audit(const RunTrace& trace, const Objective& obj, const Vector& h_star,
                                    std::size_t horizon) {
  horizon = resolve_horizon(trace, horizon);
  AnytimeAudit audit;
  audit.weight_sum = trace.weight_sum(horizon);
  const Vector& h_bar_final = trace.steps[horizon - 1].h_bar;
  audit.lhs = obj.value(h_bar_final) - obj.value(h_star);

  double linear = 0.0;
  double bregman_star = 0.0;
  double bregman_path = 0.0;
  double running_weight = 0.0;
  const bool has_feedback = trace.steps[horizon - 1].g_bar.dim() != 0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const StepRecord& rec = trace.steps[i];
    const DualVector grad = obj.gradient(rec.h_bar);
    linear += rec.alpha * pairing(grad, rec.h - h_star);
    bregman_star += rec.alpha * obj.bregman(h_star, rec.h_bar);
    running_weight += rec.alpha;
    if (i + 1 < horizon) bregman_path += running_weight * obj.bregman(rec.h_bar, trace.steps[i + 1].h_bar);
    if (has_feedback) {
      audit.regret += rec.alpha * pairing(processed_gradient(rec), rec.h - h_star);
      audit.gradient_error_sum += rec.alpha * pairing(rec.g_bar - grad, h_star - rec.h);
    }
  }
  audit.rhs = (linear - bregman_star - bregman_path) / audit.weight_sum;
  audit.bregman_sum = bregman_star + bregman_path;
  audit.decomposition = (audit.regret + audit.gradient_error_sum - audit.bregman_sum) / audit.weight_sum;
  return audit;
}

double weighted_gradient_error(const RunTrace& trace, const Objective& obj, std::size_t horizon) {
  horizon = resolve_horizon(trace, horizon);
  double sum = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const StepRecord& rec = trace.steps[i];
    sum += rec.alpha * obj.feasible_set().support_width(processed_gradient(rec) - obj.gradient(rec.h_bar));
  }
  return sum;
}

std::vector<double> smd_regret_slacks(const RunTrace& trace, const Objective& obj, const MirrorMap& map,
                                      const Vector& h_star) {
  std::vector<double> slacks;
  if (trace.horizon() < 2) return slacks;
  slacks.reserve(trace.horizon() - 1);
  const double s = map.strong_convexity();
  for (std::size_t i = 0; i + 1 < trace.horizon(); ++i) {
    const StepRecord& rec = trace.steps[i];
    const Vector& h_next = trace.steps[i + 1].h;
    if (!rec.beta) throw std::invalid_argument("smd_regret_slacks: trace has no step sizes");
    const double beta = *rec.beta;
    const DualVector grad = obj.gradient(rec.h_bar);
    const double lhs = pairing(rec.g_bar, rec.h - h_star);
    const double grad_norm = dual_norm(grad, map.dual_norm());
    const double rhs = (map.bregman(h_star, rec.h) - map.bregman(h_star, h_next)) / beta +
                       beta / (2.0 * s) * grad_norm * grad_norm + pairing(grad - rec.g_bar, h_next - rec.h);
    slacks.push_back(rhs - lhs);
  }
  return slacks;
}

FtrlRegretCheck ftrl_regret_check(const RunTrace& trace, const Objective& obj, const FeasibleSet& set,
                                  const RegularizerSchedule& regs, const Vector& h_star, std::size_t horizon) {
  horizon = resolve_horizon(trace, horizon);
  const Vector& center = set.center();
  FtrlRegretCheck check;
  check.lhs = regret(trace, h_star, horizon);

  // h_{T+1} is the leader under psi_T (psi_{T+1} := psi_T).
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(set.dim());
  for (std::size_t i = 0; i < horizon; ++i) theta += trace.steps[i].alpha * processed_gradient(trace.steps[i]).coords();
  const Vector h_last = quadratic_leader(set, regs.strength(horizon), DualVector(theta));

  double rhs = regs.psi(horizon, h_star, center) - regs.psi(1, trace.steps[0].h, center);
  for (std::size_t i = 0; i < horizon; ++i) {
    const std::size_t t = i + 1;
    const StepRecord& rec = trace.steps[i];
    const Vector& h_next = (t < horizon) ? trace.steps[i + 1].h : h_last;
    const double psi_next = (t < horizon) ? regs.psi(t + 1, h_next, center) : regs.psi(t, h_next, center);
    rhs += regs.psi(t, h_next, center) - psi_next;
    const DualVector grad = obj.gradient(rec.h_bar);
    const double scaled = rec.alpha * dual_norm(grad, Norm::L2);
    rhs += scaled * scaled / (2.0 * regs.strength(t));
    rhs += rec.alpha * pairing(grad - rec.g_bar, h_next - rec.h);
  }
  check.rhs = rhs;
  return check;
}

}  // namespace anytime
