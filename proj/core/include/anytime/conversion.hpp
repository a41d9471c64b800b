#ifndef ANYTIME_CONVERSION_HPP
#define ANYTIME_CONVERSION_HPP

#include "anytime/geometry.hpp"
#include "anytime/learners.hpp"
#include "anytime/objectives.hpp"
#include "anytime/oracles.hpp"
#include "anytime/robust_feedback.hpp"

#include <optional>
#include <span>
#include <vector>

namespace anytime {

/// Ancillary iterate h_t, main iterate h_bar_t (the alpha-weighted average of
/// h_1..h_t) and the weights seen so far.
struct AnytimeState {
  Vector h;
  Vector h_bar;
  std::vector<double> weights;
  double weight_sum = 0.0;

  /// h_bar_1 = h_1.
  static AnytimeState start(Vector h1, double alpha1);
};

/// Append h_{t+1} with weight alpha_{t+1} and return the new main iterate:
/// h_bar_{t+1} = h_bar_t + (alpha_{t+1} / alpha_{1:t+1}) (h_{t+1} - h_bar_t).
/// Throws std::invalid_argument for a non-positive weight.
Vector weighting_update(AnytimeState& state, const Vector& h_next, double alpha_next);

/// Where stochastic gradients are queried. Main is the anytime scheme; Ancillary
/// is classical feedback at h_t (used by the averaged-SGD baseline).
enum class QueryPoint { Main, Ancillary };

struct RobustFeedback {
  Anchor anchor;
  ThresholdSchedule schedule;
  Norm dual = Norm::L2;
};

struct StepRecord {
  std::size_t t = 0;
  Vector h;
  Vector h_bar;
  DualVector g_raw;
  DualVector g_bar;
  /// Absent when no truncation is applied.
  std::optional<double> threshold;
  bool truncated = false;
  double alpha = 0.0;
  /// Absent for learners without a step size.
  std::optional<double> beta;
};

/// Full record of one run. steps[t-1] holds step t for t in [T]. The record
/// for t = T carries the feedback obtained by a final probe at h_bar_T (no
/// learner update follows it), so regret-type sums over [T] are defined.
struct RunTrace {
  std::vector<StepRecord> steps;
  Vector final_h_bar;
  TruncationStats stats;

  std::size_t horizon() const { return steps.size(); }
  double weight_sum(std::size_t horizon) const;
};

struct RunOptions {
  QueryPoint query_at = QueryPoint::Main;
  /// Query once more at h_bar_T so the trace carries G_T.
  bool final_probe = true;
};

/// Stepper for the anytime robust online-to-batch loop. Each step() queries at
/// the current point, processes the feedback, updates the learner and the
/// weighted average. weights[t-1] is alpha_t and must cover every step taken
/// plus one.
class AnytimeConversion {
 public:
  AnytimeConversion(OnlineLearner& learner, GradientOracle& oracle, std::vector<double> weights,
                    std::optional<RobustFeedback> robust, RunOptions options = {});

  /// One loop body: returns the record for the current t and advances to t+1.
  StepRecord step();
  /// Query and process at the current point without updating anything else.
  StepRecord probe();

  std::size_t t() const { return t_; }
  const AnytimeState& state() const { return state_; }
  const TruncationStats& stats() const { return stats_; }
  /// Replaces the truncation anchor (used by periodic anchor refreshes).
  void set_anchor(Anchor anchor);
  const std::optional<RobustFeedback>& robust() const { return robust_; }

 private:
  StepRecord feedback();
  double weight(std::size_t t) const;

  OnlineLearner& learner_;
  GradientOracle& oracle_;
  std::vector<double> weights_;
  std::optional<RobustFeedback> robust_;
  RunOptions options_;
  AnytimeState state_;
  TruncationStats stats_;
  std::size_t t_ = 1;
};

/// Runs T - 1 loop bodies followed (by default) by a final probe at h_bar_T.
/// weights must hold at least T entries.
RunTrace run(OnlineLearner& learner, GradientOracle& oracle, std::span<const double> weights,
             std::optional<RobustFeedback> robust, std::size_t horizon, RunOptions options = {});

// ---------------------------------------------------------------------------
// Audits over a completed trace.

/// sum_{t <= T} alpha_t <G_bar_t, h_t - h_star>. horizon 0 means the whole trace.
double regret(const RunTrace& trace, const Vector& h_star, std::size_t horizon = 0);

struct AnytimeAudit {
  /// R(h_bar_T) - R(h_star).
  double lhs = 0.0;
  /// Weighted-average expression built from grad R at the main iterates.
  double rhs = 0.0;
  double regret = 0.0;
  /// sum alpha_t <G_bar_t - grad R(h_bar_t), h_star - h_t>.
  double gradient_error_sum = 0.0;
  /// B_T: all Bregman terms of R, nonnegative for convex R.
  double bregman_sum = 0.0;
  /// (regret + gradient_error_sum - bregman_sum) / alpha_{1:T}.
  double decomposition = 0.0;
  double weight_sum = 0.0;
};

AnytimeAudit anytime_identity_audit(const RunTrace& trace, const Objective& obj, const Vector& h_star,
                                    std::size_t horizon = 0);

/// sum alpha_t sup_{h, h'} <G_bar_t - grad R(h_bar_t), h - h'> over the
/// objective's feasible set.
double weighted_gradient_error(const RunTrace& trace, const Objective& obj, std::size_t horizon = 0);

/// Per-step slack (rhs - lhs) of the mirror-descent regret inequality for
/// t in [T-1]:
///   <G_bar_t, h_t - h*> <= [B(h*; h_t) - B(h*; h_{t+1})] / beta_t
///                          + beta_t / (2 s) |grad R(h_bar_t)|_*^2
///                          + <grad R(h_bar_t) - G_bar_t, h_{t+1} - h_t>.
std::vector<double> smd_regret_slacks(const RunTrace& trace, const Objective& obj, const MirrorMap& map,
                                      const Vector& h_star);

struct FtrlRegretCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
};

/// Both sides of the cumulative FTRL regret bound at horizon T (quadratic
/// regularizers, psi_{T+1} := psi_T). The per-step curvature term is
/// alpha_t^2 |grad R(h_bar_t)|_*^2 / (2 s_t).
FtrlRegretCheck ftrl_regret_check(const RunTrace& trace, const Objective& obj, const FeasibleSet& set,
                                  const RegularizerSchedule& regs, const Vector& h_star, std::size_t horizon);

}  // namespace anytime

#endif  // ANYTIME_CONVERSION_HPP
