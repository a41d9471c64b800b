#ifndef ANYTIME_ROBUST_FEEDBACK_HPP
#define ANYTIME_ROBUST_FEEDBACK_HPP

#include "anytime/geometry.hpp"
#include "anytime/objectives.hpp"

#include <cstddef>
#include <vector>

namespace anytime {

/// Default confidence level for benchmark runs.
inline constexpr double kDefaultDelta = 0.05;

/// Fixed primal/dual anchor pair used by the truncation step. eps_sigma is the
/// accuracy budget of g_tilde as an estimate of grad R(h_tilde), holding with
/// probability at least 1 - delta.
struct Anchor {
  Vector h_tilde;
  DualVector g_tilde;
  double eps_sigma = 0.0;
  double delta = kDefaultDelta;
};

struct ProcessResult {
  DualVector gradient;
  bool truncated = false;
};

/// Replace G by the dual anchor when |G - g_tilde|_* exceeds the threshold,
/// otherwise pass it through unchanged. The boundary case (equality) is kept.
ProcessResult process(const DualVector& g, const Anchor& anchor, double threshold,
                      Norm dual = Norm::L2);

/// Rule producing the truncation threshold c_t at the current main iterate.
class ThresholdSchedule {
 public:
  enum class Kind { SmoothTheory, Heuristic };

  /// c_t = eps_sigma + lambda |h_tilde - h_bar_t| + c0.
  static ThresholdSchedule smooth_theory(double eps_sigma, double smoothness, double c0,
                                         Norm primal = Norm::L2);
  /// c_t = c for every t.
  static ThresholdSchedule heuristic(double c);
  /// c_t = sqrt(n_train / log(1/delta)).
  static ThresholdSchedule heuristic_for(std::size_t n_train, double delta);

  Kind kind() const { return kind_; }
  double at(const Vector& h_bar, const Anchor& anchor) const;

  double eps_sigma() const { return eps_sigma_; }
  double smoothness() const { return smoothness_; }
  double c0() const { return c0_; }
  double constant() const { return constant_; }
  Norm primal_norm() const { return primal_; }

 private:
  ThresholdSchedule() = default;

  Kind kind_ = Kind::Heuristic;
  double eps_sigma_ = 0.0;
  double smoothness_ = 0.0;
  double c0_ = 0.0;
  double constant_ = 0.0;
  Norm primal_ = Norm::L2;
};

/// Per-run record of which queries were truncated.
class TruncationStats {
 public:
  void record(bool truncated) {
    flags_.push_back(truncated);
    if (truncated) ++truncated_count_;
  }
  std::size_t total_queries() const { return flags_.size(); }
  std::size_t truncated_count() const { return truncated_count_; }
  double rate() const {
    return flags_.empty() ? 0.0 : static_cast<double>(truncated_count_) / static_cast<double>(flags_.size());
  }
  const std::vector<bool>& flags() const { return flags_; }

 private:
  std::vector<bool> flags_;
  std::size_t truncated_count_ = 0;
};

/// Smallest horizon admitted by the truncation lemma: log(1/delta) * ceil(eps_sigma)^2.
double lemma2_min_horizon(double delta, double eps_sigma);

/// c0 = max{lambda D, sigma sqrt(T / log(1/delta))} + eps_sigma. Throws
/// std::invalid_argument (naming the minimum admissible T) when T is too small,
/// or when a parameter is out of range.
double lemma2_c0(double smoothness, double diameter, double sigma, std::size_t horizon, double delta,
                 double eps_sigma);

enum class AnchorStrategy {
  /// g_tilde = grad R(h_tilde), eps_sigma = 0.
  Exact,
  /// g_tilde = empirical mean of per-example gradients at h_tilde.
  ExperimentDefault,
};

/// Build a fixed anchor at h_tilde. ExperimentDefault requires a finite-sum
/// objective and throws std::invalid_argument on an empty one.
Anchor build_anchor(AnchorStrategy strategy, const Objective& obj, const Vector& h_tilde,
                    double delta = kDefaultDelta);

}  // namespace anytime

#endif  // ANYTIME_ROBUST_FEEDBACK_HPP
