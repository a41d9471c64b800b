#ifndef ANYTIME_LEARNERS_HPP
#define ANYTIME_LEARNERS_HPP

#include "anytime/geometry.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace anytime {

/// Quadratic regularizers psi_t(h) = (s_t / 2) |h - c|^2 centred at the
/// feasible set's center c, with s_t positive and nondecreasing. The implied
/// increments phi_0 = psi_1 and phi_t = ((s_{t+1} - s_t) / 2) |h - c|^2 are
/// convex and nonnegative.
class RegularizerSchedule {
 public:
  enum class Kind { Constant, SqrtGrowth };

  /// s_t = s.
  static RegularizerSchedule constant(double s);
  /// s_t = s * sqrt(t).
  static RegularizerSchedule sqrt_growth(double s);

  Kind kind() const { return kind_; }
  double base() const { return base_; }
  /// s_t for t >= 1; s_0 = 0.
  double strength(std::size_t t) const;
  /// psi_t(h); zero for t = 0.
  double psi(std::size_t t, const Vector& h, const Vector& center) const;
  /// phi_t(h) = psi_{t+1}(h) - psi_t(h).
  double phi(std::size_t t, const Vector& h, const Vector& center) const;

 private:
  RegularizerSchedule(Kind kind, double base) : kind_(kind), base_(base) {}
  Kind kind_;
  double base_;
};

/// Step sizes beta_t > 0, indexed from t = 1.
class StepSchedule {
 public:
  static StepSchedule constant(double beta);
  static StepSchedule sequence(std::vector<double> betas);

  double at(std::size_t t) const;
  bool is_constant() const { return values_.empty(); }

 private:
  double constant_ = 0.0;
  std::vector<double> values_;
};

/// argmin over the set of [(s/2)|h - c|^2 + <theta, h>], i.e. the Euclidean
/// projection of c - theta / s.
Vector quadratic_leader(const FeasibleSet& set, double strength, const DualVector& theta);

/// FTRL update: h_{t+1} from the accumulated sum theta = sum_{i<=t} alpha_i G_i.
Vector ftrl_step(const FeasibleSet& set, const RegularizerSchedule& regs, std::size_t t,
                 const DualVector& accumulated);

/// AO-FTRL update: like ftrl_step with alpha_next * hint folded into theta.
Vector aoftrl_step(const FeasibleSet& set, const RegularizerSchedule& regs, std::size_t t,
                   double alpha_next, const DualVector& hint, const DualVector& accumulated);

struct SmdStep {
  /// Unconstrained mirror step h' with grad Phi(h') = grad Phi(h) - beta G.
  Vector dual_point;
  /// Bregman projection of h' onto the set.
  Vector next;
};

/// One stochastic mirror descent step in dual/projection form. For the
/// Euclidean map this is exactly projected SGD: P(h - beta G).
SmdStep smd_step(const FeasibleSet& set, const MirrorMap& map, const Vector& h, double beta,
                 const DualVector& g);

struct StepContext {
  std::size_t t = 1;
  double alpha = 1.0;
  /// alpha_{t+1}; only AO-FTRL reads it.
  double alpha_next = 1.0;
};

/// Online learner driven by processed gradients. current() is h_t; update()
/// consumes G_bar_t and moves to h_{t+1}.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual const Vector& current() const = 0;
  virtual void update(const DualVector& g_bar, const StepContext& ctx) = 0;
  /// beta_t for mirror-descent learners.
  virtual std::optional<double> step_size(std::size_t) const { return std::nullopt; }
  virtual std::unique_ptr<OnlineLearner> clone() const = 0;
};

class FtrlLearner final : public OnlineLearner {
 public:
  /// h_1 = argmin psi_1 = the set's center.
  FtrlLearner(FeasibleSet set, RegularizerSchedule regs);

  const Vector& current() const override { return h_; }
  void update(const DualVector& g_bar, const StepContext& ctx) override;
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<FtrlLearner>(*this); }

  const DualVector& accumulated() const { return theta_; }
  const RegularizerSchedule& regularizers() const { return regs_; }
  const FeasibleSet& feasible_set() const { return set_; }

 private:
  FeasibleSet set_;
  RegularizerSchedule regs_;
  Vector h_;
  DualVector theta_;
};

class MirrorDescentLearner final : public OnlineLearner {
 public:
  MirrorDescentLearner(FeasibleSet set, MirrorMap map, StepSchedule steps, Vector h1);

  const Vector& current() const override { return h_; }
  void update(const DualVector& g_bar, const StepContext& ctx) override;
  std::optional<double> step_size(std::size_t t) const override { return steps_.at(t); }
  std::unique_ptr<OnlineLearner> clone() const override {
    return std::make_unique<MirrorDescentLearner>(*this);
  }

  const MirrorMap& map() const { return map_; }
  /// h' from the latest update.
  const std::optional<Vector>& last_dual_point() const { return dual_point_; }

 private:
  FeasibleSet set_;
  MirrorMap map_;
  StepSchedule steps_;
  Vector h_;
  std::optional<Vector> dual_point_;
};

/// Optimistic FTRL. The hint used to choose h_{t+1} is the latest processed
/// gradient G_bar_t; the hint in force for h_1 is the zero vector.
class AoFtrlLearner final : public OnlineLearner {
 public:
  AoFtrlLearner(FeasibleSet set, RegularizerSchedule regs);

  const Vector& current() const override { return h_; }
  void update(const DualVector& g_bar, const StepContext& ctx) override;
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<AoFtrlLearner>(*this); }

  const DualVector& accumulated() const { return theta_; }
  /// Hint that was in force when the current iterate was chosen.
  const DualVector& hint() const { return hint_; }

 private:
  FeasibleSet set_;
  RegularizerSchedule regs_;
  Vector h_;
  DualVector theta_;
  DualVector hint_;
};

/// alpha_t = 1 for t in [T].
std::vector<double> constant_weights(std::size_t horizon);

/// alpha_1 = 1 and the largest alpha_t with alpha_t^2 <= (s_t / lambda) alpha_{1:t-1}.
std::vector<double> aoftrl_weights(std::size_t horizon, double smoothness, const RegularizerSchedule& regs);

/// Throws std::invalid_argument unless beta_t <= s / lambda and
/// alpha_t / alpha_{t-1} >= beta_t / beta_{t-1} for every t.
void validate_mirror_descent_schedule(std::span<const double> weights, std::span<const double> steps,
                                      double strong_convexity, double smoothness);

}  // namespace anytime

#endif  // ANYTIME_LEARNERS_HPP
