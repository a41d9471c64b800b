#ifndef ANYTIME_OBJECTIVES_HPP
#define ANYTIME_OBJECTIVES_HPP

#include "anytime/dataset.hpp"
#include "anytime/geometry.hpp"

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace anytime {

/// Convex, smooth true objective R on a feasible set, with its exact gradient.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Index dim() const = 0;
  virtual double value(const Vector& h) const = 0;
  virtual DualVector gradient(const Vector& h) const = 0;

  /// B_R(u; v) = R(u) - R(v) - <grad R(v), u - v>.
  virtual double bregman(const Vector& u, const Vector& v) const;

  /// Smoothness constant in the norm of the feasible geometry.
  double smoothness() const { return smoothness_; }
  const FeasibleSet& feasible_set() const { return set_; }

 protected:
  Objective(FeasibleSet set, double smoothness) : set_(std::move(set)), smoothness_(smoothness) {}

 private:
  FeasibleSet set_;
  double smoothness_;
};

/// R(h) = 0.5 <h, A h> - <b, h> with A symmetric positive semidefinite.
/// The smoothness constant is the largest eigenvalue of A.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Eigen::MatrixXd a, Vector b, FeasibleSet set);

  Index dim() const override { return b_.dim(); }
  double value(const Vector& h) const override;
  DualVector gradient(const Vector& h) const override;
  /// Exact: 0.5 <u - v, A (u - v)>.
  double bregman(const Vector& u, const Vector& v) const override;

  const Eigen::MatrixXd& matrix() const { return a_; }
  const Vector& linear_term() const { return b_; }

 private:
  Eigen::MatrixXd a_;
  Vector b_;
};

/// Objective that is an average of per-example terms, so it can be sampled.
class FiniteSumObjective : public Objective {
 public:
  virtual std::size_t example_count() const = 0;
  /// Mean gradient over the examples at the given positions (0-based into
  /// this objective's own example list).
  virtual DualVector batch_gradient(const Vector& h, std::span<const std::size_t> positions) const = 0;

 protected:
  using Objective::Objective;
};

/// Mean softmax cross-entropy of a linear k-class model over a subset of a
/// dataset. Parameters are the k x d_in weight matrix flattened row-major.
class LogisticObjective final : public FiniteSumObjective {
 public:
  /// Uses every row of the dataset.
  LogisticObjective(std::shared_ptr<const Dataset> data, FeasibleSet set);
  /// Uses only the listed rows.
  LogisticObjective(std::shared_ptr<const Dataset> data, std::vector<std::size_t> rows,
                    FeasibleSet set);

  Index dim() const override { return data_->model_dim(); }
  double value(const Vector& h) const override;
  DualVector gradient(const Vector& h) const override;

  std::size_t example_count() const override { return rows_.size(); }
  DualVector batch_gradient(const Vector& h, std::span<const std::size_t> positions) const override;

  /// Loss of a single example (position into this objective's rows).
  double example_loss(const Vector& h, std::size_t position) const;
  /// Gradient of a single example (position into this objective's rows).
  DualVector example_gradient(const Vector& h, std::size_t position) const;

  const Dataset& data() const { return *data_; }
  const std::vector<std::size_t>& rows() const { return rows_; }

  /// 0.5 * max_i |x_i|^2 over the given rows.
  static double smoothness_bound(const Dataset& data, const std::vector<std::size_t>& rows);

 private:
  void accumulate_gradient(const Vector& h, std::size_t row, Eigen::VectorXd& out) const;

  std::shared_ptr<const Dataset> data_;
  std::vector<std::size_t> rows_;
};

struct ReferencePoint {
  Vector h_star;
  double value = 0.0;
  /// Norm of the projected-gradient mapping at h_star; equals the dual norm of
  /// the gradient for interior minimizers.
  double stationarity_residual = 0.0;
  std::size_t iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Projected-gradient stationarity measure: lambda * |h - P(h - grad/lambda)|.
double stationarity_residual(const Objective& obj, const Vector& h);

/// Deterministic accelerated projected gradient descent (with restarts) until
/// the stationarity residual is at most tol. Throws ConvergenceError after
/// max_iterations.
ReferencePoint solve_reference(const Objective& obj, double tol,
                               std::size_t max_iterations = 2'000'000);

}  // namespace anytime

#endif  // ANYTIME_OBJECTIVES_HPP
