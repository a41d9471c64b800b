#include "anytime/objectives.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anytime {

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("dataset: feature rows and label count differ");
  }
  if (class_count < 1) throw std::invalid_argument("dataset: class_count must be >= 1");
  if (!feature_names.empty() && static_cast<Index>(feature_names.size()) != features.cols()) {
    throw std::invalid_argument("dataset: feature_names length differs from column count");
  }
  for (int y : labels) {
    if (y < 0 || y >= class_count) throw std::invalid_argument("dataset: label out of range");
  }
  if (!features.allFinite()) throw std::invalid_argument("dataset: non-finite feature value");
}

double Objective::bregman(const Vector& u, const Vector& v) const {
  return value(u) - value(v) - pairing(gradient(v), u - v);
}

// ---------------------------------------------------------------------------
// Quadratic

namespace {

double largest_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("quadratic: eigen decomposition failed");
  return std::max(solver.eigenvalues().maxCoeff(), 0.0);
}

}  // namespace

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd a, Vector b, FeasibleSet set)
    : Objective(std::move(set), largest_eigenvalue(a)), a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols() || a_.rows() != b_.dim()) {
    throw std::invalid_argument("quadratic: A must be square and match b");
  }
  if (!a_.isApprox(a_.transpose(), 1e-12)) throw std::invalid_argument("quadratic: A must be symmetric");
  if (feasible_set().dim() != b_.dim()) throw std::invalid_argument("quadratic: feasible set dimension");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, smoothness())) {
    throw std::invalid_argument("quadratic: A must be positive semidefinite");
  }
}

double QuadraticObjective::value(const Vector& h) const {
  b_.check_same_dim(h);
  return 0.5 * h.coords().dot(a_ * h.coords()) - b_.coords().dot(h.coords());
}

DualVector QuadraticObjective::gradient(const Vector& h) const {
  b_.check_same_dim(h);
  return DualVector(a_ * h.coords() - b_.coords());
}

double QuadraticObjective::bregman(const Vector& u, const Vector& v) const {
  u.check_same_dim(v);
  const Eigen::VectorXd diff = u.coords() - v.coords();
  return 0.5 * diff.dot(a_ * diff);
}

// ---------------------------------------------------------------------------
// Logistic

namespace {

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

using WeightMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

WeightMap weights_of(const Vector& h, const Dataset& data) {
  return WeightMap(h.coords().data(), data.class_count, data.input_dim());
}

// Softmax probabilities and log-sum-exp of the scores, stabilized.
double softmax_in_place(Eigen::VectorXd& scores) {
  const double top = scores.maxCoeff();
  scores = (scores.array() - top).exp().matrix();
  const double total = scores.sum();
  scores /= total;
  return top + std::log(total);
}

}  // namespace

LogisticObjective::LogisticObjective(std::shared_ptr<const Dataset> data, FeasibleSet set)
    : LogisticObjective(data, all_rows(*data), std::move(set)) {}

LogisticObjective::LogisticObjective(std::shared_ptr<const Dataset> data, std::vector<std::size_t> rows,
                                     FeasibleSet set)
    : FiniteSumObjective(std::move(set), smoothness_bound(*data, rows)),
      data_(std::move(data)),
      rows_(std::move(rows)) {
  data_->validate();
  if (rows_.empty()) throw std::invalid_argument("logistic: empty example set");
  for (std::size_t r : rows_) {
    if (r >= data_->size()) throw std::invalid_argument("logistic: row index out of range");
  }
  if (feasible_set().dim() != data_->model_dim()) {
    throw std::invalid_argument("logistic: feasible set dimension must be k * d_in");
  }
}

double LogisticObjective::smoothness_bound(const Dataset& data, const std::vector<std::size_t>& rows) {
  double max_sq = 0.0;
  for (std::size_t r : rows) {
    if (r < data.size()) max_sq = std::max(max_sq, data.features.row(static_cast<Index>(r)).squaredNorm());
  }
  return 0.5 * max_sq;
}

double LogisticObjective::example_loss(const Vector& h, std::size_t position) const {
  const auto row = static_cast<Index>(rows_.at(position));
  Eigen::VectorXd scores = weights_of(h, *data_) * data_->features.row(row).transpose();
  const double label_score = scores[data_->labels[static_cast<std::size_t>(row)]];
  return softmax_in_place(scores) - label_score;
}

double LogisticObjective::value(const Vector& h) const {
  if (h.dim() != dim()) throw std::invalid_argument("logistic: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) total += example_loss(h, i);
  return total / static_cast<double>(rows_.size());
}

void LogisticObjective::accumulate_gradient(const Vector& h, std::size_t row, Eigen::VectorXd& out) const {
  const auto r = static_cast<Index>(row);
  const auto x = data_->features.row(r);
  Eigen::VectorXd p = weights_of(h, *data_) * x.transpose();
  softmax_in_place(p);
  p[data_->labels[row]] -= 1.0;
  const Index d_in = data_->input_dim();
  for (Index c = 0; c < p.size(); ++c) out.segment(c * d_in, d_in) += p[c] * x.transpose();
}

DualVector LogisticObjective::example_gradient(const Vector& h, std::size_t position) const {
  if (h.dim() != dim()) throw std::invalid_argument("logistic: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  accumulate_gradient(h, rows_.at(position), out);
  return DualVector(std::move(out));
}

DualVector LogisticObjective::batch_gradient(const Vector& h, std::span<const std::size_t> positions) const {
  if (h.dim() != dim()) throw std::invalid_argument("logistic: dimension mismatch");
  if (positions.empty()) throw std::invalid_argument("logistic: empty batch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  for (std::size_t pos : positions) accumulate_gradient(h, rows_.at(pos), out);
  out /= static_cast<double>(positions.size());
  return DualVector(std::move(out));
}

DualVector LogisticObjective::gradient(const Vector& h) const {
  if (h.dim() != dim()) throw std::invalid_argument("logistic: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  for (std::size_t row : rows_) accumulate_gradient(h, row, out);
  out /= static_cast<double>(rows_.size());
  return DualVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Reference solver

namespace {

double step_constant(const Objective& obj) { return obj.smoothness() > 0.0 ? obj.smoothness() : 1.0; }

}  // namespace

double stationarity_residual(const Objective& obj, const Vector& h) {
  const double lip = step_constant(obj);
  const Vector stepped(h.coords() - obj.gradient(h).coords() / lip);
  return lip * (h.coords() - obj.feasible_set().project(stepped).coords()).norm();
}

ReferencePoint solve_reference(const Objective& obj, double tol, std::size_t max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_reference: tol must be positive");
  const FeasibleSet& set = obj.feasible_set();
  const double lip = step_constant(obj);

  Vector x = set.project(set.center());
  Vector y = x;
  double momentum = 1.0;
  double best_residual = std::numeric_limits<double>::infinity();
  Vector best = x;

  for (std::size_t k = 0; k < max_iterations; ++k) {
    const double residual = stationarity_residual(obj, x);
    if (residual < best_residual) {
      best_residual = residual;
      best = x;
    }
    if (residual <= tol) return ReferencePoint{x, obj.value(x), residual, k};

    const Vector x_next =
        set.project(Vector(y.coords() - obj.gradient(y).coords() / lip));
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    // Gradient-based adaptive restart.
    const double restart_test = (y.coords() - x_next.coords()).dot(x_next.coords() - x.coords());
    if (restart_test > 0.0) {
      momentum = 1.0;
      y = x_next;
    } else {
      y = Vector(x_next.coords() + ((momentum - 1.0) / momentum_next) * (x_next.coords() - x.coords()));
      momentum = momentum_next;
    }
    x = x_next;
  }
  throw ConvergenceError("solve_reference: no convergence within iteration cap, best residual " +
                             std::to_string(best_residual),
                         best_residual);
}

}  // namespace anytime
