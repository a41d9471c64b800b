#ifndef ANYTIME_BOUNDS_HPP
#define ANYTIME_BOUNDS_HPP

#include <cstddef>
#include <vector>

namespace anytime {

/// Constants consumed by the closed-form guarantees. weights and steps are
/// alpha_1..alpha_T and beta_1..beta_T; steps may be empty for the pure
/// concentration terms.
struct BoundInputs {
  double diameter = 0.0;
  double sigma = 0.0;
  double smoothness = 0.0;
  double delta = 0.05;
  std::size_t horizon = 0;
  std::vector<double> weights;
  std::vector<double> steps;
  /// sup of the mirror map's Bregman divergence over the feasible set.
  double bregman_diameter = 0.0;
  double strong_convexity = 1.0;

  /// alpha = 1 and beta = step for every t in [T].
  static BoundInputs constant(double diameter, double sigma, double smoothness, double delta,
                              std::size_t horizon, double step = 0.0);

  /// Throws std::invalid_argument if delta is outside (0,1), a scale is
  /// negative, or the sequences do not have length T.
  void validate() const;
};

/// 2 D sigma sqrt(2 log(1/delta)) [alpha_{1:T}/sqrt(T) + sqrt(sum alpha_t^2) + 2 max alpha_t].
double q_delta(const BoundInputs& in);

/// 2 lambda D^2 log(1/delta) [alpha_{1:T}/T + sqrt(sum alpha_t^2 / T) + 2 sqrt(2) max alpha_t].
double r_delta(const BoundInputs& in);

/// 2 D^2 / (T beta_T) + max{8 D sigma sqrt(2 log(1/delta) / T), 12 lambda D^2 log(1/delta) / T}.
/// Requires alpha = 1 and beta_t <= 1/lambda for all t.
double sgd_excess_bound(const BoundInputs& in);

/// (1/alpha_{1:T}) [(alpha_T / beta_T) D_Phi + max{q_delta, r_delta}]. Requires
/// beta_t <= s/lambda and alpha_t/alpha_{t-1} >= beta_t/beta_{t-1}.
double smd_excess_bound(const BoundInputs& in);

/// Bregman diameter used by the projected-SGD corollary: 2 D^2.
double sgd_bregman_diameter(double diameter);

struct BernsteinParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  /// Uniform bound on |V_t|.
  double bound = 0.0;
};

/// sqrt(2 gamma1 gamma2) + (sqrt(2)/3) B gamma1.
double bernstein_deviation(const BernsteinParams& p);

}  // namespace anytime

#endif  // ANYTIME_BOUNDS_HPP
