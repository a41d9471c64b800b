#ifndef ANYTIME_ORACLES_HPP
#define ANYTIME_ORACLES_HPP

#include "anytime/geometry.hpp"
#include "anytime/objectives.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace anytime {

/// Per-coordinate noise law. Every shipped family has a finite second moment;
/// StudentT and symmetrized Pareto are heavy-tailed beyond it.
struct NoiseSpec {
  enum class Family { Gaussian, StudentT, SymmetricPareto };

  Family family = Family::Gaussian;
  /// Degrees of freedom (StudentT) or tail index (SymmetricPareto). Ignored for Gaussian.
  double shape = 0.0;
  double scale = 0.0;

  static NoiseSpec gaussian(double scale) { return {Family::Gaussian, 0.0, scale}; }
  static NoiseSpec student_t(double dof, double scale) { return {Family::StudentT, dof, scale}; }
  static NoiseSpec symmetric_pareto(double tail, double scale) {
    return {Family::SymmetricPareto, tail, scale};
  }
};

/// sigma with E|G - E G|_2^2 <= sigma^2 for d i.i.d. coordinates of the given
/// noise. Throws std::invalid_argument when the second moment is infinite.
double certified_sigma(const NoiseSpec& noise, Index dim);

/// Variance of one unit-scale coordinate draw.
double unit_variance(const NoiseSpec& noise);

/// Draws one unit-scale coordinate.
double draw_unit_noise(const NoiseSpec& noise, std::mt19937_64& rng);

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t value);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Stochastic first-order oracle. Each instance owns its random stream and is
/// not safe to share between threads.
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;
  /// Stochastic gradient whose conditional mean is the true gradient at h.
  virtual DualVector query(const Vector& h) = 0;
  std::size_t queries() const { return queries_; }

 protected:
  std::size_t queries_ = 0;
};

/// Exact gradient plus i.i.d. per-coordinate noise.
class SyntheticOracle final : public GradientOracle {
 public:
  SyntheticOracle(const Objective& obj, NoiseSpec noise, std::uint64_t seed);

  DualVector query(const Vector& h) override;
  const NoiseSpec& noise() const { return noise_; }
  double sigma() const { return sigma_; }

 private:
  const Objective& obj_;
  NoiseSpec noise_;
  double sigma_;
  std::mt19937_64 rng_;
};

/// Mean of per-example gradients over consecutive batches of an epoch
/// permutation. The last batch of an epoch may be short, so one epoch takes
/// ceil(n / batch) queries.
class MiniBatchOracle final : public GradientOracle {
 public:
  MiniBatchOracle(const FiniteSumObjective& obj, std::size_t batch_size, bool shuffle,
                  std::uint64_t seed);

  /// Throws std::runtime_error when the epoch is exhausted and shuffle is off.
  DualVector query(const Vector& h) override;

  std::size_t batch_size() const { return batch_size_; }
  std::size_t steps_per_epoch() const;
  std::size_t epoch() const { return epoch_; }
  /// Positions consumed by the most recent query.
  std::span<const std::size_t> last_batch() const { return last_batch_; }
  const std::vector<std::size_t>& permutation() const { return order_; }

 private:
  void start_epoch();

  const FiniteSumObjective& obj_;
  std::size_t batch_size_;
  bool shuffle_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::size_t epoch_ = 0;
  std::span<const std::size_t> last_batch_;
};

}  // namespace anytime

#endif  // ANYTIME_ORACLES_HPP
