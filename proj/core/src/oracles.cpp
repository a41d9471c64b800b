#include "anytime/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace anytime {

double unit_variance(const NoiseSpec& noise) {
  switch (noise.family) {
    case NoiseSpec::Family::Gaussian:
      return 1.0;
    case NoiseSpec::Family::StudentT:
      if (!(noise.shape > 2.0)) throw std::invalid_argument("student-t noise needs dof > 2");
      return noise.shape / (noise.shape - 2.0);
    case NoiseSpec::Family::SymmetricPareto:
      // |X| ~ Pareto(a, x_m = 1): E X^2 = a / (a - 2).
      if (!(noise.shape > 2.0)) throw std::invalid_argument("pareto noise needs tail index > 2");
      return noise.shape / (noise.shape - 2.0);
  }
  return 0.0;
}

double certified_sigma(const NoiseSpec& noise, Index dim) {
  if (dim < 1) throw std::invalid_argument("certified_sigma: dimension must be >= 1");
  if (!(noise.scale >= 0.0)) throw std::invalid_argument("certified_sigma: scale must be >= 0");
  return noise.scale * std::sqrt(static_cast<double>(dim) * unit_variance(noise));
}

double draw_unit_noise(const NoiseSpec& noise, std::mt19937_64& rng) {
  switch (noise.family) {
    case NoiseSpec::Family::Gaussian: {
      std::normal_distribution<double> dist(0.0, 1.0);
      return dist(rng);
    }
    case NoiseSpec::Family::StudentT: {
      std::student_t_distribution<double> dist(noise.shape);
      return dist(rng);
    }
    case NoiseSpec::Family::SymmetricPareto: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double u = 1.0 - unit(rng);  // (0, 1]
      const double magnitude = std::pow(u, -1.0 / noise.shape);
      return unit(rng) < 0.5 ? -magnitude : magnitude;
    }
  }
  return 0.0;
}

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// ---------------------------------------------------------------------------

SyntheticOracle::SyntheticOracle(const Objective& obj, NoiseSpec noise, std::uint64_t seed)
    : obj_(obj), noise_(noise), sigma_(certified_sigma(noise, obj.dim())), rng_(seed) {}

DualVector SyntheticOracle::query(const Vector& h) {
  ++queries_;
  Eigen::VectorXd g = obj_.gradient(h).coords();
  if (noise_.scale > 0.0) {
    for (Index i = 0; i < g.size(); ++i) g[i] += noise_.scale * draw_unit_noise(noise_, rng_);
  }
  return DualVector(std::move(g));
}

// ---------------------------------------------------------------------------

MiniBatchOracle::MiniBatchOracle(const FiniteSumObjective& obj, std::size_t batch_size, bool shuffle,
                                 std::uint64_t seed)
    : obj_(obj), batch_size_(batch_size), shuffle_(shuffle), rng_(seed), order_(obj.example_count()) {
  if (batch_size_ == 0) throw std::invalid_argument("minibatch: batch size must be >= 1");
  if (order_.empty()) throw std::invalid_argument("minibatch: empty objective");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (shuffle_) std::shuffle(order_.begin(), order_.end(), rng_);
}

std::size_t MiniBatchOracle::steps_per_epoch() const {
  return (order_.size() + batch_size_ - 1) / batch_size_;
}

void MiniBatchOracle::start_epoch() {
  if (!shuffle_) throw std::runtime_error("minibatch: epoch exhausted and reshuffling is disabled");
  std::shuffle(order_.begin(), order_.end(), rng_);
  cursor_ = 0;
  ++epoch_;
}

DualVector MiniBatchOracle::query(const Vector& h) {
  if (cursor_ >= order_.size()) start_epoch();
  const std::size_t count = std::min(batch_size_, order_.size() - cursor_);
  last_batch_ = std::span<const std::size_t>(order_.data() + cursor_, count);
  cursor_ += count;
  ++queries_;
  return obj_.batch_gradient(h, last_batch_);
}

}  // namespace anytime
