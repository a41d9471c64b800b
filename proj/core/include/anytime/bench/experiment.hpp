#ifndef ANYTIME_BENCH_EXPERIMENT_HPP
#define ANYTIME_BENCH_EXPERIMENT_HPP

#include "anytime/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace anytime::bench {

enum class Method { SgdAve, AnytimeSgd, AnytimeRobustSgd };

/// "sgd-ave", "anytime-sgd", "anytime-robust-sgd".
std::string to_string(Method m);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
Method parse_method(const std::string& name);
std::vector<Method> all_methods();

struct ExperimentConfig {
  std::vector<Method> methods = all_methods();
  std::size_t trials = 10;
  std::size_t epochs = 5;
  std::size_t batch_size = 8;
  double delta = 0.05;
  /// Constant step size; defaults to 2 / sqrt(n_train).
  std::optional<double> step;
  /// Initial weights are drawn uniformly from [-init_range, init_range].
  double init_range = 0.05;
  double split = 0.8;
  std::uint64_t master_seed = 0;
  /// Radius of the L2 ball around the origin that plays the role of the domain.
  double radius = 1e3;
  /// Re-anchor the truncation step at h_bar every K epochs; 0 disables.
  std::size_t anchor_refresh_epochs = 0;
  /// Measure wall time; otherwise wall_time_ms is written as 0.
  bool record_timing = false;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Overlays the fields present in a JSON object onto config. Keys mirror the
/// CLI flags: methods (array or string), trials, epochs, batch, delta, step,
/// init_range, split, seed, radius, anchor_refresh_epochs, record_timing,
/// threads. Unknown keys are rejected.
void apply_json_config(ExperimentConfig& config, const std::string& json_text);
void apply_json_config_file(ExperimentConfig& config, const std::filesystem::path& path);

struct ResultRecord {
  std::size_t trial = 0;
  std::size_t epoch = 0;
  std::string method;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double truncation_rate = 0.0;
  double wall_time_ms = 0.0;

  bool operator==(const ResultRecord&) const = default;
};

struct RunSummary {
  std::size_t trial = 0;
  Method method = Method::SgdAve;
  std::size_t steps = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double step_size = 0.0;
  /// Threshold of the truncation step; 0 for non-robust methods.
  double threshold = 0.0;
};

struct ExperimentResult {
  /// Ordered by (trial, method in config order, epoch).
  std::vector<ResultRecord> records;
  /// Ordered by (trial, method in config order).
  std::vector<RunSummary> runs;
};

/// Runs every (trial, method) pair of the protocol. Each pair draws its split,
/// initialization and batch order from seeds derived from
/// (master_seed, trial, method). Pairs run in parallel; the output order does
/// not depend on scheduling. Throws std::runtime_error on a non-finite loss.
ExperimentResult run_experiment(const ExperimentConfig& config, std::shared_ptr<const Dataset> data);

}  // namespace anytime::bench

#endif  // ANYTIME_BENCH_EXPERIMENT_HPP
