#include "anytime/bench/experiment.hpp"

#include "anytime/bench/dataset_io.hpp"
#include "anytime/conversion.hpp"
#include "anytime/learners.hpp"
#include "anytime/objectives.hpp"
#include "anytime/oracles.hpp"
#include "anytime/robust_feedback.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace anytime::bench {

std::string to_string(Method m) {
  switch (m) {
    case Method::SgdAve:
      return "sgd-ave";
    case Method::AnytimeSgd:
      return "anytime-sgd";
    case Method::AnytimeRobustSgd:
      return "anytime-robust-sgd";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "' (expected sgd-ave, anytime-sgd or anytime-robust-sgd)");
}

std::vector<Method> all_methods() { return {Method::SgdAve, Method::AnytimeSgd, Method::AnytimeRobustSgd}; }

void ExperimentConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("config: at least one method is required");
  if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  if (epochs == 0) throw std::invalid_argument("config: epochs must be >= 1");
  if (batch_size == 0) throw std::invalid_argument("config: batch size must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must be in (0,1)");
  if (step && !(*step > 0.0 && std::isfinite(*step))) throw std::invalid_argument("config: step must be positive");
  if (!(init_range >= 0.0)) throw std::invalid_argument("config: init_range must be nonnegative");
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("config: split must be in (0,1)");
  if (!(radius > 0.0)) throw std::invalid_argument("config: radius must be positive");
}

void apply_json_config(ExperimentConfig& config, const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "methods" || key == "method") {
        config.methods.clear();
        if (v.is_array()) {
          for (const auto& m : v) config.methods.push_back(parse_method(m.get<std::string>()));
        } else {
          config.methods.push_back(parse_method(v.get<std::string>()));
        }
      } else if (key == "trials") {
        config.trials = v.get<std::size_t>();
      } else if (key == "epochs") {
        config.epochs = v.get<std::size_t>();
      } else if (key == "batch" || key == "batch_size") {
        config.batch_size = v.get<std::size_t>();
      } else if (key == "delta") {
        config.delta = v.get<double>();
      } else if (key == "step") {
        if (v.is_null()) {
          config.step.reset();
        } else {
          config.step = v.get<double>();
        }
      } else if (key == "init_range") {
        config.init_range = v.get<double>();
      } else if (key == "split") {
        config.split = v.get<double>();
      } else if (key == "seed" || key == "master_seed") {
        config.master_seed = v.get<std::uint64_t>();
      } else if (key == "radius") {
        config.radius = v.get<double>();
      } else if (key == "anchor_refresh_epochs") {
        config.anchor_refresh_epochs = v.get<std::size_t>();
      } else if (key == "record_timing") {
        config.record_timing = v.get<bool>();
      } else if (key == "threads") {
        config.threads = v.get<std::size_t>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  config.validate();
}

void apply_json_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_json_config(config, buffer.str());
}

namespace {

struct Job {
  std::size_t trial;
  std::size_t method_index;
};

struct JobOutput {
  std::vector<ResultRecord> records;
  RunSummary summary;
};

double checked(double loss, const char* which, std::size_t trial, Method method, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite " << which << " loss in trial " << trial << ", method " << to_string(method) << ", epoch "
        << epoch;
    throw std::runtime_error(msg.str());
  }
  return loss;
}

JobOutput run_job(const ExperimentConfig& config, const std::shared_ptr<const Dataset>& data, const Job& job) {
  using Clock = std::chrono::steady_clock;
  const Method method = config.methods[job.method_index];
  const auto method_tag = static_cast<std::uint64_t>(method) + 1;
  const std::uint64_t job_seed = derive_seed(config.master_seed, job.trial, method_tag);

  const Split split = train_test_split(data->size(), config.split, derive_seed(job_seed, 1));
  if (split.train.empty() || split.test.empty()) throw std::invalid_argument("experiment: split leaves an empty side");

  const Index d = data->model_dim();
  const FeasibleSet domain = FeasibleSet::l2_ball(Vector::zeros(d), config.radius);
  LogisticObjective train(data, split.train, domain);
  LogisticObjective test(data, split.test, domain);

  std::mt19937_64 init_rng(derive_seed(job_seed, 2));
  std::uniform_real_distribution<double> init(-config.init_range, config.init_range);
  Eigen::VectorXd h1_coords(d);
  for (Index i = 0; i < d; ++i) h1_coords[i] = init(init_rng);
  const Vector h1 = domain.project(Vector(h1_coords));

  const double beta = config.step.value_or(2.0 / std::sqrt(static_cast<double>(split.train.size())));
  MirrorDescentLearner learner(domain, MirrorMap::euclidean(), StepSchedule::constant(beta), h1);
  MiniBatchOracle oracle(train, config.batch_size, true, derive_seed(job_seed, 3));

  const std::size_t per_epoch = oracle.steps_per_epoch();
  const std::size_t total = per_epoch * config.epochs;

  std::optional<RobustFeedback> robust;
  if (method == Method::AnytimeRobustSgd) {
    robust = RobustFeedback{build_anchor(AnchorStrategy::ExperimentDefault, train, h1, config.delta),
                            ThresholdSchedule::heuristic_for(split.train.size(), config.delta), Norm::L2};
  }
  RunOptions options;
  options.query_at = method == Method::SgdAve ? QueryPoint::Ancillary : QueryPoint::Main;
  AnytimeConversion loop(learner, oracle, constant_weights(total + 1), robust, options);

  JobOutput out;
  out.summary = RunSummary{job.trial, method, total, split.train.size(), split.test.size(), beta,
                           robust ? robust->schedule.constant() : 0.0};
  const auto start = Clock::now();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::size_t truncated = 0;
    for (std::size_t k = 0; k < per_epoch; ++k) {
      if (loop.step().truncated) ++truncated;
    }
    const Vector& model = loop.state().h_bar;
    ResultRecord rec;
    rec.trial = job.trial;
    rec.epoch = epoch;
    rec.method = to_string(method);
    rec.train_loss = checked(train.value(model), "train", job.trial, method, epoch);
    rec.test_loss = checked(test.value(model), "test", job.trial, method, epoch);
    rec.truncation_rate = static_cast<double>(truncated) / static_cast<double>(per_epoch);
    if (config.record_timing) {
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    out.records.push_back(std::move(rec));

    if (robust && config.anchor_refresh_epochs > 0 && epoch % config.anchor_refresh_epochs == 0) {
      loop.set_anchor(build_anchor(AnchorStrategy::ExperimentDefault, train, model, config.delta));
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, std::shared_ptr<const Dataset> data) {
  config.validate();
  if (!data) throw std::invalid_argument("run_experiment: no dataset");
  data->validate();

  std::vector<Job> jobs;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) jobs.push_back({trial, m});
  }
  std::vector<JobOutput> outputs(jobs.size());
  detail::parallel_for(jobs.size(), config.threads,
                       [&](std::size_t i) { outputs[i] = run_job(config, data, jobs[i]); });

  ExperimentResult result;
  for (auto& out : outputs) {
    result.records.insert(result.records.end(), out.records.begin(), out.records.end());
    result.runs.push_back(out.summary);
  }
  return result;
}

}  // namespace anytime::bench
