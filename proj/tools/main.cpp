#include "anytime/bench/audit.hpp"
#include "anytime/bench/dataset_io.hpp"
#include "anytime/bench/experiment.hpp"
#include "anytime/bench/results_io.hpp"
#include "anytime/bench/trace_io.hpp"
#include "anytime/bounds.hpp"
#include "anytime/robust_feedback.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace ab = anytime::bench;

namespace {

struct BenchArgs {
  std::string dataset;
  std::vector<std::string> methods;
  std::size_t trials = 0;
  std::size_t epochs = 0;
  std::size_t batch = 0;
  double delta = 0.0;
  double step = 0.0;
  std::uint64_t seed = 0;
  std::string out = "results";
  std::size_t anchor_refresh = 0;
  std::string config;
  std::string format = "csv";
  bool record_timing = false;
  std::size_t threads = 0;
};

int run_bench(const BenchArgs& args, CLI::App& cmd) {
  ab::ExperimentConfig config;
  if (!args.config.empty()) ab::apply_json_config_file(config, args.config);
  if (cmd.count("--method") > 0) {
    config.methods.clear();
    for (const auto& m : args.methods) config.methods.push_back(ab::parse_method(m));
  }
  if (cmd.count("--trials") > 0) config.trials = args.trials;
  if (cmd.count("--epochs") > 0) config.epochs = args.epochs;
  if (cmd.count("--batch") > 0) config.batch_size = args.batch;
  if (cmd.count("--delta") > 0) config.delta = args.delta;
  if (cmd.count("--step") > 0) config.step = args.step;
  if (cmd.count("--seed") > 0) config.master_seed = args.seed;
  if (cmd.count("--anchor-refresh-epochs") > 0) config.anchor_refresh_epochs = args.anchor_refresh;
  if (cmd.count("--threads") > 0) config.threads = args.threads;
  if (args.record_timing) config.record_timing = true;
  config.validate();

  const auto format = ab::parse_result_format(args.format);
  const auto data = ab::load_dataset(args.dataset);
  std::cerr << "dataset: n=" << data->size() << " d_in=" << data->input_dim() << " k=" << data->class_count
            << " d=" << data->model_dim() << '\n';
  const ab::ExperimentResult result = ab::run_experiment(config, data);

  const std::filesystem::path path = std::filesystem::path(args.out) / ("results" + ab::extension(format));
  const auto summary_path = ab::emit_results(result.records, format, path);
  std::cout << "wrote " << path.string() << " and " << summary_path.string() << '\n';
  std::printf("%-20s %6s %12s %12s %10s\n", "method", "epoch", "train_loss", "test_loss", "trunc");
  for (const auto& r : ab::summarize(result.records)) {
    std::printf("%-20s %6zu %12.6f %12.6f %10.4f\n", r.method.c_str(), r.epoch, r.train_loss, r.test_loss,
                r.truncation_rate);
  }
  return 0;
}

struct AuditArgs {
  std::string kind;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  double delta = 0.05;
  double sigma = 0.1;
  std::string trace_out;
  std::size_t threads = 0;
};

int run_audit(const AuditArgs& args) {
  ab::AuditParams params;
  params.replications = args.replications;
  params.seed = args.seed;
  params.horizon = args.horizon;
  params.delta = args.delta;
  params.sigma = args.sigma;
  params.threads = args.threads;
  params.keep_trace = !args.trace_out.empty();
  const auto report = ab::run_audit_campaign(ab::parse_audit_kind(args.kind), params);
  std::printf("kind          %s\n", ab::to_string(report.kind).c_str());
  std::printf("replications  %zu\n", report.replications);
  std::printf("failures      %zu\n", report.failures);
  std::printf("frequency     %.6g  (95%% CI [%.6g, %.6g])\n", report.frequency, report.ci_low, report.ci_high);
  std::printf("allowed       %.6g  (nominal %.6g + 3 SE %.6g)\n", report.allowed, report.nominal,
              report.standard_error);
  if (report.bound != 0.0) std::printf("bound         %.6g\n", report.bound);
  std::printf("worst         %.6g\n", report.worst);
  std::printf("result        %s\n", report.passed ? "PASS" : "FAIL");
  if (report.trace) {
    ab::write_trace(*report.trace, args.trace_out);
    std::printf("trace         %s\n", args.trace_out.c_str());
  }
  return report.passed ? 0 : 1;
}

struct BoundsArgs {
  double diameter = 0.0;
  double sigma = 0.0;
  double smoothness = 0.0;
  double delta = 0.05;
  std::size_t horizon = 0;
  double beta = 0.0;
  std::string weights = "constant";
};

int run_bounds(const BoundsArgs& args) {
  if (args.weights != "constant") throw std::invalid_argument("only --weights constant is supported");
  const auto in = anytime::BoundInputs::constant(args.diameter, args.sigma, args.smoothness, args.delta,
                                                 args.horizon, args.beta);
  const double q = anytime::q_delta(in);
  const double r = anytime::r_delta(in);
  std::printf("%-22s %.10g\n", "q_delta", q);
  std::printf("%-22s %.10g\n", "r_delta", r);
  std::printf("%-22s %.10g\n", "max(q,r)", std::max(q, r));
  try {
    std::printf("%-22s %.10g\n", "c0",
                anytime::lemma2_c0(args.smoothness, args.diameter, args.sigma, args.horizon, args.delta, 0.0));
  } catch (const std::invalid_argument& e) {
    std::printf("%-22s n/a (%s)\n", "c0", e.what());
  }
  if (args.beta > 0.0) {
    try {
      std::printf("%-22s %.10g\n", "sgd_excess_bound", anytime::sgd_excess_bound(in));
    } catch (const std::invalid_argument& e) {
      std::printf("%-22s n/a (%s)\n", "sgd_excess_bound", e.what());
    }
    try {
      std::printf("%-22s %.10g\n", "smd_excess_bound", anytime::smd_excess_bound(in));
    } catch (const std::invalid_argument& e) {
      std::printf("%-22s n/a (%s)\n", "smd_excess_bound", e.what());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime online-to-batch conversion: benchmarks, audits and bounds"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the logistic regression benchmark");
  bench_cmd->add_option("--dataset", bench.dataset, "CSV path or synthetic:<key=value,...>")->required();
  bench_cmd->add_option("--method", bench.methods, "sgd-ave, anytime-sgd, anytime-robust-sgd (repeatable)");
  bench_cmd->add_option("--trials", bench.trials, "Independent trials");
  bench_cmd->add_option("--epochs", bench.epochs, "Passes over the training data");
  bench_cmd->add_option("--batch", bench.batch, "Mini-batch size");
  bench_cmd->add_option("--delta", bench.delta, "Confidence parameter");
  bench_cmd->add_option("--step", bench.step, "Constant step size (default 2/sqrt(n_train))");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();
  bench_cmd->add_option("--anchor-refresh-epochs", bench.anchor_refresh, "Re-anchor every K epochs (0 = off)");
  bench_cmd->add_option("--config", bench.config, "JSON config file; flags override it");
  bench_cmd->add_option("--format", bench.format, "csv or json")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_flag("--record-timing", bench.record_timing, "Write measured wall time instead of 0");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Run a Monte Carlo or identity audit campaign");
  audit_cmd
      ->add_option("--kind", audit.kind,
                   "corollary-sgd, lemma2, bernstein, anytime-identity, regret-smd, regret-ftrl")
      ->required();
  audit_cmd->add_option("--replications", audit.replications, "Replications (0 = kind default)");
  audit_cmd->add_option("--seed", audit.seed, "Master seed");
  audit_cmd->add_option("--T", audit.horizon, "Horizon (0 = kind default)");
  audit_cmd->add_option("--delta", audit.delta, "Confidence parameter")->capture_default_str();
  audit_cmd->add_option("--sigma", audit.sigma, "Certified noise level")->capture_default_str();
  audit_cmd->add_option("--trace-out", audit.trace_out, "Write the trace of replication 0 as JSON");
  audit_cmd->add_option("--threads", audit.threads, "Worker threads (0 = all cores)");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the closed-form guarantees");
  bounds_cmd->add_option("--D", bounds.diameter, "Diameter")->required();
  bounds_cmd->add_option("--sigma", bounds.sigma, "Noise level")->required();
  bounds_cmd->add_option("--lambda", bounds.smoothness, "Smoothness")->required();
  bounds_cmd->add_option("--delta", bounds.delta, "Confidence parameter")->capture_default_str();
  bounds_cmd->add_option("--T", bounds.horizon, "Horizon")->required();
  bounds_cmd->add_option("--beta", bounds.beta, "Constant step size");
  bounds_cmd->add_option("--weights", bounds.weights, "Weight sequence (constant)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*bench_cmd) return run_bench(bench, *bench_cmd);
    if (*audit_cmd) return run_audit(audit);
    if (*bounds_cmd) return run_bounds(bounds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
