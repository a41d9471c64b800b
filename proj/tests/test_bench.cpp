#include "anytime/bench/audit.hpp"
#include "anytime/bench/dataset_io.hpp"
#include "anytime/bench/experiment.hpp"
#include "anytime/bench/results_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace anytime;
using namespace anytime::bench;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "anytime_test_bench" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.trials = 2;
  c.epochs = 2;
  c.threads = 2;
  c.master_seed = 17;
  return c;
}

}  // namespace

TEST(Csv, ToyTable) {
  std::istringstream in("a,b,y\n1,2,cat\n3,4,dog\n5,6,cat\n");
  const Dataset d = parse_csv(in);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.input_dim(), 2);
  EXPECT_EQ(d.class_count, 2);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.model_dim(), 4);
}

TEST(Csv, MinMaxNormalization) {
  std::istringstream in("x,y\n2,0\n4,1\n6,0\n");
  const Dataset d = parse_csv(in);
  EXPECT_DOUBLE_EQ(d.features(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(d.features(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(d.features(2, 0), 1.0);
}

TEST(Csv, CategoricalOneHot) {
  std::istringstream in("color,size,y\nred,1,0\ngreen,2,1\nblue,3,0\nred,4,1\n");
  const Dataset d = parse_csv(in);
  EXPECT_EQ(d.input_dim(), 4);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"color=blue", "color=green", "color=red", "size"}));
  EXPECT_DOUBLE_EQ(d.features(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(d.features(0, 0) + d.features(0, 1), 0.0);
  for (Index i = 0; i < d.features.rows(); ++i) {
    EXPECT_DOUBLE_EQ(d.features.row(i).head(3).sum(), 1.0);
  }
}

TEST(Csv, MissingRowsDropped) {
  std::istringstream in("a,b,y\n1,?,0\n2,3,1\n,4,0\n5,6,0\nNA,1,1\n");
  const Dataset d = parse_csv(in);
  EXPECT_EQ(d.size(), 2u);
}

TEST(Csv, NumericLabelsSortedNumerically) {
  std::istringstream in("x,y\n1,10\n2,9\n3,10\n");
  const Dataset d = parse_csv(in);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0, 1}));
}

TEST(Csv, ShapeErrorCarriesLineNumber) {
  std::istringstream in("a,b,y\n1,2,0\n3,4\n");
  try {
    parse_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  CsvSchema strict;
  strict.auto_categorical = false;
  std::istringstream bad("a,y\n1,0\nx,1\n");
  try {
    parse_csv(bad, strict);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Csv, IgnoredAndLabelColumns) {
  std::istringstream in("y,id,x\n0,100,1\n1,200,3\n");
  CsvSchema schema;
  schema.label_column = 0;
  schema.ignored_columns = {1};
  const Dataset d = parse_csv(in, schema);
  EXPECT_EQ(d.input_dim(), 1);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"x"}));
}

TEST(Synthetic, SpecParsingAndShape) {
  const auto spec = parse_synthetic_spec("synthetic:n=500,k=4,d=6,contam=0.1,seed=3");
  EXPECT_EQ(spec.n, 500u);
  EXPECT_EQ(spec.classes, 4);
  EXPECT_EQ(spec.features, 6u);
  EXPECT_DOUBLE_EQ(spec.contamination, 0.1);
  const Dataset d = make_synthetic(spec);
  EXPECT_EQ(d.size(), 500u);
  EXPECT_EQ(d.input_dim(), 6);
  EXPECT_GE(d.features.minCoeff(), 0.0);
  EXPECT_LE(d.features.maxCoeff(), 1.0);
  EXPECT_THROW(parse_synthetic_spec("synthetic:bogus=1"), std::invalid_argument);
  EXPECT_THROW(parse_synthetic_spec("synthetic:k=1"), std::invalid_argument);
}

TEST(Split, Sizes) {
  for (std::size_t n : {5u, 10u, 101u, 10000u}) {
    const Split s = train_test_split(n, 0.8, 1);
    EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::floor(0.8 * double(n))));
    EXPECT_EQ(s.test.size(), n - s.train.size());
  }
}

TEST(Experiment, StepCountPerEpoch) {
  auto data = std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec("n=101,k=3,d=4,seed=1")));
  ExperimentConfig c;
  c.trials = 1;
  c.epochs = 1;
  const auto result = run_experiment(c, data);
  ASSERT_EQ(result.runs.size(), 3u);
  for (const auto& run : result.runs) {
    EXPECT_EQ(run.n_train, 80u);
    EXPECT_EQ(run.n_test, 21u);
    EXPECT_EQ(run.steps, 10u);
    EXPECT_NEAR(run.step_size, 2.0 / std::sqrt(80.0), 1e-15);
  }
  EXPECT_EQ(result.records.size(), 3u);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  auto data = std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec("n=400,k=3,d=5,seed=2")));
  auto c1 = small_config();
  c1.threads = 1;
  auto c2 = small_config();
  c2.threads = 4;
  const auto a = run_experiment(c1, data);
  const auto b = run_experiment(c2, data);
  EXPECT_EQ(a.records, b.records);
  std::ostringstream sa, sb;
  write_results_csv(sa, a.records);
  write_results_csv(sb, run_experiment(c1, data).records);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Experiment, OrderingAndMethodIsolation) {
  auto data = std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec("n=300,k=3,d=4,seed=4")));
  const auto result = run_experiment(small_config(), data);
  ASSERT_EQ(result.records.size(), 2u * 3u * 2u);
  std::size_t i = 0;
  for (std::size_t trial = 0; trial < 2; ++trial) {
    for (Method m : all_methods()) {
      for (std::size_t epoch = 1; epoch <= 2; ++epoch, ++i) {
        const auto& r = result.records[i];
        EXPECT_EQ(r.trial, trial);
        EXPECT_EQ(r.method, to_string(m));
        EXPECT_EQ(r.epoch, epoch);
        EXPECT_TRUE(std::isfinite(r.train_loss));
        EXPECT_GE(r.truncation_rate, 0.0);
        EXPECT_LE(r.truncation_rate, 1.0);
        if (m != Method::AnytimeRobustSgd) {
          EXPECT_EQ(r.truncation_rate, 0.0);
        }
        EXPECT_EQ(r.wall_time_ms, 0.0);
      }
    }
  }
}

TEST(Experiment, SeparableTwoClassBeatsUniform) {
  auto data = std::make_shared<const Dataset>(
      make_synthetic(parse_synthetic_spec("n=1000,k=2,d=4,sep=4,contam=0,seed=5")));
  ExperimentConfig c;
  c.trials = 1;
  c.epochs = 5;
  const auto result = run_experiment(c, data);
  for (const auto& r : result.records) {
    if (r.epoch == 5) {
      EXPECT_LT(r.train_loss, std::log(2.0)) << r.method;
    }
  }
}

TEST(Experiment, RobustTruncatesWithSmallThreshold) {
  // A tiny n_train gives a threshold below typical gradient deviations.
  auto data = std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec("n=10,k=3,d=3,seed=6")));
  ExperimentConfig c;
  c.trials = 1;
  c.epochs = 3;
  c.batch_size = 1;
  c.delta = 0.3;
  c.methods = {Method::AnytimeRobustSgd};
  c.anchor_refresh_epochs = 1;
  const auto result = run_experiment(c, data);
  EXPECT_EQ(result.records.size(), 3u);
  EXPECT_GT(result.runs[0].threshold, 0.0);
}

TEST(Experiment, ConfigJson) {
  ExperimentConfig c;
  apply_json_config(c, R"({"methods": ["sgd-ave"], "trials": 3, "epochs": 7, "batch": 4, "delta": 0.1,
                           "seed": 99, "step": 0.05, "anchor_refresh_epochs": 2})");
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::SgdAve}));
  EXPECT_EQ(c.trials, 3u);
  EXPECT_EQ(c.epochs, 7u);
  EXPECT_EQ(c.batch_size, 4u);
  EXPECT_EQ(c.master_seed, 99u);
  EXPECT_EQ(c.step, 0.05);
  EXPECT_THROW(apply_json_config(c, R"({"trials": 0})"), std::invalid_argument);
  EXPECT_THROW(apply_json_config(c, R"({"unknown": 1})"), std::invalid_argument);
  EXPECT_THROW(apply_json_config(c, R"({"method": "sgd"})"), std::invalid_argument);
}

TEST(Results, SingleRecordCsv) {
  const std::vector<ResultRecord> recs{{0, 1, "sgd-ave", 0.5, 0.625, 0.0, 0.0}};
  std::ostringstream out;
  write_results_csv(out, recs);
  EXPECT_EQ(out.str(),
            "trial,epoch,method,train_loss,test_loss,truncation_rate,wall_time_ms\n0,1,sgd-ave,0.5,0.625,0,0\n");
}

TEST(Results, TenSignificantDigits) {
  const std::vector<ResultRecord> recs{{0, 1, "m", 1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0}};
  std::ostringstream out;
  write_results_csv(out, recs);
  EXPECT_NE(out.str().find("0.3333333333,0.6666666667"), std::string::npos);
}

TEST(Results, RoundTripBothFormats) {
  const std::vector<ResultRecord> recs{{0, 1, "sgd-ave", 1.25, 1.5, 0.0, 0.0},
                                       {0, 2, "anytime-robust-sgd", 0.75, 0.8125, 0.125, 12.5},
                                       {1, 1, "sgd-ave", 1.0625, 1.125, 0.0, 3.0}};
  const auto dir = scratch("roundtrip");
  for (ResultFormat f : {ResultFormat::Csv, ResultFormat::Json}) {
    const auto path = dir / ("results" + extension(f));
    emit_results(recs, f, path);
    EXPECT_EQ(load_results(path), recs);
  }
}

TEST(Results, SummaryHasOneRowPerMethodEpoch) {
  std::vector<ResultRecord> recs;
  for (std::size_t trial = 0; trial < 3; ++trial) {
    for (const char* m : {"a", "b"}) {
      for (std::size_t epoch = 1; epoch <= 2; ++epoch) {
        recs.push_back({trial, epoch, m, double(trial), 1.0, 0.0, 0.0});
      }
    }
  }
  const auto dir = scratch("summary");
  const auto summary_path = emit_results(recs, ResultFormat::Csv, dir / "out.csv");
  EXPECT_EQ(summary_path.filename(), "out_summary.csv");
  const auto summary = load_results(summary_path);
  ASSERT_EQ(summary.size(), 4u);
  for (const auto& r : summary) {
    EXPECT_EQ(r.trial, 3u);
    EXPECT_DOUBLE_EQ(r.train_loss, 1.0);
  }
}

TEST(Results, EmptyRejected) {
  EXPECT_THROW(emit_results({}, ResultFormat::Csv, scratch("empty") / "x.csv"), std::invalid_argument);
}

TEST(Results, ByteIdenticalEmission) {
  auto data = std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec("n=200,k=3,d=3,seed=8")));
  const auto dir = scratch("bytes");
  emit_results(run_experiment(small_config(), data).records, ResultFormat::Json, dir / "a.json");
  emit_results(run_experiment(small_config(), data).records, ResultFormat::Json, dir / "b.json");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(slurp(dir / "a_summary.json"), slurp(dir / "b_summary.json"));
}

TEST(Audit, NoiselessCorollaryNeverExceeds) {
  AuditParams p;
  p.replications = 20;
  p.sigma = 0.0;
  p.seed = 3;
  const auto report = run_audit_campaign(AuditKind::CorollarySgd, p);
  EXPECT_EQ(report.failures, 0u);
  EXPECT_TRUE(report.passed);
}

TEST(Audit, SmallCampaignsPass) {
  AuditParams p;
  p.replications = 5;
  p.seed = 4;
  p.keep_trace = true;
  for (AuditKind k : {AuditKind::Lemma2, AuditKind::AnytimeIdentity, AuditKind::RegretSmd, AuditKind::RegretFtrl}) {
    const auto report = run_audit_campaign(k, p);
    EXPECT_TRUE(report.passed) << to_string(k);
    EXPECT_TRUE(report.trace.has_value()) << to_string(k);
  }
  EXPECT_EQ(parse_audit_kind("regret-ftrl"), AuditKind::RegretFtrl);
  EXPECT_THROW(parse_audit_kind("nope"), std::invalid_argument);
}

TEST(Audit, ReportIndependentOfThreads) {
  AuditParams p;
  p.replications = 2000;
  p.seed = 9;
  p.threads = 1;
  const auto a = run_audit_campaign(AuditKind::Bernstein, p);
  p.threads = 3;
  const auto b = run_audit_campaign(AuditKind::Bernstein, p);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.worst, b.worst);
}
