#include "anytime/bench/audit.hpp"

#include "anytime/bounds.hpp"
#include "anytime/learners.hpp"
#include "anytime/oracles.hpp"
#include "anytime/robust_feedback.hpp"
#include "parallel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace anytime::bench {

std::string to_string(AuditKind kind) {
  switch (kind) {
    case AuditKind::CorollarySgd:
      return "corollary-sgd";
    case AuditKind::Lemma2:
      return "lemma2";
    case AuditKind::Bernstein:
      return "bernstein";
    case AuditKind::AnytimeIdentity:
      return "anytime-identity";
    case AuditKind::RegretSmd:
      return "regret-smd";
    case AuditKind::RegretFtrl:
      return "regret-ftrl";
  }
  return "unknown";
}

AuditKind parse_audit_kind(const std::string& name) {
  for (AuditKind k : {AuditKind::CorollarySgd, AuditKind::Lemma2, AuditKind::Bernstein, AuditKind::AnytimeIdentity,
                      AuditKind::RegretSmd, AuditKind::RegretFtrl}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown audit kind '" + name + "'");
}

QuadraticObjective random_quadratic(Index dim, double lambda_max, FeasibleSet set, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_quadratic: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spectrum(0.1, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = normal(rng);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd eig(dim);
  eig[0] = 1.0;
  for (Index i = 1; i < dim; ++i) eig[i] = spectrum(rng);
  Eigen::MatrixXd a = lambda_max * q * eig.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::VectorXd b(dim);
  for (Index i = 0; i < dim; ++i) b[i] = normal(rng);
  return QuadraticObjective(std::move(a), Vector(b), std::move(set));
}

namespace {

constexpr double kSolveTol = 1e-12;

std::size_t default_replications(AuditKind kind) {
  switch (kind) {
    case AuditKind::CorollarySgd:
    case AuditKind::Lemma2:
      return 1000;
    case AuditKind::Bernstein:
      return 100000;
    case AuditKind::AnytimeIdentity:
      return 100;
    case AuditKind::RegretSmd:
    case AuditKind::RegretFtrl:
      return 20;
  }
  return 1;
}

std::size_t default_horizon(AuditKind kind) {
  switch (kind) {
    case AuditKind::CorollarySgd:
    case AuditKind::Lemma2:
      return 500;
    case AuditKind::Bernstein:
    case AuditKind::RegretSmd:
    case AuditKind::RegretFtrl:
      return 100;
    case AuditKind::AnytimeIdentity:
      return 50;
  }
  return 1;
}

struct Outcome {
  bool failed = false;
  double value = 0.0;
};

void finalize(AuditReport& report, const std::vector<Outcome>& outcomes, bool worst_is_max) {
  report.replications = outcomes.size();
  report.failures = static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) {
    return o.failed;
  }));
  const auto m = static_cast<double>(outcomes.size());
  report.frequency = static_cast<double>(report.failures) / m;
  report.standard_error = std::sqrt(report.nominal * (1.0 - report.nominal) / m);
  report.allowed = report.nominal + 3.0 * report.standard_error;
  const double z = 1.959963984540054;
  const double p = report.frequency;
  const double denom = 1.0 + z * z / m;
  const double centre = (p + z * z / (2.0 * m)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / m + z * z / (4.0 * m * m)) / denom;
  report.ci_low = report.failures == 0 ? 0.0 : std::max(0.0, centre - half);
  report.ci_high = std::min(1.0, centre + half);
  report.worst = worst_is_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    report.worst = worst_is_max ? std::max(report.worst, o.value) : std::min(report.worst, o.value);
  }
  report.passed = report.nominal > 0.0 ? report.frequency <= report.allowed : report.failures == 0;
}

// Projected SGD through the anytime loop on a quadratic over the unit ball,
// with Student-t(2.5) noise, an exact anchor at h_1 and the smooth threshold.
struct CoverageSetup {
  static constexpr Index kDim = 3;
  static constexpr double kSmoothness = 1.0;
  static constexpr double kTailDof = 2.5;

  CoverageSetup(const AuditParams& params, std::size_t horizon)
      : objective(random_quadratic(kDim, kSmoothness, FeasibleSet::l2_ball(Vector::zeros(kDim), 1.0),
                                   derive_seed(params.seed, 0))),
        reference(solve_reference(objective, kSolveTol)),
        diameter(objective.feasible_set().diameter()),
        noise(NoiseSpec::student_t(kTailDof, 0.0)),
        horizon(horizon),
        delta(params.delta) {
    const double unit_sigma = certified_sigma(NoiseSpec::student_t(kTailDof, 1.0), kDim);
    noise.scale = params.sigma / unit_sigma;
    sigma = certified_sigma(noise, kDim);
    step = 1.0 / kSmoothness;
    c0 = lemma2_c0(kSmoothness, diameter, sigma, horizon, delta, 0.0);
    BoundInputs in = BoundInputs::constant(diameter, sigma, kSmoothness, delta, horizon, step);
    excess_bound = sgd_excess_bound(in);
    error_bound = std::max(q_delta(in), r_delta(in));
  }

  RunTrace replicate(std::uint64_t seed) const {
    const FeasibleSet& set = objective.feasible_set();
    MirrorDescentLearner learner(set, MirrorMap::euclidean(), StepSchedule::constant(step), set.center());
    SyntheticOracle oracle(objective, noise, seed);
    const Anchor anchor = build_anchor(AnchorStrategy::Exact, objective, learner.current(), delta);
    RobustFeedback robust{anchor, ThresholdSchedule::smooth_theory(0.0, kSmoothness, c0), Norm::L2};
    const std::vector<double> weights = constant_weights(horizon);
    return run(learner, oracle, weights, robust, horizon);
  }

  QuadraticObjective objective;
  ReferencePoint reference;
  double diameter;
  NoiseSpec noise;
  double sigma = 0.0;
  double step = 1.0;
  double c0 = 0.0;
  std::size_t horizon;
  double delta;
  double excess_bound = 0.0;
  double error_bound = 0.0;
};

AuditReport coverage_campaign(AuditKind kind, const AuditParams& params, std::size_t m, std::size_t horizon) {
  const CoverageSetup setup(params, horizon);
  AuditReport report;
  report.kind = kind;
  report.nominal = 2.0 * params.delta;
  report.bound = kind == AuditKind::CorollarySgd ? setup.excess_bound : setup.error_bound;
  std::vector<Outcome> outcomes(m);
  std::optional<RunTrace> first;
  detail::parallel_for(m, params.threads, [&](std::size_t r) {
    RunTrace trace = setup.replicate(derive_seed(params.seed, 1, r));
    double measured = 0.0;
    if (kind == AuditKind::CorollarySgd) {
      measured = setup.objective.value(trace.final_h_bar) - setup.reference.value;
    } else {
      measured = weighted_gradient_error(trace, setup.objective, horizon);
    }
    outcomes[r] = {measured > report.bound, measured / report.bound};
    if (r == 0 && params.keep_trace) first = std::move(trace);
  });
  finalize(report, outcomes, true);
  report.trace = std::move(first);
  return report;
}

AuditReport bernstein_campaign(const AuditParams& params, std::size_t m, std::size_t horizon) {
  if (!(params.bound > 0.0) || !(params.gamma1 > 0.0)) {
    throw std::invalid_argument("bernstein audit: bound and gamma1 must be positive");
  }
  AuditReport report;
  report.kind = AuditKind::Bernstein;
  report.nominal = std::exp(-params.gamma1);
  // Uniform[-B, B] differences: each conditional variance is B^2 / 3, so the
  // variance event holds with gamma_2 = T B^2 / 3.
  const BernsteinParams bp{params.gamma1, static_cast<double>(horizon) * params.bound * params.bound / 3.0,
                           params.bound};
  report.bound = bernstein_deviation(bp);
  std::vector<Outcome> outcomes(m);
  const std::size_t chunk = 1000;
  const std::size_t chunks = (m + chunk - 1) / chunk;
  detail::parallel_for(chunks, params.threads, [&](std::size_t c) {
    for (std::size_t r = c * chunk; r < std::min(m, (c + 1) * chunk); ++r) {
      std::mt19937_64 rng(derive_seed(params.seed, 1, r));
      std::uniform_real_distribution<double> unif(-params.bound, params.bound);
      double partial = 0.0;
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < horizon; ++t) {
        partial += unif(rng);
        peak = std::max(peak, partial);
      }
      outcomes[r] = {peak > report.bound, peak / report.bound};
    }
  });
  finalize(report, outcomes, true);
  return report;
}

AuditReport identity_campaign(const AuditParams& params, std::size_t m, std::size_t horizon) {
  constexpr Index kDim = 5;
  AuditReport report;
  report.kind = AuditKind::AnytimeIdentity;
  std::vector<Outcome> outcomes(m);
  std::optional<RunTrace> first;
  detail::parallel_for(m, params.threads, [&](std::size_t r) {
    const std::uint64_t base = derive_seed(params.seed, 1, r);
    const QuadraticObjective obj =
        random_quadratic(kDim, 1.0, FeasibleSet::l2_ball(Vector::zeros(kDim), 1.0), derive_seed(base, 0));
    std::mt19937_64 rng(derive_seed(base, 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weights(horizon + 1);
    for (double& a : weights) a = 2.0 * (1.0 - unit(rng));  // (0, 2]
    const FeasibleSet& set = obj.feasible_set();
    MirrorDescentLearner learner(set, MirrorMap::euclidean(), StepSchedule::constant(0.5), set.center());
    SyntheticOracle oracle(obj, NoiseSpec::gaussian(0.3), derive_seed(base, 2));
    RunTrace trace = run(learner, oracle, weights, std::nullopt, horizon);
    const ReferencePoint ref = solve_reference(obj, kSolveTol);
    const AnytimeAudit audit = anytime_identity_audit(trace, obj, ref.h_star);
    const double scale = 1.0 + std::abs(audit.lhs);
    const double err = std::max(std::abs(audit.lhs - audit.rhs), std::abs(audit.lhs - audit.decomposition)) / scale;
    outcomes[r] = {err > params.tolerance, err};
    if (r == 0 && params.keep_trace) first = std::move(trace);
  });
  finalize(report, outcomes, true);
  report.trace = std::move(first);
  return report;
}

AuditReport smd_campaign(const AuditParams& params, std::size_t m, std::size_t horizon) {
  constexpr Index kDim = 5;
  AuditReport report;
  report.kind = AuditKind::RegretSmd;
  // Each replication audits both mirror maps.
  std::vector<Outcome> outcomes(m);
  std::optional<RunTrace> first;
  detail::parallel_for(m, params.threads, [&](std::size_t r) {
    const std::uint64_t base = derive_seed(params.seed, 1, r);
    double worst = std::numeric_limits<double>::infinity();
    for (int which = 0; which < 2; ++which) {
      const bool entropy = which == 1;
      const FeasibleSet set =
          entropy ? FeasibleSet::simplex(kDim) : FeasibleSet::l2_ball(Vector::zeros(kDim), 1.0);
      const MirrorMap map = entropy ? MirrorMap::negative_entropy() : MirrorMap::euclidean();
      const QuadraticObjective obj = random_quadratic(kDim, 1.0, set, derive_seed(base, 0, which));
      std::mt19937_64 rng(derive_seed(base, 1, which));
      std::uniform_real_distribution<double> step(0.05, 1.0);
      MirrorDescentLearner learner(set, map, StepSchedule::constant(step(rng)), set.center());
      SyntheticOracle oracle(obj, NoiseSpec::gaussian(0.3), derive_seed(base, 2, which));
      RunTrace trace = run(learner, oracle, constant_weights(horizon), std::nullopt, horizon);
      const ReferencePoint ref = solve_reference(obj, kSolveTol);
      for (double s : smd_regret_slacks(trace, obj, map, ref.h_star)) worst = std::min(worst, s);
      if (r == 0 && !entropy && params.keep_trace) first = std::move(trace);
    }
    outcomes[r] = {worst < -params.tolerance, worst};
  });
  finalize(report, outcomes, false);
  report.trace = std::move(first);
  return report;
}

AuditReport ftrl_campaign(const AuditParams& params, std::size_t m, std::size_t horizon) {
  constexpr Index kDim = 5;
  AuditReport report;
  report.kind = AuditKind::RegretFtrl;
  std::vector<Outcome> outcomes(m);
  std::optional<RunTrace> first;
  detail::parallel_for(m, params.threads, [&](std::size_t r) {
    const std::uint64_t base = derive_seed(params.seed, 1, r);
    double worst = std::numeric_limits<double>::infinity();
    for (int which = 0; which < 2; ++which) {
      const FeasibleSet set = FeasibleSet::l2_ball(Vector::zeros(kDim), 1.0);
      const QuadraticObjective obj = random_quadratic(kDim, 1.0, set, derive_seed(base, 0, which));
      const RegularizerSchedule regs =
          which == 0 ? RegularizerSchedule::constant(2.0) : RegularizerSchedule::sqrt_growth(1.0);
      FtrlLearner learner(set, regs);
      SyntheticOracle oracle(obj, NoiseSpec::gaussian(0.3), derive_seed(base, 2, which));
      RunTrace trace = run(learner, oracle, constant_weights(horizon), std::nullopt, horizon);
      const ReferencePoint ref = solve_reference(obj, kSolveTol);
      for (std::size_t t = 1; t <= horizon; ++t) {
        worst = std::min(worst, ftrl_regret_check(trace, obj, set, regs, ref.h_star, t).slack());
      }
      if (r == 0 && which == 0 && params.keep_trace) first = std::move(trace);
    }
    outcomes[r] = {worst < -params.tolerance, worst};
  });
  finalize(report, outcomes, false);
  report.trace = std::move(first);
  return report;
}

}  // namespace

AuditReport run_audit_campaign(AuditKind kind, const AuditParams& params) {
  if (!(params.delta > 0.0 && params.delta < 1.0)) throw std::invalid_argument("audit: delta must be in (0,1)");
  const std::size_t m = params.replications != 0 ? params.replications : default_replications(kind);
  const std::size_t horizon = params.horizon != 0 ? params.horizon : default_horizon(kind);
  switch (kind) {
    case AuditKind::CorollarySgd:
    case AuditKind::Lemma2:
      return coverage_campaign(kind, params, m, horizon);
    case AuditKind::Bernstein:
      return bernstein_campaign(params, m, horizon);
    case AuditKind::AnytimeIdentity:
      return identity_campaign(params, m, horizon);
    case AuditKind::RegretSmd:
      return smd_campaign(params, m, horizon);
    case AuditKind::RegretFtrl:
      return ftrl_campaign(params, m, horizon);
  }
  throw std::invalid_argument("audit: unknown kind");
}

}  // namespace anytime::bench
