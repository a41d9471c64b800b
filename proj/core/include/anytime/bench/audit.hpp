#ifndef ANYTIME_BENCH_AUDIT_HPP
#define ANYTIME_BENCH_AUDIT_HPP

#include "anytime/conversion.hpp"
#include "anytime/objectives.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anytime::bench {

enum class AuditKind { CorollarySgd, Lemma2, Bernstein, AnytimeIdentity, RegretSmd, RegretFtrl };

/// "corollary-sgd", "lemma2", "bernstein", "anytime-identity", "regret-smd", "regret-ftrl".
std::string to_string(AuditKind kind);
AuditKind parse_audit_kind(const std::string& name);

struct AuditParams {
  /// 0 selects the kind's default (1000, 1000, 100000, 100, 20, 20).
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  /// 0 selects the kind's default horizon (500, 500, 100, 50, 100, 100).
  std::size_t horizon = 0;
  double delta = 0.05;
  /// Certified noise level of the synthetic oracle for the coverage campaigns.
  double sigma = 0.1;
  /// Bernstein campaign: gamma_1 and the bound B on |V_t|.
  double gamma1 = 3.0;
  double bound = 1.0;
  /// Tolerance of the deterministic identity/inequality audits.
  double tolerance = 1e-9;
  /// Keep the trace of replication 0 in the report.
  bool keep_trace = false;
  /// 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

struct AuditReport {
  AuditKind kind = AuditKind::CorollarySgd;
  std::size_t replications = 0;
  /// Replications in which the audited event failed (bound exceeded, or the
  /// identity/inequality violated beyond tolerance).
  std::size_t failures = 0;
  double frequency = 0.0;
  /// Binomial standard error at the nominal failure probability.
  double standard_error = 0.0;
  /// Nominal failure probability: 2 delta, exp(-gamma_1), or 0 for the
  /// deterministic audits.
  double nominal = 0.0;
  /// nominal + 3 standard_error.
  double allowed = 0.0;
  /// 95% Wilson interval for the failure frequency.
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Kind-specific worst case: the largest measured/bound ratio for the
  /// coverage campaigns, the smallest slack (or largest relative identity
  /// error) for the deterministic ones.
  double worst = 0.0;
  /// The bound value compared against (coverage campaigns).
  double bound = 0.0;
  bool passed = false;
  std::optional<RunTrace> trace;
};

/// Quadratic with a random orthogonal eigenbasis, eigenvalues in
/// [0.1 lambda_max, lambda_max] (the largest equal to lambda_max) and a random
/// linear term.
QuadraticObjective random_quadratic(Index dim, double lambda_max, FeasibleSet set, std::uint64_t seed);

/// Runs M independent seeded replications of the selected audit. Replication r
/// uses streams derived from (seed, r), so the report does not depend on the
/// thread count.
AuditReport run_audit_campaign(AuditKind kind, const AuditParams& params);

}  // namespace anytime::bench

#endif  // ANYTIME_BENCH_AUDIT_HPP
