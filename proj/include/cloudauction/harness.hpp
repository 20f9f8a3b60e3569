#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudauction/engine.hpp"
#include "cloudauction/model.hpp"
#include "cloudauction/payments.hpp"

namespace cloudauction {

struct RatioResult {
  double ratio = 1.0;
  double mech_welfare = 0.0;
  double opt_welfare = 0.0;
};

/// OPT / W. OPT comes from `opt` when given, otherwise from offline_opt (whose
/// GuardError propagates). Infinite when W = 0 < OPT, 1 when both are 0.
RatioResult competitive_ratio(const Instance& instance, const Mechanism& mechanism,
                              std::optional<double> opt = std::nullopt);

/// One misreport that paid off. Utilities use the true type.
struct DsicViolation {
  JobId id = 0;
  std::size_t deviation = 0;
  JobType truth;
  JobType report;
  double truthful_utility = 0.0;
  double deviating_utility = 0.0;
};

struct DsicReport {
  std::size_t deviations = 0;
  std::vector<DsicViolation> violations;  // by (id, deviation)
  bool ok() const { return violations.empty(); }
};

/// Samples `samples` misreports (r, d kept, any value, any demand in [1, C],
/// length in [l, min(kappa, d - r)]) and replays each one. An agent gets its
/// value only if the reported job completes with at least its true demand.
/// Utilities are compared with a slack of kEps + kPaymentTolerance * max(v, v̂),
/// the precision of the payment search.
/// `threads` > 1 spreads replays over worker threads; the report does not
/// depend on it.
DsicReport check_dsic(const Instance& instance, const Mechanism& mechanism, PaymentRule rule,
                      std::size_t samples, std::uint64_t seed, int threads = 1);

struct MonotoneViolation {
  JobId id = 0;
  std::size_t deviation = 0;
  JobType truth;
  JobType report;
  bool truth_completes = false;
  bool report_completes = false;
};

struct MonotoneReport {
  std::size_t deviations = 0;
  std::vector<MonotoneViolation> violations;  // by (id, deviation)
  bool ok() const { return violations.empty(); }
};

/// Pairs each sampled type with a dominated one (and, for winners, a dominating
/// one) and checks completion never moves the wrong way.
MonotoneReport check_monotone(const Instance& instance, const Mechanism& mechanism,
                              std::size_t samples, std::uint64_t seed, int threads = 1);

struct InvariantReport {
  std::vector<std::string> violations;
  bool opt_checked = false;
  bool ok() const { return violations.empty(); }
};

/// Capacity bound, all-or-nothing runs, welfare bookkeeping, IR, OPT >= W
/// (skipped when the oracle's guards refuse the instance) and the threshold
/// property of the payments: a winner bidding just above its payment wins,
/// just below loses.
InvariantReport check_invariants(const Instance& instance, const Mechanism& mechanism,
                                 PaymentRule rule = PaymentRule::critical_value);

struct FuzzParams {
  int min_jobs = 2;
  int max_jobs = 8;
  int min_capacity = 1;
  int max_capacity = 4;
  int kappa = 2;
  double quantum = 0.25;  // releases, lengths and laxities are multiples
  double horizon = 6.0;   // releases drawn from [0, horizon]
  double max_laxity = 2.0;
  double min_value = 1.0;
  double max_value = 10.0;
};

/// Deterministic stream of valid random instances.
std::vector<Instance> fuzz_instances(std::size_t count, std::uint64_t seed,
                                     const FuzzParams& params = {});

}  // namespace cloudauction
