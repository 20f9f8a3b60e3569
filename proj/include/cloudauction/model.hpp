#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cloudauction {

using JobId = std::int64_t;

/// Two times or values closer than this compare equal.
inline constexpr double kEps = 1e-9;

inline bool approx_equal(double a, double b) { return a - b <= kEps && b - a <= kEps; }
inline bool approx_less(double a, double b) { return a < b - kEps; }
inline bool approx_leq(double a, double b) { return a <= b + kEps; }

/// One agent's report (r, d, n, l, v).
struct JobType {
  JobId id = 0;
  double release = 0.0;
  double deadline = 0.0;
  int demand = 1;
  double length = 1.0;
  double value = 0.0;

  bool operator==(const JobType&) const = default;
};

/// Full auction input. Jobs are kept sorted by (release, id).
struct Instance {
  int capacity = 1;
  int kappa = 1;
  std::vector<JobType> jobs;

  Instance() = default;
  Instance(int capacity, int kappa, std::vector<JobType> jobs);

  const JobType* find(JobId id) const;
  /// Copy with job `id`'s report replaced by `report` (id is kept).
  Instance with_report(JobId id, const JobType& report) const;
  Instance with_value(JobId id, double value) const;

  bool operator==(const Instance&) const = default;
};

void sort_jobs(std::vector<JobType>& jobs);

struct Violation {
  std::optional<JobId> job;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Violation messages, stable so callers and tests can match on them.
inline constexpr const char* kWindowTooShort = "window shorter than length";
inline constexpr const char* kDemandExceedsCapacity = "demand exceeds capacity";

ValidationResult validate_instance(const Instance& instance);

/// True iff `a` dominates `b`: earlier-or-equal release, later-or-equal
/// deadline, no larger demand or length, strictly larger value. Ids ignored.
bool dominates(const JobType& a, const JobType& b);

/// Settled result of one mechanism run. Maps are keyed by job id.
struct Outcome {
  std::vector<JobId> completed;  // ascending
  double welfare = 0.0;
  std::map<JobId, double> payments;
  std::map<JobId, double> utilities;

  bool is_completed(JobId id) const;
};

/// Builds an Outcome from a completed set and per-winner payments; losers pay 0.
Outcome make_outcome(const Instance& instance, std::vector<JobId> completed,
                     const std::map<JobId, double>& winner_payments);

/// Σ value over the given ids.
double welfare_of(const Instance& instance, const std::vector<JobId>& ids);

}  // namespace cloudauction
