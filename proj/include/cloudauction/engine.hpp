#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cloudauction/model.hpp"

namespace cloudauction {

/// What a mechanism sees of a feasible job at a critical time point.
struct Candidate {
  JobId id = 0;
  int demand = 1;
  double value = 0.0;
  double progress = 0.0;  // delta in [0, 1)
};

/// Allocation rule applied at every critical time point. Implementations must
/// only use (demand, value, progress) of the candidates and the capacity.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  /// Ids to run until the next critical time point. Total demand <= capacity.
  virtual std::vector<JobId> select(std::span<const Candidate> feasible, int capacity) const = 0;

  virtual std::string name() const = 0;

  /// Whether completion is known to be monotone in the reported value.
  /// Payments use bisection when true, a grid sweep otherwise.
  virtual bool value_monotone() const { return true; }
};

struct Segment {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::pair<JobId, int>> allocation;  // sorted by id
};

struct AllocationTrace {
  std::vector<Segment> segments;
};

/// One continuous run of a job, from selection until completion or interruption.
struct RunInterval {
  JobId id = 0;
  double start = 0.0;
  double end = 0.0;
  bool completed = false;
};

struct RunResult {
  AllocationTrace trace;
  std::vector<RunInterval> runs;
  std::vector<JobId> completed;  // ascending
  double welfare = 0.0;
  std::vector<double> critical_points;

  bool is_completed(JobId id) const;
};

/// Per-job progress bookkeeping owned by a single run.
struct ProgressState {
  bool running = false;
  double run_start = 0.0;
  bool completed = false;

  /// delta at time t: fraction of the current run, 0 when not running.
  double completeness(double t, double length) const;
};

using ProgressMap = std::map<JobId, ProgressState>;

/// Jobs released by t that can still finish by their deadline given progress,
/// and are not yet complete. Ids are returned in instance order.
std::vector<JobId> feasible_set(const Instance& instance, const ProgressMap& progress, double t);

/// Runs the mechanism over the instance from the first release until no job is
/// running and no release remains. Deterministic.
RunResult run(const Instance& instance, const Mechanism& mechanism);

}  // namespace cloudauction
