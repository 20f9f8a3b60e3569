#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cloudauction/model.hpp"

namespace cloudauction {

/// Raised when an input exceeds what the exact oracle is willing to search.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxOracleJobs = 18;
inline constexpr double kMaxGridPoints = 1e7;  // horizon / grid

struct ScheduledJob {
  JobId id = 0;
  double start = 0.0;
};

struct OfflineSolution {
  double welfare = 0.0;
  std::vector<ScheduledJob> schedule;  // by start, then id
  double grid = 0.0;
};

/// Finest common grid of all releases, deadlines and lengths: 1/L where L is
/// the lcm of their denominators. Throws GuardError for times that are not
/// rationals with a small denominator.
double infer_grid(const Instance& instance);

/// Optimal offline welfare over non-preemptive schedules with grid-aligned
/// starts. `grid` defaults to infer_grid(). Throws GuardError past
/// kMaxOracleJobs jobs, for misaligned times, or for a grid that is too fine.
OfflineSolution offline_opt(const Instance& instance, std::optional<double> grid = std::nullopt);

/// Knapsack decision problem rewritten as an allocation instance: item i
/// becomes job (0, 1, size_i, 1, profit_i) on a cloud of the knapsack's size.
struct ReducedKnapsack {
  Instance instance;
  double threshold = 0.0;
};

/// Items larger than the capacity can never be packed and are left out.
ReducedKnapsack knapsack_to_instance(const std::vector<std::pair<int, double>>& items,
                                     int capacity, double threshold);

/// Answer to "is there an allocation with welfare >= threshold?".
bool decide(const ReducedKnapsack& reduced);

}  // namespace cloudauction
