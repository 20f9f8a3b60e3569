#include "cloudauction/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace cloudauction {

namespace {

constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 20;
constexpr std::int64_t kMaxLcm = std::int64_t{1} << 30;

// Smallest q <= kMaxDenominator with x*q integral, or 0.
std::int64_t denominator_of(double x) {
  // Error is measured on x itself: a scaled tolerance lets large q match anything.
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  const auto fits = [&](std::int64_t q) {
    const double scaled = x * static_cast<double>(q);
    return std::abs(scaled - std::round(scaled)) <= tol * static_cast<double>(q);
  };
  for (std::int64_t q = 1; q <= kMaxDenominator; ++q) {
    if (fits(q)) return q;
    // Dyadic inputs are the common case; try powers of two before scanning on.
    if (q == 64) {
      for (std::int64_t p = 128; p <= kMaxDenominator; p *= 2)
        if (fits(p)) return p;
    }
  }
  return 0;
}

bool on_grid(double x, double grid) {
  const double k = x / grid;
  return std::abs(k - std::round(k)) <= 1e-6;
}

struct Placement {
  double start;
  double end;
  int demand;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance) : inst_(instance) {
    order_.resize(inst_.jobs.size());
    std::iota(order_.begin(), order_.end(), 0);
    // Try valuable jobs first so the incumbent tightens early.
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return inst_.jobs[a].value > inst_.jobs[b].value;
    });
    used_.assign(inst_.jobs.size(), false);
    starts_.assign(inst_.jobs.size(), 0.0);
  }

  OfflineSolution solve() {
    dfs(-1.0, -1, 0.0);
    OfflineSolution sol;
    sol.welfare = best_value_;
    for (std::size_t i = 0; i < inst_.jobs.size(); ++i)
      if (best_used_.size() == inst_.jobs.size() && best_used_[i])
        sol.schedule.push_back({inst_.jobs[i].id, best_starts_[i]});
    std::sort(sol.schedule.begin(), sol.schedule.end(),
              [](const ScheduledJob& a, const ScheduledJob& b) {
                if (a.start != b.start) return a.start < b.start;
                return a.id < b.id;
              });
    return sol;
  }

 private:
  // Schedules are generated in (start, id) order. In a left-shifted optimal
  // schedule every start is a release or the end of an earlier-placed job.
  void dfs(double last_start, JobId last_id, double value) {
    if (value > best_value_ + kEps || best_used_.empty()) {
      best_value_ = std::max(best_value_, value);
      best_used_ = used_;
      best_starts_ = starts_;
    }
    double bound = value;
    for (std::size_t i = 0; i < inst_.jobs.size(); ++i) {
      const auto& j = inst_.jobs[i];
      if (!used_[i] && approx_leq(last_start, j.deadline - j.length)) bound += j.value;
    }
    if (bound <= best_value_ + kEps) return;

    std::vector<double> cands;
    for (std::size_t i : order_) {
      if (used_[i]) continue;
      const auto& j = inst_.jobs[i];
      const double latest = j.deadline - j.length;
      cands.clear();
      cands.push_back(j.release);
      for (const auto& p : placed_) cands.push_back(p.end);
      std::sort(cands.begin(), cands.end());
      double prev = -1e300;
      for (double s : cands) {
        if (approx_equal(s, prev)) continue;
        prev = s;
        if (approx_less(s, j.release) || approx_less(s, last_start) || approx_less(latest, s))
          continue;
        if (approx_equal(s, last_start) && j.id < last_id) continue;
        long long load = j.demand;
        for (const auto& p : placed_)
          if (approx_less(s, p.end)) load += p.demand;
        if (load > inst_.capacity) continue;

        used_[i] = true;
        starts_[i] = s;
        placed_.push_back({s, s + j.length, j.demand});
        dfs(s, j.id, value + j.value);
        placed_.pop_back();
        used_[i] = false;
      }
    }
  }

  const Instance& inst_;
  std::vector<std::size_t> order_;
  std::vector<bool> used_;
  std::vector<double> starts_;
  std::vector<Placement> placed_;
  double best_value_ = 0.0;
  std::vector<bool> best_used_;
  std::vector<double> best_starts_;
};

}  // namespace

double infer_grid(const Instance& instance) {
  std::int64_t lcm = 1;
  auto absorb = [&](double x) {
    const std::int64_t q = denominator_of(x);
    if (q == 0) throw GuardError(fmt::format("time {} is not a small-denominator rational", x));
    lcm = std::lcm(lcm, q);
    if (lcm > kMaxLcm) throw GuardError("time grid too fine for the offline oracle");
  };
  for (const auto& j : instance.jobs) {
    absorb(j.release);
    absorb(j.deadline);
    absorb(j.length);
  }
  return 1.0 / static_cast<double>(lcm);
}

OfflineSolution offline_opt(const Instance& instance, std::optional<double> grid) {
  if (instance.jobs.size() > kMaxOracleJobs)
    throw GuardError(fmt::format("offline oracle is limited to {} jobs, got {}", kMaxOracleJobs,
                                 instance.jobs.size()));
  const double g = grid ? *grid : infer_grid(instance);
  if (!(g > 0)) throw GuardError("grid must be positive");
  double horizon = 0.0;
  for (const auto& j : instance.jobs) {
    horizon = std::max(horizon, j.deadline);
    if (!on_grid(j.release, g) || !on_grid(j.deadline, g) || !on_grid(j.length, g))
      throw GuardError(fmt::format("job {} has times off the {} grid", j.id, g));
  }
  if (horizon / g > kMaxGridPoints) throw GuardError("grid resolution exceeds oracle limits");

  OfflineSolution sol = BranchAndBound(instance).solve();
  sol.grid = g;
  return sol;
}

ReducedKnapsack knapsack_to_instance(const std::vector<std::pair<int, double>>& items,
                                     int capacity, double threshold) {
  std::vector<JobType> jobs;
  JobId id = 0;
  for (const auto& [size, profit] : items) {
    if (size < 1) throw std::invalid_argument("knapsack sizes must be positive");
    const JobId this_id = id++;
    if (size > capacity) continue;
    jobs.push_back({this_id, 0.0, 1.0, size, 1.0, profit});
  }
  return {Instance(capacity, 1, std::move(jobs)), threshold};
}

bool decide(const ReducedKnapsack& reduced) {
  return offline_opt(reduced.instance, 1.0).welfare >= reduced.threshold - kEps;
}

}  // namespace cloudauction
