#include "cloudauction/greedy.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace cloudauction {

namespace {

// True when a should be ordered strictly before b.
bool ahead(const ScoredJob& a, const ScoredJob& b) {
  if (!approx_equal(a.virtual_density, b.virtual_density))
    return a.virtual_density > b.virtual_density;
  if (!approx_equal(a.virtual_value, b.virtual_value)) return a.virtual_value > b.virtual_value;
  return a.id < b.id;
}

}  // namespace

ScoredJob score(const Candidate& c, const PriorityFunction& f) {
  const double vv = c.value * f(c.progress);
  return {c.id, c.demand, vv, vv / c.demand};
}

void sort_by_priority(std::vector<ScoredJob>& jobs) {
  // Insertion sort: the tolerant comparator is not a strict weak ordering,
  // which std::sort requires.
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    ScoredJob cur = jobs[i];
    std::size_t k = i;
    while (k > 0 && ahead(cur, jobs[k - 1])) {
      jobs[k] = jobs[k - 1];
      --k;
    }
    jobs[k] = cur;
  }
}

std::vector<JobId> greedy_select(std::span<const ScoredJob> scored, int capacity) {
  std::vector<ScoredJob> order(scored.begin(), scored.end());
  sort_by_priority(order);

  long long prefix_demand = 0;
  double prefix_value = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k].demand > capacity)
      throw std::invalid_argument(fmt::format("job {} demands more than capacity", order[k].id));
    if (prefix_demand + order[k].demand > capacity) {
      if (prefix_value >= order[k].virtual_value - kEps) {
        std::vector<JobId> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(order[i].id);
        return out;
      }
      return {order[k].id};
    }
    prefix_demand += order[k].demand;
    prefix_value += order[k].virtual_value;
  }
  std::vector<JobId> all;
  for (const auto& s : order) all.push_back(s.id);
  return all;
}

std::vector<JobId> GreedyMechanism::select(std::span<const Candidate> feasible,
                                           int capacity) const {
  std::vector<ScoredJob> scored;
  scored.reserve(feasible.size());
  for (const auto& c : feasible) scored.push_back(score(c, f_));
  return greedy_select(scored, capacity);
}

std::string GreedyMechanism::name() const { return fmt::format("greedy[{}]", f_.describe()); }

}  // namespace cloudauction
