#pragma once

#include <span>
#include <vector>

#include "cloudauction/engine.hpp"
#include "cloudauction/priority.hpp"

namespace cloudauction {

/// A feasible job scored by the priority function.
struct ScoredJob {
  JobId id = 0;
  int demand = 1;
  double virtual_value = 0.0;    // v * f(delta)
  double virtual_density = 0.0;  // v * f(delta) / n
};

ScoredJob score(const Candidate& c, const PriorityFunction& f);

/// Orders by descending virtual density, then descending virtual value, then
/// ascending id. Comparisons use kEps.
void sort_by_priority(std::vector<ScoredJob>& jobs);

/// Knapsack-greedy selection. Runs everything if it all fits; otherwise with k
/// the first position whose prefix demand exceeds the capacity, runs the
/// prefix before k if its virtual value is at least job k's, else job k alone.
std::vector<JobId> greedy_select(std::span<const ScoredJob> scored, int capacity);

/// Greedy mechanism with priority function f.
class GreedyMechanism final : public Mechanism {
 public:
  explicit GreedyMechanism(PriorityFunction f) : f_(std::move(f)) {}

  std::vector<JobId> select(std::span<const Candidate> feasible, int capacity) const override;
  std::string name() const override;
  bool value_monotone() const override { return f_.monotone(); }

  const PriorityFunction& priority() const { return f_; }

 private:
  PriorityFunction f_;
};

}  // namespace cloudauction
