#pragma once

#include <span>
#include <vector>

#include "cloudauction/engine.hpp"

namespace cloudauction {

struct KnapsackItem {
  JobId id = 0;
  int weight = 1;       // demand
  double profit = 0.0;  // virtual value
};

struct KnapsackSolution {
  std::vector<JobId> selected;  // ascending id
  double profit = 0.0;
};

/// Largest capacity accepted by knapsack_dp; the table has (items+1)*(C+1) entries.
inline constexpr int kMaxKnapsackCapacity = 100000;

/// Exact 0/1 knapsack over integer weights. Among profit ties the
/// reconstruction prefers skipping higher-id items, so the result is canonical.
/// Items heavier than the capacity are never selected.
KnapsackSolution knapsack_dp(std::span<const KnapsackItem> items, int capacity);

/// Dynamic-program mechanism: at each critical point, runs the knapsack-optimal
/// set under virtual values v * chi^delta.
class DpMechanism final : public Mechanism {
 public:
  explicit DpMechanism(double chi);

  std::vector<JobId> select(std::span<const Candidate> feasible, int capacity) const override;
  std::string name() const override;

  double chi() const { return chi_; }

 private:
  double chi_;
};

/// dp_select: knapsack over candidates with virtual values v * chi^delta.
KnapsackSolution dp_select(std::span<const Candidate> feasible, double chi, int capacity);

}  // namespace cloudauction
