#include "cloudauction/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace cloudauction {

KnapsackSolution knapsack_dp(std::span<const KnapsackItem> items_in, int capacity) {
  if (capacity < 0) throw std::invalid_argument("knapsack capacity must be non-negative");
  if (capacity > kMaxKnapsackCapacity)
    throw std::length_error(
        fmt::format("knapsack capacity {} exceeds table guard {}", capacity, kMaxKnapsackCapacity));

  std::vector<KnapsackItem> items(items_in.begin(), items_in.end());
  std::sort(items.begin(), items.end(),
            [](const KnapsackItem& a, const KnapsackItem& b) { return a.id < b.id; });
  for (const auto& it : items)
    if (it.weight < 1) throw std::invalid_argument(fmt::format("item {} has weight < 1", it.id));

  const std::size_t n = items.size();
  const std::size_t width = static_cast<std::size_t>(capacity) + 1;
  // best[i * width + c]: max profit over the first i items within capacity c.
  std::vector<double> best((n + 1) * width, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& it = items[i - 1];
    const double* prev = &best[(i - 1) * width];
    double* cur = &best[i * width];
    for (std::size_t c = 0; c < width; ++c) {
      cur[c] = prev[c];
      if (static_cast<std::size_t>(it.weight) <= c)
        cur[c] = std::max(cur[c], prev[c - it.weight] + it.profit);
    }
  }

  KnapsackSolution sol;
  std::size_t c = static_cast<std::size_t>(capacity);
  for (std::size_t i = n; i >= 1; --i) {
    const double take = best[i * width + c];
    const double skip = best[(i - 1) * width + c];
    if (take <= skip + kEps) continue;
    sol.selected.push_back(items[i - 1].id);
    sol.profit += items[i - 1].profit;
    c -= items[i - 1].weight;
  }
  std::sort(sol.selected.begin(), sol.selected.end());
  return sol;
}

KnapsackSolution dp_select(std::span<const Candidate> feasible, double chi, int capacity) {
  std::vector<KnapsackItem> items;
  items.reserve(feasible.size());
  for (const auto& c : feasible)
    items.push_back({c.id, c.demand, c.value * std::pow(chi, c.progress)});
  return knapsack_dp(items, capacity);
}

DpMechanism::DpMechanism(double chi) : chi_(chi) {
  if (!(chi > 1.0) || !std::isfinite(chi))
    throw std::invalid_argument("dp mechanism requires chi > 1");
}

std::vector<JobId> DpMechanism::select(std::span<const Candidate> feasible, int capacity) const {
  return dp_select(feasible, chi_, capacity).selected;
}

std::string DpMechanism::name() const { return fmt::format("dp[chi={}]", chi_); }

}  // namespace cloudauction
