#include "cloudauction/engine.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include <fmt/core.h>

namespace cloudauction {

bool RunResult::is_completed(JobId id) const {
  return std::binary_search(completed.begin(), completed.end(), id);
}

double ProgressState::completeness(double t, double length) const {
  if (!running) return 0.0;
  return std::clamp((t - run_start) / length, 0.0, 1.0);
}

std::vector<JobId> feasible_set(const Instance& instance, const ProgressMap& progress, double t) {
  std::vector<JobId> out;
  for (const auto& j : instance.jobs) {
    if (!approx_leq(j.release, t)) continue;
    ProgressState st;
    if (auto it = progress.find(j.id); it != progress.end()) st = it->second;
    if (st.completed) continue;
    const double delta = st.completeness(t, j.length);
    if (delta >= 1.0 - kEps) continue;
    if (!approx_leq((1.0 - delta) * j.length, j.deadline - t)) continue;
    out.push_back(j.id);
  }
  return out;
}

RunResult run(const Instance& instance, const Mechanism& mechanism) {
  RunResult result;
  if (instance.jobs.empty()) return result;

  std::vector<double> releases;
  for (const auto& j : instance.jobs)
    if (releases.empty() || !approx_equal(releases.back(), j.release)) releases.push_back(j.release);

  std::map<JobId, const JobType*> by_id;
  for (const auto& j : instance.jobs) by_id[j.id] = &j;

  ProgressMap progress;
  for (const auto& j : instance.jobs) progress[j.id] = {};

  std::size_t next_release = 1;
  double t = releases.front();
  std::vector<Candidate> candidates;

  while (true) {
    result.critical_points.push_back(t);

    // Completions first; a job finishing at t frees its instances for this point.
    for (auto& [id, st] : progress) {
      if (!st.running) continue;
      const JobType& j = *by_id[id];
      if (approx_leq(st.run_start + j.length, t)) {
        st.running = false;
        st.completed = true;
        result.runs.push_back({id, st.run_start, st.run_start + j.length, true});
        result.completed.push_back(id);
        result.welfare += j.value;
      }
    }

    const std::vector<JobId> feasible = feasible_set(instance, progress, t);
    candidates.clear();
    for (JobId id : feasible) {
      const JobType& j = *by_id[id];
      candidates.push_back({id, j.demand, j.value, progress[id].completeness(t, j.length)});
    }

    std::vector<JobId> selected =
        candidates.empty() ? std::vector<JobId>{} : mechanism.select(candidates, instance.capacity);
    std::sort(selected.begin(), selected.end());
    if (std::adjacent_find(selected.begin(), selected.end()) != selected.end())
      throw std::logic_error(fmt::format("{} selected a job twice", mechanism.name()));
    long long used = 0;
    for (JobId id : selected) {
      if (std::find(feasible.begin(), feasible.end(), id) == feasible.end())
        throw std::logic_error(
            fmt::format("{} selected infeasible job {} at t={}", mechanism.name(), id, t));
      used += by_id[id]->demand;
    }
    if (used > instance.capacity)
      throw std::logic_error(fmt::format("{} exceeded capacity at t={}", mechanism.name(), t));

    for (auto& [id, st] : progress) {
      const bool chosen = std::binary_search(selected.begin(), selected.end(), id);
      if (st.running && !chosen) {
        // Interrupted: the progress made so far is lost.
        st.running = false;
        result.runs.push_back({id, st.run_start, t, false});
      } else if (!st.running && chosen) {
        st.running = true;
        st.run_start = t;
      }
    }

    double next = std::numeric_limits<double>::infinity();
    while (next_release < releases.size() && approx_leq(releases[next_release], t)) ++next_release;
    if (next_release < releases.size()) next = releases[next_release];
    for (const auto& [id, st] : progress)
      if (st.running) next = std::min(next, st.run_start + by_id[id]->length);
    if (next == std::numeric_limits<double>::infinity()) break;

    Segment seg{t, next, {}};
    for (const auto& [id, st] : progress)
      if (st.running) seg.allocation.emplace_back(id, by_id[id]->demand);
    result.trace.segments.push_back(std::move(seg));
    t = next;
  }

  std::sort(result.completed.begin(), result.completed.end());
  std::sort(result.runs.begin(), result.runs.end(), [](const RunInterval& a, const RunInterval& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.id < b.id;
  });
  return result;
}

}  // namespace cloudauction
