#include "cloudauction/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/core.h>

namespace cloudauction {

void sort_jobs(std::vector<JobType>& jobs) {
  std::stable_sort(jobs.begin(), jobs.end(), [](const JobType& a, const JobType& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.id < b.id;
  });
}

Instance::Instance(int capacity_, int kappa_, std::vector<JobType> jobs_)
    : capacity(capacity_), kappa(kappa_), jobs(std::move(jobs_)) {
  sort_jobs(jobs);
}

const JobType* Instance::find(JobId id) const {
  for (const auto& j : jobs)
    if (j.id == id) return &j;
  return nullptr;
}

Instance Instance::with_report(JobId id, const JobType& report) const {
  Instance out = *this;
  bool found = false;
  for (auto& j : out.jobs) {
    if (j.id == id) {
      j = report;
      j.id = id;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument(fmt::format("no job with id {}", id));
  sort_jobs(out.jobs);
  return out;
}

Instance Instance::with_value(JobId id, double value) const {
  Instance out = *this;
  for (auto& j : out.jobs) {
    if (j.id == id) {
      j.value = value;  // value does not affect (release, id) order
      return out;
    }
  }
  throw std::invalid_argument(fmt::format("no job with id {}", id));
}

ValidationResult validate_instance(const Instance& instance) {
  ValidationResult res;
  auto report = [&](std::optional<JobId> id, std::string msg) {
    res.violations.push_back({id, std::move(msg)});
  };
  if (instance.capacity < 1) report(std::nullopt, "capacity must be positive");
  if (instance.kappa < 1) report(std::nullopt, "kappa must be positive");

  std::set<JobId> seen;
  for (const auto& j : instance.jobs) {
    if (j.id < 0) report(j.id, "negative id");
    if (!seen.insert(j.id).second) report(j.id, "duplicate id");
    const bool finite = std::isfinite(j.release) && std::isfinite(j.deadline) &&
                        std::isfinite(j.length) && std::isfinite(j.value);
    if (!finite) {
      report(j.id, "non-finite field");
      continue;
    }
    if (j.release < 0) report(j.id, "negative release");
    if (!(j.release < j.deadline)) report(j.id, "release not before deadline");
    if (approx_less(j.deadline - j.release, j.length)) report(j.id, kWindowTooShort);
    if (approx_less(j.length, 1.0) || approx_less(static_cast<double>(instance.kappa), j.length))
      report(j.id, "length outside [1, kappa]");
    if (j.demand < 1) report(j.id, "demand must be positive");
    if (j.demand > instance.capacity) report(j.id, kDemandExceedsCapacity);
    if (!(j.value > 0)) report(j.id, "value must be positive");
  }
  return res;
}

bool dominates(const JobType& a, const JobType& b) {
  return a.release <= b.release && a.deadline >= b.deadline && a.demand <= b.demand &&
         a.length <= b.length && a.value > b.value;
}

bool Outcome::is_completed(JobId id) const {
  return std::binary_search(completed.begin(), completed.end(), id);
}

double welfare_of(const Instance& instance, const std::vector<JobId>& ids) {
  double w = 0.0;
  for (JobId id : ids) {
    const JobType* j = instance.find(id);
    if (!j) throw std::invalid_argument(fmt::format("no job with id {}", id));
    w += j->value;
  }
  return w;
}

Outcome make_outcome(const Instance& instance, std::vector<JobId> completed,
                     const std::map<JobId, double>& winner_payments) {
  Outcome out;
  std::sort(completed.begin(), completed.end());
  out.completed = std::move(completed);
  out.welfare = welfare_of(instance, out.completed);
  for (const auto& j : instance.jobs) {
    double pay = 0.0;
    double util = 0.0;
    if (out.is_completed(j.id)) {
      auto it = winner_payments.find(j.id);
      pay = it == winner_payments.end() ? 0.0 : it->second;
      util = j.value - pay;
    }
    out.payments[j.id] = pay;
    out.utilities[j.id] = util;
  }
  return out;
}

}  // namespace cloudauction
