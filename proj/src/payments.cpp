#include "cloudauction/payments.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace cloudauction {

namespace {

bool completes_at(const Instance& instance, const Mechanism& mechanism, JobId id, double value) {
  return run(instance.with_value(id, value), mechanism).is_completed(id);
}

}  // namespace

double critical_value(const Instance& instance, const Mechanism& mechanism, JobId id) {
  const JobType* job = instance.find(id);
  if (!job) throw std::invalid_argument(fmt::format("no job with id {}", id));
  if (!run(instance, mechanism).is_completed(id))
    throw std::logic_error(fmt::format("job {} does not complete; losers are not priced", id));

  const double v = job->value;
  const double tol = kPaymentTolerance * v;

  if (!mechanism.value_monotone()) {
    // Completion may not be monotone in value: sweep a descending grid and
    // report the lowest completing point.
    const double step = v * 1e-4;
    double lowest = v;
    for (int k = 9999; k >= 1; --k) {
      const double x = k * step;
      if (completes_at(instance, mechanism, id, x)) lowest = x;
    }
    return lowest;
  }

  if (completes_at(instance, mechanism, id, tol)) return 0.0;
  double lo = tol;  // loses
  double hi = v;    // completes
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (completes_at(instance, mechanism, id, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double price(const Instance& instance, const Mechanism& mechanism, JobId id, PaymentRule rule) {
  switch (rule) {
    case PaymentRule::critical_value:
      return critical_value(instance, mechanism, id);
    case PaymentRule::pay_your_bid: {
      const JobType* job = instance.find(id);
      if (!job) throw std::invalid_argument(fmt::format("no job with id {}", id));
      return job->value;
    }
  }
  throw std::logic_error("unknown payment rule");
}

Outcome settle(const Instance& instance, const Mechanism& mechanism, PaymentRule rule) {
  const RunResult truth = run(instance, mechanism);
  std::map<JobId, double> payments;
  for (JobId id : truth.completed) payments[id] = price(instance, mechanism, id, rule);
  return make_outcome(instance, truth.completed, payments);
}

}  // namespace cloudauction
