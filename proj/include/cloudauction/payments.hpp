#pragma once

#include "cloudauction/engine.hpp"
#include "cloudauction/model.hpp"

namespace cloudauction {

enum class PaymentRule {
  critical_value,
  pay_your_bid,  // negative control: not truthful
};

/// Relative tolerance of the critical-value search.
inline constexpr double kPaymentTolerance = 1e-6;

/// Minimum reported value (relative tolerance kPaymentTolerance * v_i) at
/// which job `id` still completes, all other reports fixed. The returned value
/// is itself a completing report, or 0 if the job completes at every value
/// down to the tolerance floor. Throws std::logic_error if the job does not
/// complete under its truthful report.
double critical_value(const Instance& instance, const Mechanism& mechanism, JobId id);

/// Runs the mechanism truthfully and prices every completed job.
Outcome settle(const Instance& instance, const Mechanism& mechanism,
               PaymentRule rule = PaymentRule::critical_value);

/// Payment owed by `id` under `rule` given a run in which it completed.
double price(const Instance& instance, const Mechanism& mechanism, JobId id, PaymentRule rule);

}  // namespace cloudauction
