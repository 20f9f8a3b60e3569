#include "cloudauction/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/core.h>

#include "cloudauction/oracle.hpp"

namespace cloudauction {

namespace {

// Runs f(0..n-1), optionally on worker threads. Callers write results by
// index, so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Each replay gets its own generator so the draw does not depend on order.
std::mt19937_64 replay_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

struct TruthfulView {
  std::vector<JobId> completed;
  std::map<JobId, double> payment;
};

TruthfulView truthful_view(const Instance& instance, const Mechanism& mechanism,
                           PaymentRule rule) {
  TruthfulView view;
  const RunResult r = run(instance, mechanism);
  view.completed = r.completed;
  for (JobId id : r.completed) view.payment[id] = price(instance, mechanism, id, rule);
  return view;
}

double max_length(const Instance& instance, const JobType& job) {
  return std::min<double>(instance.kappa, job.deadline - job.release);
}

double draw_length(std::mt19937_64& rng, const Instance& instance, const JobType& job) {
  const double hi = max_length(instance, job);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < 0.5 || hi <= job.length) return job.length;
  if (u < 0.7) return hi;
  return std::uniform_real_distribution<double>(job.length, hi)(rng);
}

}  // namespace

RatioResult competitive_ratio(const Instance& instance, const Mechanism& mechanism,
                              std::optional<double> opt) {
  RatioResult r;
  r.mech_welfare = run(instance, mechanism).welfare;
  r.opt_welfare = opt ? *opt : offline_opt(instance).welfare;
  if (r.mech_welfare <= kEps)
    r.ratio = r.opt_welfare <= kEps ? 1.0 : std::numeric_limits<double>::infinity();
  else
    r.ratio = r.opt_welfare / r.mech_welfare;
  return r;
}

DsicReport check_dsic(const Instance& instance, const Mechanism& mechanism, PaymentRule rule,
                      std::size_t samples, std::uint64_t seed, int threads) {
  DsicReport report;
  if (instance.jobs.empty()) return report;
  const TruthfulView truth = truthful_view(instance, mechanism, rule);
  auto truthful_utility = [&](JobId id, double v) {
    auto it = truth.payment.find(id);
    return it == truth.payment.end() ? 0.0 : v - it->second;
  };

  std::vector<std::optional<DsicViolation>> found(samples);
  parallel_for(samples, threads, [&](std::size_t k) {
    auto rng = replay_rng(seed, k);
    const JobType& job =
        instance.jobs[std::uniform_int_distribution<std::size_t>(0, instance.jobs.size() - 1)(rng)];
    JobType lie = job;

    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto paid = truth.payment.find(job.id);
    if (u < 0.4) {
      lie.value = std::uniform_real_distribution<double>(0.0, 2.0 * job.value)(rng);
    } else if (u < 0.7) {
      lie.value = job.value * std::exp(std::normal_distribution<double>(0.0, 1.0)(rng));
    } else if (paid != truth.payment.end() && paid->second > 0) {
      // Probe around the threshold, where a lie is most likely to pay off.
      lie.value = paid->second * (1.0 + std::normal_distribution<double>(0.0, 0.01)(rng));
    } else {
      lie.value = job.value * std::uniform_real_distribution<double>(1.0, 3.0)(rng);
    }
    lie.value = std::max(lie.value, 1e-3 * job.value);
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5)
      lie.demand = std::uniform_int_distribution<int>(1, instance.capacity)(rng);
    lie.length = draw_length(rng, instance, job);

    const Instance deviated = instance.with_report(job.id, lie);
    const bool completes = run(deviated, mechanism).is_completed(job.id);
    const double payment = completes ? price(deviated, mechanism, job.id, rule) : 0.0;
    const double gained = completes && lie.demand >= job.demand ? job.value : 0.0;
    const double lying = gained - payment;
    const double honest = truthful_utility(job.id, job.value);
    // Both payments come from a bisection that stops within kPaymentTolerance
    // of the reported value, so utilities are only that precise.
    const double slack = kEps + kPaymentTolerance * std::max(job.value, lie.value);
    if (honest < lying - slack) found[k] = DsicViolation{job.id, k, job, lie, honest, lying};
  });

  report.deviations = samples;
  for (auto& v : found)
    if (v) report.violations.push_back(*v);
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const DsicViolation& a, const DsicViolation& b) { return a.id < b.id; });
  return report;
}

MonotoneReport check_monotone(const Instance& instance, const Mechanism& mechanism,
                              std::size_t samples, std::uint64_t seed, int threads) {
  MonotoneReport report;
  if (instance.jobs.empty()) return report;
  const RunResult truth = run(instance, mechanism);

  std::vector<std::optional<MonotoneViolation>> found(samples);
  parallel_for(samples, threads, [&](std::size_t k) {
    auto rng = replay_rng(seed, k);
    const JobType& job =
        instance.jobs[std::uniform_int_distribution<std::size_t>(0, instance.jobs.size() - 1)(rng)];
    const bool wins = truth.is_completed(job.id);
    JobType other = job;
    bool upward = false;
    if (wins && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.3) {
      // A winner that improves its report must keep winning.
      upward = true;
      other.value = job.value * std::uniform_real_distribution<double>(1.0, 3.0)(rng) + kEps * 10;
      other.demand = std::uniform_int_distribution<int>(1, job.demand)(rng);
      other.length = std::uniform_real_distribution<double>(1.0, job.length)(rng);
    } else {
      other.value = job.value * std::uniform_real_distribution<double>(1e-3, 1.0)(rng);
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5)
        other.demand = std::uniform_int_distribution<int>(job.demand, instance.capacity)(rng);
      other.length = draw_length(rng, instance, job);
    }
    const bool other_wins = run(instance.with_report(job.id, other), mechanism).is_completed(job.id);
    const bool bad = upward ? (wins && !other_wins) : (other_wins && !wins);
    if (bad) found[k] = MonotoneViolation{job.id, k, job, other, wins, other_wins};
  });

  report.deviations = samples;
  for (auto& v : found)
    if (v) report.violations.push_back(*v);
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const MonotoneViolation& a, const MonotoneViolation& b) { return a.id < b.id; });
  return report;
}

InvariantReport check_invariants(const Instance& instance, const Mechanism& mechanism,
                                 PaymentRule rule) {
  InvariantReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  const RunResult result = run(instance, mechanism);
  for (const auto& seg : result.trace.segments) {
    long long used = 0;
    for (const auto& [id, count] : seg.allocation) used += count;
    if (used > instance.capacity)
      fail(fmt::format("capacity exceeded on [{}, {}): {} > {}", seg.start, seg.end, used,
                       instance.capacity));
  }

  double welfare = 0.0;
  for (const auto& job : instance.jobs) {
    const bool done = result.is_completed(job.id);
    int finished_runs = 0;
    for (const auto& run_iv : result.runs) {
      if (run_iv.id != job.id) continue;
      const double span = run_iv.end - run_iv.start;
      if (run_iv.completed) {
        ++finished_runs;
        if (!approx_equal(span, job.length))
          fail(fmt::format("job {} completed after {} instead of {}", job.id, span, job.length));
        if (approx_less(run_iv.start, job.release) || approx_less(job.deadline, run_iv.end))
          fail(fmt::format("job {} ran outside its window", job.id));
      } else if (!approx_less(span, job.length)) {
        fail(fmt::format("job {} ran its full length but is not completed", job.id));
      }
      for (const auto& seg : result.trace.segments) {
        if (approx_less(seg.start, run_iv.start) || approx_less(run_iv.end, seg.end)) continue;
        if (approx_equal(seg.start, seg.end)) continue;
        auto it = std::find_if(seg.allocation.begin(), seg.allocation.end(),
                               [&](const auto& a) { return a.first == job.id; });
        const int got = it == seg.allocation.end() ? 0 : it->second;
        if (got != job.demand)
          fail(fmt::format("job {} held {} of {} instances on [{}, {})", job.id, got, job.demand,
                           seg.start, seg.end));
      }
    }
    if (done != (finished_runs == 1))
      fail(fmt::format("job {} completion flag disagrees with its runs", job.id));
    if (done) welfare += job.value;
  }
  if (!approx_equal(welfare, result.welfare))
    fail(fmt::format("welfare {} but completed values sum to {}", result.welfare, welfare));

  const Outcome outcome = settle(instance, mechanism, rule);
  for (const auto& job : instance.jobs) {
    const double pay = outcome.payments.count(job.id) ? outcome.payments.at(job.id) : 0.0;
    const double util = outcome.utilities.count(job.id) ? outcome.utilities.at(job.id) : 0.0;
    if (pay < -kEps) fail(fmt::format("job {} has negative payment {}", job.id, pay));
    if (!outcome.is_completed(job.id) && pay != 0.0)
      fail(fmt::format("losing job {} pays {}", job.id, pay));
    if (util < -kEps) fail(fmt::format("job {} has negative utility {}", job.id, util));
  }

  if (rule == PaymentRule::critical_value && mechanism.value_monotone()) {
    for (JobId id : outcome.completed) {
      const double v = instance.find(id)->value;
      const double p = outcome.payments.at(id);
      const double slack = 10.0 * kPaymentTolerance * v;
      if (!run(instance.with_value(id, p + slack), mechanism).is_completed(id))
        fail(fmt::format("job {} loses just above its payment {}", id, p));
      if (p - slack > 0 && run(instance.with_value(id, p - slack), mechanism).is_completed(id))
        fail(fmt::format("job {} still wins just below its payment {}", id, p));
    }
  }

  try {
    const double opt = offline_opt(instance).welfare;
    report.opt_checked = true;
    if (approx_less(opt, result.welfare))
      fail(fmt::format("offline optimum {} below mechanism welfare {}", opt, result.welfare));
  } catch (const GuardError&) {
  }
  return report;
}

std::vector<Instance> fuzz_instances(std::size_t count, std::uint64_t seed,
                                     const FuzzParams& params) {
  if (params.min_jobs < 0 || params.max_jobs < params.min_jobs)
    throw std::invalid_argument("bad job-count range");
  if (params.min_capacity < 1 || params.max_capacity < params.min_capacity)
    throw std::invalid_argument("bad capacity range");
  if (params.kappa < 1 || !(params.quantum > 0) || params.quantum > 1)
    throw std::invalid_argument("kappa must be >= 1 and quantum in (0, 1]");
  if (!(params.min_value > 0) || params.max_value < params.min_value)
    throw std::invalid_argument("bad value range");

  std::mt19937_64 rng(seed);
  const double q = params.quantum;
  const auto min_len = static_cast<int>(std::ceil(1.0 / q - 1e-9));
  const auto max_len = static_cast<int>(std::floor(params.kappa / q + 1e-9));
  const auto max_release = static_cast<int>(std::floor(params.horizon / q + 1e-9));
  const auto max_lax = static_cast<int>(std::floor(params.max_laxity / q + 1e-9));

  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const int n = std::uniform_int_distribution<int>(params.min_jobs, params.max_jobs)(rng);
    const int cap =
        std::uniform_int_distribution<int>(params.min_capacity, params.max_capacity)(rng);
    std::vector<JobType> jobs;
    for (int i = 0; i < n; ++i) {
      JobType j;
      j.id = i;
      j.release = q * std::uniform_int_distribution<int>(0, std::max(0, max_release))(rng);
      j.length = q * std::uniform_int_distribution<int>(min_len, max_len)(rng);
      j.deadline =
          j.release + j.length + q * std::uniform_int_distribution<int>(0, std::max(0, max_lax))(rng);
      j.demand = std::uniform_int_distribution<int>(1, cap)(rng);
      j.value = std::uniform_real_distribution<double>(params.min_value, params.max_value)(rng);
      jobs.push_back(j);
    }
    out.emplace_back(cap, params.kappa, std::move(jobs));
  }
  return out;
}

}  // namespace cloudauction
