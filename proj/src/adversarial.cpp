#include "cloudauction/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "cloudauction/dp.hpp"
#include "cloudauction/greedy.hpp"

namespace cloudauction {

namespace {

struct Draft {
  JobType job;
  bool winner = false;
  bool in_opt = false;
};

// Sorts drafts by release (creation order on ties) and numbers them.
AdversarialInstance finish(std::vector<Draft> drafts, int capacity, int kappa) {
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& a, const Draft& b) { return a.job.release < b.job.release; });
  AdversarialInstance out;
  std::vector<JobType> jobs;
  JobId next = 0;
  for (auto& d : drafts) {
    d.job.id = next++;
    jobs.push_back(d.job);
    if (d.winner) {
      out.predicted_mech_winners.push_back(d.job.id);
      out.predicted_mech_welfare += d.job.value;
    }
    if (d.in_opt) out.predicted_opt += d.job.value;
  }
  out.instance = Instance(capacity, kappa, std::move(jobs));
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

int ceil_log2(double x) { return static_cast<int>(std::ceil(std::log2(x) - 1e-12)); }

// Preemption chain shared by the exponential, single-machine, general-f and
// linear families. Long group i arrives at i(kappa - eps) and preempts group
// i-1 just before it could finish; group p-1 has a late deadline and is the
// only one that completes. Short jobs arrive at 1 - p eps + j, each valued
// just below the virtual value of the long group running at that moment, and
// fill the whole capacity back to back in OPT.
AdversarialInstance build_chain(int h, int n_max, int kappa, const PriorityFunction& f, int p,
                                const Perturbation& pert) {
  require(h >= 1 && n_max >= 1, "h and n_max must be positive");
  require(kappa >= 1, "kappa must be positive");
  require(p >= 1, "p must be positive");
  const double eps = pert.eps.value_or(default_eps(p));
  const double del = pert.del.value_or(eps / 16.0);
  const double k = kappa;
  require(eps > 0 && p * eps <= 0.25, fmt::format("separation guard: need p*eps <= 1/4 (eps={})", eps));
  require(del > 0 && del <= eps / 4, fmt::format("separation guard: need 0 < del <= eps/4 (del={})", del));

  const double top = f(1.0);
  require(top > 1.0, "priority must satisfy f(1) > 1");
  // Long group i must strictly beat group i-1 at the hand-over.
  const double handover = f((k - eps) / k);
  require(top - handover >= 1e-6 * top,
          fmt::format("separation guard: f(1) - f(1 - eps/kappa) too small ({} vs {})", top, handover));
  const double short_gap = del / (p * k);
  require(short_gap >= 1e-8, "separation guard: del / (p kappa) below 1e-8");

  const int capacity = h * n_max;
  std::vector<Draft> drafts;
  for (int i = 0; i < p; ++i) {
    const double release = i * (k - eps);
    const double scale = std::pow(top, i);
    if (i < p - 1) {
      for (int m = 0; m < h; ++m)
        drafts.push_back({{0, release, (i + 1) * k, n_max, k, n_max * scale}, false, false});
    } else {
      const double deadline = (p + 2) * k;
      for (int m = 0; m < h - 1; ++m)
        drafts.push_back({{0, release, deadline, n_max, k, n_max * scale}, true, true});
      drafts.push_back({{0, release, deadline, 1, k, scale}, true, true});
    }
  }
  const int shorts = p * kappa;
  for (int j = 0; j < shorts; ++j) {
    const double t = 1.0 - p * eps + j;
    int i = 0;
    while (i + 1 < p && (i + 1) * (k - eps) <= t) ++i;
    const double delta = (t - i * (k - eps)) / k;
    const double density = std::pow(top, i) * f(delta);
    for (int m = 0; m < h; ++m)
      drafts.push_back({{0, t, t + 1.0, n_max, 1.0, n_max * density - short_gap}, false, true});
  }
  AdversarialInstance out = finish(std::move(drafts), capacity, kappa);
  out.mechanism = "greedy";
  out.priority = f.describe();
  out.priority_function = f;
  out.parameters = {{"h", double(h)}, {"n_max", double(n_max)}, {"kappa", k},
                    {"p", double(p)}, {"eps", eps},           {"del", del}};
  return out;
}

}  // namespace

std::unique_ptr<Mechanism> AdversarialInstance::make_mechanism() const {
  if (mechanism == "dp") return std::make_unique<DpMechanism>(chi);
  if (priority_function) return std::make_unique<GreedyMechanism>(*priority_function);
  return std::make_unique<GreedyMechanism>(parse_priority(priority, instance.kappa));
}

double default_eps(int p) {
  if (p < 1) throw std::invalid_argument("p must be positive");
  return std::ldexp(1.0, -(ceil_log2(4.0 * p) + 2));
}

double exp_lower_asymptotic(int h, int kappa, double chi) {
  return (double(h) / (h - 1)) * exponential_bound_term(chi, kappa) + 1.0;
}

double exp_lower_finite(int h, int n_max, int kappa, double chi, int p) {
  const double lead = double(h) * n_max / ((h - 1.0) * n_max + 1.0);
  return lead * (chi - std::pow(chi, -1.0 / kappa - p + 1)) / (1.0 - std::pow(chi, -1.0 / kappa)) +
         1.0;
}

double single_machine_asymptotic(int kappa, double chi) {
  return exponential_bound_term(chi, kappa) + 1.0;
}

double general_f_asymptotic(int kappa, double f1) { return kappa / (1.0 - 1.0 / f1) + f1 + 1.0; }

double linear_asymptotic(int kappa, double a) {
  const double k = kappa;
  return k / a + (k + 1.0) / 2.0 * a + 1.5 * (k + 1.0);
}

double dp_asymptotic(int n_max, int kappa, double chi) {
  return n_max * exponential_bound_term(chi, kappa) + 1.0;
}

AdversarialInstance gen_exp_lower(int h, int n_max, int kappa, double chi, int p,
                                  Perturbation pert) {
  require(h >= 2, "gen_exp_lower needs h >= 2");
  const auto f = PriorityFunction::exponential(chi);
  AdversarialInstance out = build_chain(h, n_max, kappa, f, p, pert);
  out.family = "exp";
  out.chi = chi;
  out.parameters["chi"] = chi;
  out.asymptotic_ratio = exp_lower_asymptotic(h, kappa, chi);
  return out;
}

AdversarialInstance gen_single_machine(int kappa, double chi, int p, Perturbation pert) {
  const auto f = PriorityFunction::exponential(chi);
  AdversarialInstance out = build_chain(1, 1, kappa, f, p, pert);
  out.family = "single";
  out.chi = chi;
  out.parameters["chi"] = chi;
  out.asymptotic_ratio = single_machine_asymptotic(kappa, chi);
  return out;
}

AdversarialInstance gen_general_f(const PriorityFunction& f, int kappa, int p, Perturbation pert) {
  AdversarialInstance out = build_chain(1, 1, kappa, f, p, pert);
  out.family = "general";
  out.parameters["f1"] = f(1.0);
  out.asymptotic_ratio = general_f_asymptotic(kappa, f(1.0));
  return out;
}

AdversarialInstance gen_linear(double a, int kappa, int p, Perturbation pert) {
  require(a > 0, "gen_linear needs a > 0");
  const auto f = PriorityFunction::linear(a);
  AdversarialInstance out = build_chain(1, 1, kappa, f, p, pert);
  out.family = "linear";
  out.parameters["a"] = a;
  out.asymptotic_ratio = linear_asymptotic(kappa, a);
  return out;
}

AdversarialInstance gen_nmax_eq_C(int capacity, int p, Perturbation pert, double chi) {
  require(capacity > 2, "gen_nmax_eq_C needs C > 2");
  require(capacity % 2 == 0, "gen_nmax_eq_C needs an even C (half-capacity jobs)");
  require(p >= 1, "p must be positive");
  require(chi > 1.0, "chi must exceed 1");
  const double eps = pert.eps.value_or(default_eps(p));
  const double mu = pert.mu.value_or(eps * std::ldexp(1.0, -(p + 4)));
  require(eps > 0 && p * eps <= 0.25, "separation guard: need p*eps <= 1/4");
  // Each preemption happens after mu time at value ~1.5 * 2^p; the boost
  // v (chi^mu - 1) must stay well below the eps steps.
  const double top_value = 1.5 * std::ldexp(1.0, p);
  require(mu > 0 && top_value * std::expm1(mu * std::log(chi)) < eps / 4,
          fmt::format("separation guard: mu={} too large for eps={}", mu, eps));
  require(3.0 * p * mu < 0.25, "separation guard: releases must stay well inside [0, 1)");

  const int half = capacity / 2;
  const double c = capacity;
  std::vector<Draft> drafts;
  auto unit = [&](double release, int demand, double value) {
    drafts.push_back({{0, release, release + 1.0, demand, 1.0, value}, false, false});
  };
  const double base = std::ldexp(1.0, p);
  unit(0.0, half, base);
  unit(0.0, half, base);
  drafts[0].in_opt = drafts[1].in_opt = true;
  unit(mu, half + 1, base + 2.0 * base / c + eps);
  unit(2.0 * mu, capacity, base + 2.0 * base / c + 2.0 * eps);
  for (int j = 1; j < p; ++j) {
    const double prev = drafts.back().job.value;
    unit(3.0 * j * mu, half, prev / 2.0 + eps);
    unit(3.0 * j * mu, half, prev / 2.0 + eps);
    unit((3.0 * j + 1.0) * mu, half + 1, prev / 2.0 + prev / c + 2.0 * eps);
    unit((3.0 * j + 2.0) * mu, capacity, prev / 2.0 + prev / c + 3.0 * eps);
  }
  drafts.back().winner = true;

  AdversarialInstance out = finish(std::move(drafts), capacity, 1);
  out.family = "nmaxC";
  out.mechanism = "greedy";
  out.priority = PriorityFunction::exponential(chi).describe();
  out.chi = chi;
  out.asymptotic_ratio = std::pow(0.5 + 1.0 / c, -p);
  out.parameters = {{"C", c}, {"p", double(p)}, {"eps", eps}, {"mu", mu}, {"chi", chi}};
  return out;
}

AdversarialInstance gen_dp_lower(int h, int n_max, int kappa, double chi, int p,
                                 Perturbation pert) {
  require(h >= 1 && n_max >= 1 && kappa >= 1 && p >= 1, "h, n_max, kappa, p must be positive");
  require(chi > 1.0, "chi must exceed 1");
  // The short jobs all drift by p*eps, so eps shrinks like 1/p^2 here to keep
  // the finite ratio rising with p.
  const double eps = pert.eps.value_or(default_eps(p) * std::ldexp(1.0, -ceil_log2(p)));
  const int queues = h * n_max;
  const double del = pert.del.value_or(eps * std::ldexp(1.0, -ceil_log2(16.0 * queues)));
  require(eps > 0 && p * eps <= 0.25, "separation guard: need p*eps <= 1/4");
  require(del > 0 && queues * del <= eps / 4, "separation guard: need h*n_max*del <= eps/4");
  const double k = kappa;
  const double short_gap = del / (p * k);
  require(short_gap >= 1e-8, "separation guard: del / (p kappa) below 1e-8");

  std::vector<Draft> drafts;
  for (int i = 0; i < p; ++i) {
    const bool last = i == p - 1;
    const double release = i * (k - eps);
    const double deadline = last ? (p + 2) * k : (i + 1) * k;
    for (int m = 0; m < h; ++m)
      drafts.push_back({{0, release, deadline, n_max, k, std::pow(chi, i)}, last, last});
  }
  for (int q = 1; q <= queues; ++q) {
    for (int j = 0; j < p * kappa; ++j) {
      const double t = 1.0 - p * eps - q * del + j;
      drafts.push_back({{0, t, t + 1.0, 1, 1.0, std::pow(chi, t / k) - short_gap}, false, true});
    }
  }
  AdversarialInstance out = finish(std::move(drafts), h * n_max, kappa);
  out.family = "dp";
  out.mechanism = "dp";
  out.chi = chi;
  out.asymptotic_ratio = dp_asymptotic(n_max, kappa, chi);
  out.parameters = {{"h", double(h)}, {"n_max", double(n_max)}, {"kappa", k}, {"chi", chi},
                    {"p", double(p)}, {"eps", eps},           {"del", del}};
  return out;
}

}  // namespace cloudauction
