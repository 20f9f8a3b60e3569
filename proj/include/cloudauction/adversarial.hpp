#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cloudauction/engine.hpp"
#include "cloudauction/model.hpp"
#include "cloudauction/priority.hpp"

namespace cloudauction {

/// A lower-bound instance plus what the construction says should happen.
struct AdversarialInstance {
  Instance instance;
  double predicted_opt = 0.0;
  double predicted_mech_welfare = 0.0;
  std::vector<JobId> predicted_mech_winners;  // ascending
  double asymptotic_ratio = 0.0;
  std::string family;
  std::map<std::string, double> parameters;
  /// Mechanism the construction targets: "greedy" with `priority`, or "dp" with chi.
  std::string mechanism;
  std::string priority;
  std::optional<PriorityFunction> priority_function;
  double chi = 0.0;

  double predicted_ratio() const { return predicted_opt / predicted_mech_welfare; }
  std::unique_ptr<Mechanism> make_mechanism() const;
};

/// Separation constants. Unset fields take the family's defaults.
struct Perturbation {
  std::optional<double> eps;
  std::optional<double> del;
  std::optional<double> mu;
};

/// 2^-(ceil(log2(4p)) + 2): p * eps <= 1/16 and every time stays dyadic.
double default_eps(int p);

/// Greedy with exponential priority on C = h * n_max (h >= 2). Long groups of h
/// jobs preempt each other in turn; the last group (h-1 jobs of n_max plus one
/// unit job) is the only one that completes, while OPT runs the h-wide short
/// jobs back to back and then the last long group.
AdversarialInstance gen_exp_lower(int h, int n_max, int kappa, double chi, int p,
                                  Perturbation pert = {});

/// Same chain on a single machine (C = 1).
AdversarialInstance gen_single_machine(int kappa, double chi, int p, Perturbation pert = {});

/// Single-machine chain for an arbitrary priority f with f(1) > 1.
AdversarialInstance gen_general_f(const PriorityFunction& f, int kappa, int p,
                                  Perturbation pert = {});

/// Single-machine chain for f(delta) = 1 + a delta (a > 0).
AdversarialInstance gen_linear(double a, int kappa, int p, Perturbation pert = {});

/// Zero-laxity unit jobs on capacity C (even, > 2): each block of four jobs
/// hands the machine to a slightly denser job, shrinking the surviving value
/// by (1/2 + 1/C) per block. Targets greedy with chi = 2 unless given.
AdversarialInstance gen_nmax_eq_C(int capacity, int p, Perturbation pert = {}, double chi = 2.0);

/// Dynamic-program mechanism: h groups of long jobs per step and h * n_max
/// queues of unit short jobs.
AdversarialInstance gen_dp_lower(int h, int n_max, int kappa, double chi, int p,
                                 Perturbation pert = {});

/// (h/(h-1)) * chi/(1-chi^(-1/kappa)) + 1
double exp_lower_asymptotic(int h, int kappa, double chi);
/// (h n/((h-1)n+1)) * (chi - chi^(-1/kappa-p+1)) / (1 - chi^(-1/kappa)) + 1
double exp_lower_finite(int h, int n_max, int kappa, double chi, int p);
/// chi/(1-chi^(-1/kappa)) + 1
double single_machine_asymptotic(int kappa, double chi);
/// kappa/(1 - 1/f1) + f1 + 1
double general_f_asymptotic(int kappa, double f1);
/// kappa/a + (kappa+1) a / 2 + 3 (kappa+1) / 2
double linear_asymptotic(int kappa, double a);
/// n_max * chi/(1-chi^(-1/kappa)) + 1
double dp_asymptotic(int n_max, int kappa, double chi);

}  // namespace cloudauction
