#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "cloudauction/adversarial.hpp"
#include "cloudauction/harness.hpp"
#include "cloudauction/oracle.hpp"

using namespace cloudauction;

namespace {

std::vector<JobId> simulated_winners(const AdversarialInstance& adv) {
  return run(adv.instance, *adv.make_mechanism()).completed;
}

double measured_ratio(const AdversarialInstance& adv) {
  return competitive_ratio(adv.instance, *adv.make_mechanism(), adv.predicted_opt).ratio;
}

void check_family(const AdversarialInstance& adv) {
  CAPTURE(adv.family);
  CHECK(validate_instance(adv.instance).ok());
  CHECK(adv.predicted_opt >= adv.predicted_mech_welfare);
  CHECK(simulated_winners(adv) == adv.predicted_mech_winners);
  CHECK(run(adv.instance, *adv.make_mechanism()).welfare ==
        doctest::Approx(adv.predicted_mech_welfare));
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(exp_lower_asymptotic(2, 1, 2.0) == doctest::Approx(9.0));
  CHECK(single_machine_asymptotic(1, 2.0) == doctest::Approx(5.0));
  CHECK(general_f_asymptotic(4, 3.0) == doctest::Approx(10.0));
  CHECK(general_f_asymptotic(4, 3.0) == doctest::Approx(std::pow(std::sqrt(4.0) + 1, 2) + 1));
  CHECK(general_f_asymptotic(1, 2.0) == doctest::Approx(5.0));
  CHECK(linear_asymptotic(1, 1.0) == doctest::Approx(5.0));
  CHECK(linear_asymptotic(2, optimal_a(2)) == doctest::Approx(std::sqrt(12.0) + 4.5));
  CHECK(linear_asymptotic(2, optimal_a(2)) == doctest::Approx(7.964).epsilon(1e-3));
  CHECK(dp_asymptotic(1, 1, 2.0) == doctest::Approx(5.0));
  CHECK(dp_asymptotic(4, 1, 2.0) == doctest::Approx(17.0));
  for (int kappa : {1, 2, 5}) {
    const double best = linear_asymptotic(kappa, optimal_a(kappa));
    for (double a = 0.05; a < 6.0; a += 0.05) CHECK(linear_asymptotic(kappa, a) >= best - 1e-12);
  }
}

TEST_CASE("default separations are dyadic and small") {
  CHECK(default_eps(1) == 1.0 / 16);
  CHECK(default_eps(10) == 1.0 / 256);
  for (int p = 1; p < 200; ++p) CHECK(p * default_eps(p) <= 1.0 / 16);
}

TEST_CASE("multi-instance exponential family") {
  const auto adv = gen_exp_lower(2, 3, 1, 2.0, 10);
  check_family(adv);
  CHECK(adv.asymptotic_ratio == doctest::Approx(9.0));
  CHECK(adv.instance.capacity == 6);
  // p long groups of h jobs plus h short jobs per unit of the chain.
  CHECK(adv.instance.jobs.size() == 10 * 2 + 10 * 2);
  CHECK(adv.predicted_mech_winners.size() == 2);
  const double ratio = measured_ratio(adv);
  CHECK(std::abs(ratio - exp_lower_finite(2, 3, 1, 2.0, 10)) / ratio < 0.02);
  check_family(gen_exp_lower(3, 2, 2, optimal_chi(2), 6));
  CHECK_THROWS_AS(gen_exp_lower(1, 3, 1, 2.0, 10), std::invalid_argument);
}

TEST_CASE("single-machine family") {
  const auto adv = gen_single_machine(1, 2.0, 12);
  check_family(adv);
  CHECK(adv.asymptotic_ratio == doctest::Approx(5.0));
  CHECK(adv.predicted_mech_winners.size() == 1);
  const double r = measured_ratio(adv);
  CHECK(r >= 4.5);
  CHECK(r <= 5.0);
  const auto tiny = gen_single_machine(1, 2.0, 1);
  check_family(tiny);
  CHECK(measured_ratio(tiny) >= 1.0);
  for (int kappa : {2, 3}) check_family(gen_single_machine(kappa, optimal_chi(kappa), 6));
}

TEST_CASE("general priority family") {
  const auto f = parse_priority("poly:3:1", 4);
  const auto adv = gen_general_f(f, 4, 5);
  check_family(adv);
  CHECK(adv.asymptotic_ratio == doctest::Approx(10.0));
  check_family(gen_general_f(parse_priority("poly:2:2", 1), 1, 6));
  CHECK(gen_general_f(parse_priority("poly:2:2", 1), 1, 6).asymptotic_ratio == doctest::Approx(5.0));
  CHECK_THROWS_AS(gen_general_f(PriorityFunction::linear(0.0), 1, 4), std::invalid_argument);
}

TEST_CASE("linear family") {
  const auto adv = gen_linear(optimal_a(2), 2, 6);
  check_family(adv);
  CHECK(adv.asymptotic_ratio == doctest::Approx(7.964).epsilon(1e-3));
  check_family(gen_linear(1.0, 1, 8));
  CHECK(gen_linear(1.0, 1, 8).asymptotic_ratio == doctest::Approx(5.0));
}

TEST_CASE("n_max = C family") {
  const auto adv = gen_nmax_eq_C(4, 10);
  check_family(adv);
  CHECK(adv.instance.jobs.size() == 40);
  CHECK(adv.predicted_mech_winners == std::vector<JobId>{39});
  CHECK(adv.predicted_opt == doctest::Approx(std::pow(2.0, 11)));
  CHECK(measured_ratio(adv) == doctest::Approx(std::pow(0.75, -10)).epsilon(0.05));
  CHECK(measured_ratio(gen_nmax_eq_C(4, 1)) > 1.0);
  for (double chi : {1.5, 3.0, 4.0}) check_family(gen_nmax_eq_C(6, 8, {}, chi));
  CHECK_THROWS_AS(gen_nmax_eq_C(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(gen_nmax_eq_C(5, 4), std::invalid_argument);
}

TEST_CASE("dynamic-program family") {
  const auto adv = gen_dp_lower(2, 1, 1, 2.0, 12);
  check_family(adv);
  CHECK(adv.asymptotic_ratio == doctest::Approx(5.0));
  CHECK(std::abs(measured_ratio(adv) - 5.0) / 5.0 < 0.1);
  CHECK(gen_dp_lower(2, 4, 1, 2.0, 4).asymptotic_ratio == doctest::Approx(17.0));
  check_family(gen_dp_lower(2, 4, 1, 2.0, 6));
  check_family(gen_dp_lower(1, 1, 2, 2.25, 5));
}

TEST_CASE("predicted optima match the exact oracle on small members") {
  const std::vector<AdversarialInstance> small = {
      gen_single_machine(1, 2.0, 4),       gen_single_machine(2, 2.25, 3),
      gen_exp_lower(2, 1, 1, 2.0, 3),      gen_exp_lower(2, 2, 1, 2.0, 2),
      gen_linear(1.0, 1, 4),               gen_general_f(parse_priority("poly:3:1", 2), 2, 3),
      gen_nmax_eq_C(4, 2),                 gen_nmax_eq_C(4, 4),
      gen_dp_lower(1, 1, 1, 2.0, 4),       gen_dp_lower(2, 1, 1, 2.0, 3)};
  for (const auto& adv : small) {
    CAPTURE(adv.family);
    REQUIRE(adv.instance.jobs.size() <= kMaxOracleJobs);
    const double opt = offline_opt(adv.instance).welfare;
    CHECK(std::abs(opt - adv.predicted_opt) <= 0.01 * adv.predicted_opt);
  }
}

TEST_CASE("measured ratio grows with p") {
  const std::vector<std::function<AdversarialInstance(int)>> families = {
      [](int p) { return gen_single_machine(1, 2.0, p); },
      [](int p) { return gen_single_machine(2, 2.25, p); },
      [](int p) { return gen_exp_lower(2, 3, 1, 2.0, p); },
      [](int p) { return gen_dp_lower(2, 1, 1, 2.0, p); },
      [](int p) { return gen_nmax_eq_C(4, p); }};
  for (const auto& family : families) {
    double prev = 0.0;
    for (int p = 2; p <= 12; p += 2) {
      const auto adv = family(p);
      const double r = measured_ratio(adv);
      CAPTURE(adv.family);
      CAPTURE(p);
      CHECK(r >= prev - 1e-12);
      if (adv.family != "nmaxC") CHECK(r <= adv.asymptotic_ratio);
      prev = r;
    }
  }
}

TEST_CASE("unsafe separation overrides are refused") {
  CHECK_THROWS_AS(gen_single_machine(1, 2.0, 10, {0.1, std::nullopt, std::nullopt}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_single_machine(1, 2.0, 10, {std::nullopt, 0.01, std::nullopt}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_nmax_eq_C(4, 6, {std::nullopt, std::nullopt, 0.01}), std::invalid_argument);
  CHECK_THROWS_AS(gen_dp_lower(2, 1, 1, 2.0, 6, {std::nullopt, 0.004, std::nullopt}),
                  std::invalid_argument);
  CHECK_NOTHROW(gen_single_machine(1, 2.0, 10, {1.0 / 128, 1.0 / 4096, std::nullopt}));
}
