#include <doctest.h>

#include <random>

#include "cloudauction/harness.hpp"
#include "cloudauction/oracle.hpp"
#include "oracles.hpp"

using namespace cloudauction;

TEST_CASE("offline optimum examples") {
  CHECK(offline_opt(Instance(1, 1, {})).welfare == 0.0);
  CHECK(offline_opt(Instance(1, 1, {{0, 0, 1, 1, 1, 4.5}})).welfare == 4.5);
  const auto sol = offline_opt(Instance(1, 1, {{0, 0, 1, 1, 1, 5.0}, {1, 0, 1, 1, 1, 3.0}}));
  CHECK(sol.welfare == 5.0);
  REQUIRE(sol.schedule.size() == 1);
  CHECK(sol.schedule[0].id == 0);
}

TEST_CASE("waiting can beat starting at release") {
  // A starts at 1 so that B fits at 0.
  const Instance inst(1, 2, {{0, 0.0, 3.0, 1, 2.0, 4.0}, {1, 0.0, 1.0, 1, 1.0, 3.0}});
  const auto sol = offline_opt(inst);
  CHECK(sol.welfare == 7.0);
  CHECK(sol.grid == 1.0);
  REQUIRE(sol.schedule.size() == 2);
  CHECK(sol.schedule[0].id == 1);
  CHECK(sol.schedule[1].start == 1.0);
}

TEST_CASE("grid inference and guards") {
  CHECK(infer_grid(Instance(1, 2, {{0, 0.25, 2.0, 1, 1.5, 1.0}})) == 0.25);
  CHECK(infer_grid(Instance(1, 2, {{0, 1.0 / 3.0, 2.0, 1, 1.5, 1.0}})) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(infer_grid(Instance(1, 2, {{0, 0.1 * M_PI, 2.0, 1, 1.5, 1.0}})), GuardError);
  CHECK_THROWS_AS(offline_opt(Instance(1, 2, {{0, 0.25, 2.0, 1, 1.5, 1.0}}), 1.0), GuardError);
  std::vector<JobType> many;
  for (int i = 0; i < 19; ++i) many.push_back({i, 0, 1, 1, 1, 1.0});
  CHECK_THROWS_AS(offline_opt(Instance(1, 1, many)), GuardError);
  CHECK_THROWS_AS(offline_opt(Instance(1, 1, {{0, 0, 1e6, 1, 1, 1.0}}), 1e-3), GuardError);
}

TEST_CASE("witness schedules are feasible and worth the reported welfare") {
  FuzzParams fp;
  fp.max_jobs = 9;
  fp.kappa = 2;
  for (const auto& inst : fuzz_instances(150, 3, fp)) {
    const auto sol = offline_opt(inst);
    double value = 0.0;
    for (const auto& s : sol.schedule) {
      const JobType* j = inst.find(s.id);
      REQUIRE(j != nullptr);
      value += j->value;
      CHECK(approx_leq(j->release, s.start));
      CHECK(approx_leq(s.start + j->length, j->deadline));
      int load = 0;
      for (const auto& o : sol.schedule) {
        const JobType* k = inst.find(o.id);
        if (approx_leq(o.start, s.start) && approx_less(s.start, o.start + k->length))
          load += k->demand;
      }
      CHECK(load <= inst.capacity);
    }
    CHECK(oracles::close(value, sol.welfare));
  }
}

TEST_CASE("offline optimum equals grid enumeration") {
  FuzzParams fp;
  fp.min_jobs = 0;
  fp.max_jobs = 8;
  fp.max_capacity = 3;
  fp.horizon = 4.0;
  fp.max_laxity = 1.0;
  for (const auto& inst : fuzz_instances(150, 12, fp))
    CHECK(oracles::close(offline_opt(inst, 0.25).welfare, oracles::enumerate_opt(inst, 0.25)));
}

TEST_CASE("knapsack reduction examples") {
  // Best packing is {3, 2} for 7; nothing reaches 8.
  const auto r = knapsack_to_instance({{3, 4.0}, {4, 5.0}, {2, 3.0}}, 5, 7.0);
  CHECK(r.instance.capacity == 5);
  REQUIRE(r.instance.jobs.size() == 3);
  for (const auto& j : r.instance.jobs) {
    CHECK(j.release == 0.0);
    CHECK(j.deadline == 1.0);
    CHECK(j.length == 1.0);
  }
  CHECK(r.instance.jobs[1].demand == 4);
  CHECK(offline_opt(r.instance).welfare == 7.0);
  CHECK(decide(r));
  CHECK_FALSE(decide(knapsack_to_instance({{3, 4.0}, {4, 5.0}, {2, 3.0}}, 5, 8.0)));
  CHECK(decide(knapsack_to_instance({}, 5, 0.0)));
  CHECK_FALSE(decide(knapsack_to_instance({{6, 10.0}}, 5, 1.0)));
}

TEST_CASE("reduced decisions match subset enumeration") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 150; ++t) {
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    const int cap = std::uniform_int_distribution<int>(1, 25)(rng);
    const auto items = oracles::random_items(rng, n, 10);
    const double best = oracles::brute_force_knapsack(items, cap);
    for (double k : {best, best * 0.9, best * 1.1 + 0.01})
      CHECK(decide(knapsack_to_instance(items, cap, k)) == (best >= k - kEps));
  }
}
