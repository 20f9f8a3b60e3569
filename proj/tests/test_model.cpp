#include <doctest.h>

#include <random>

#include "cloudauction/model.hpp"

using namespace cloudauction;

namespace {

bool has_message(const ValidationResult& r, const std::string& msg) {
  for (const auto& v : r.violations)
    if (v.message == msg) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal legal job validates") {
  const Instance inst(1, 1, {{0, 0.0, 1.0, 1, 1.0, 1.0}});
  CHECK(validate_instance(inst).ok());
}

TEST_CASE("window shorter than length is reported with the job id") {
  const Instance inst(1, 1, {{3, 0.0, 0.5, 1, 1.0, 1.0}});
  const auto r = validate_instance(inst);
  REQUIRE_FALSE(r.ok());
  CHECK(has_message(r, kWindowTooShort));
  CHECK(r.violations.front().job == JobId{3});
}

TEST_CASE("demand above capacity is reported") {
  const Instance inst(4, 1, {{0, 0.0, 1.0, 5, 1.0, 1.0}});
  CHECK(has_message(validate_instance(inst), kDemandExceedsCapacity));
}

TEST_CASE("every broken field is reported") {
  const Instance inst(2, 2,
                      {{0, 0.0, 1.0, 1, 1.0, 1.0},
                       {0, 0.0, 1.0, 1, 1.0, 1.0},     // duplicate id
                       {1, -1.0, 1.0, 1, 1.0, 1.0},    // negative release
                       {2, 2.0, 1.0, 1, 1.0, 1.0},     // deadline before release
                       {3, 0.0, 5.0, 1, 3.0, 1.0},     // length above kappa
                       {4, 0.0, 5.0, 1, 0.5, 1.0},     // length below 1
                       {5, 0.0, 5.0, 0, 1.0, 1.0},     // zero demand
                       {6, 0.0, 5.0, 1, 1.0, 0.0},     // zero value
                       {-1, 0.0, 5.0, 1, 1.0, 1.0}});  // negative id
  const auto r = validate_instance(inst);
  CHECK(r.violations.size() >= 8);
  CHECK_FALSE(validate_instance(Instance(0, 1, {})).ok());
  CHECK_FALSE(validate_instance(Instance(1, 0, {})).ok());
}

TEST_CASE("jobs are kept sorted by release then id") {
  const Instance inst(1, 1, {{5, 1.0, 2.0, 1, 1.0, 1.0}, {2, 1.0, 2.0, 1, 1.0, 1.0},
                             {9, 0.0, 1.0, 1, 1.0, 1.0}});
  REQUIRE(inst.jobs.size() == 3);
  CHECK(inst.jobs[0].id == 9);
  CHECK(inst.jobs[1].id == 2);
  CHECK(inst.jobs[2].id == 5);
  const Instance moved = inst.with_value(2, 42.0);
  CHECK(moved.find(2)->value == 42.0);
  CHECK(inst.find(2)->value == 1.0);
  CHECK(inst.find(77) == nullptr);
}

TEST_CASE("dominance examples") {
  const JobType a{0, 0, 10, 2, 3, 5};
  CHECK(dominates(a, {0, 1, 9, 3, 4, 4}));
  CHECK_FALSE(dominates(a, a));
  CHECK_FALSE(dominates(a, {0, 0, 10, 2, 3, 6}));
}

TEST_CASE("dominance is a strict partial order on random triples") {
  std::mt19937_64 rng(5);
  auto draw = [&] {
    std::uniform_int_distribution<int> small(0, 2);
    JobType j;
    j.release = small(rng);
    j.deadline = 5 + small(rng);
    j.demand = 1 + small(rng);
    j.length = 1 + small(rng);
    j.value = 1 + small(rng);
    return j;
  };
  int transitive_cases = 0;
  for (int t = 0; t < 20000; ++t) {
    const JobType a = draw(), b = draw(), c = draw();
    CHECK_FALSE(dominates(a, a));
    if (dominates(a, b)) CHECK_FALSE(dominates(b, a));
    if (dominates(a, b) && dominates(b, c)) {
      ++transitive_cases;
      CHECK(dominates(a, c));
    }
  }
  CHECK(transitive_cases > 0);
}

TEST_CASE("outcome bookkeeping") {
  const Instance inst(2, 1, {{0, 0, 1, 1, 1, 4.0}, {1, 0, 1, 1, 1, 6.0}, {2, 0, 1, 1, 1, 9.0}});
  const Outcome o = make_outcome(inst, {2, 0}, {{0, 1.5}, {2, 3.0}});
  CHECK(o.completed == std::vector<JobId>{0, 2});
  CHECK(o.welfare == doctest::Approx(13.0));
  CHECK(o.welfare == doctest::Approx(welfare_of(inst, o.completed)));
  CHECK(o.payments.at(1) == 0.0);
  CHECK(o.utilities.at(0) == doctest::Approx(2.5));
  CHECK(o.utilities.at(1) == 0.0);
  CHECK(o.utilities.at(2) == doctest::Approx(6.0));
  CHECK(o.is_completed(2));
  CHECK_FALSE(o.is_completed(1));
}
