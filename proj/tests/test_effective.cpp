#include <cmath>

#include "doctest.h"
#include "lll/applications.hpp"
#include "lll/tape.hpp"
#include "support.hpp"

using lll::Rational;
using namespace testing_support;

namespace {

/// Events listed for a variable they do not contain.
class Inconsistent final : public lll::EffectiveInstance {
 public:
  lll::VariableSpec variable_spec(lll::VarIndex i) const override { return bit(i); }
  std::vector<lll::EventId> events_of_variable(lll::VarIndex i) const override { return {i}; }
  std::vector<lll::EventId> events_with_max_var(lll::VarIndex i) const override { return {i}; }
  lll::Event event_def(lll::EventId id) const override { return clause_event(id, {id + 1, id + 2}); }
  Rational weight(lll::EventId) const override { return Rational(1, 4); }
  Rational epsilon() const override { return Rational(1, 10); }
};

/// Single-variable events P_i != 0 with far too small weights.
class Overloaded final : public lll::EffectiveInstance {
 public:
  lll::VariableSpec variable_spec(lll::VarIndex i) const override { return bit(i); }
  std::vector<lll::EventId> events_of_variable(lll::VarIndex i) const override {
    return i == 3 ? std::vector<lll::EventId>{3} : std::vector<lll::EventId>{};
  }
  lll::Event event_def(lll::EventId id) const override { return clause_event(id, {id}); }
  Rational weight(lll::EventId) const override { return Rational(1, 4); }
  Rational epsilon() const override { return Rational(1, 10); }
};

}  // namespace

TEST_CASE("ordering prefix property") {
  auto fam = lll::make_family({"uniform-chain", 4, Rational(1, 10), ""});
  auto full = lll::order_events(*fam, 40);
  for (lll::VarIndex n = 0; n <= 40; ++n) {
    auto part = lll::order_events(*fam, n);
    REQUIRE(part.ids.size() <= full.ids.size());
    for (std::size_t k = 0; k < part.ids.size(); ++k) CHECK(part.ids[k] == full.ids[k]);
    for (std::size_t k = part.ids.size(); k < full.ids.size(); ++k) CHECK(full.max_vars[k] > n);
  }
}

TEST_CASE("stages on a finite instance reproduce the finite solver bit for bit") {
  auto inst = uniform_chain(4, 20, Rational(1, 4), Rational(1, 10));
  lll::FiniteEffectiveInstance eff(inst);
  auto ord = lll::priority_ordering(inst);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    lll::RandomTape t1(seed), t2(seed);
    auto finite = lll::solve_finite(inst, ord, t1, lll::default_budget(inst));
    lll::StagedRun run(eff, t2);
    run.run_stages(inst.variables.size() - 1);
    CHECK(run.log() == finite.log);
  }
}

TEST_CASE("snapshots satisfy every event inside their prefix") {
  auto chain = lll::chain_family();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    lll::RandomTape tape(seed);
    auto snaps = lll::run_stages(*chain, tape, 25);
    REQUIRE(snaps.size() == 26);
    for (const auto& s : snaps) {
      CHECK(s.values.size() == s.stage + 1);
      CHECK(lll::verify_prefix(*chain, s.values).pass());
    }
  }
}

TEST_CASE("a value changes between stages only through a resample that includes it") {
  auto fam = lll::make_family({"uniform-chain", 4, Rational(1, 10), ""});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    lll::RandomTape tape(seed);
    lll::StagedRun run(*fam, tape);
    std::vector<lll::Value> prev;
    std::size_t seen = 0;
    for (lll::VarIndex k = 0; k <= 40; ++k) {
      auto snap = run.run_stage(k);
      const auto& records = run.log().records;
      std::vector<bool> touched(k + 1, false);
      for (std::size_t r = seen; r < records.size(); ++r) {
        const lll::Event e = fam->event_def(records[r].event);
        for (auto v : e.vars())
          if (v <= k) touched[v] = true;
      }
      for (std::size_t v = 0; v < prev.size(); ++v)
        if (!touched[v]) CHECK(snap.values[v] == prev[v]);
      seen = records.size();
      prev = snap.values;
    }
  }
}

TEST_CASE("same seed, same snapshots") {
  auto chain = lll::chain_family();
  lll::RandomTape a(9), b(9);
  CHECK(lll::run_stages(*chain, a, 30) == lll::run_stages(*chain, b, 30));
}

TEST_CASE("a zero stage budget surfaces the stage index") {
  auto chain = lll::chain_family();
  lll::StageOptions opts;
  opts.stage_budget = 0;
  bool thrown = false;
  for (std::uint64_t seed = 0; seed < 20 && !thrown; ++seed) {
    lll::RandomTape tape(seed);
    try {
      lll::run_stages(*chain, tape, 30, opts);
    } catch (const lll::StageBudgetExhausted& e) {
      thrown = true;
      CHECK(e.code() == lll::ErrorCode::budget_exhausted);
      CHECK(e.stage() >= 1);
      CHECK(e.steps() == 0);
    }
  }
  CHECK(thrown);
}

TEST_CASE("condition failure is raised when its stage is reached") {
  Overloaded inst;
  lll::RandomTape tape(0);
  lll::StagedRun run(inst, tape);
  CHECK_NOTHROW(run.run_stage(2));
  CHECK_THROWS_AS(run.run_stage(3), lll::ConditionFailed);
}

TEST_CASE("enumerators that disagree are rejected") {
  Inconsistent inst;
  lll::RandomTape tape(0);
  try {
    lll::run_stages(inst, tape, 5);
    FAIL("expected an inconsistency");
  } catch (const lll::Error& e) {
    CHECK(e.code() == lll::ErrorCode::instance_inconsistency);
  }
}

TEST_CASE("completed stages cannot be rerun") {
  auto chain = lll::chain_family();
  lll::RandomTape tape(0);
  lll::StagedRun run(*chain, tape);
  run.run_stage(5);
  CHECK_NOTHROW(run.run_stage(5));
  CHECK_THROWS_AS(run.run_stage(3), lll::Error);
}

TEST_CASE("reach on the pair chain") {
  auto chain = lll::chain_family();
  // events {k, k+1}: distance m from event 0 reaches event m
  for (unsigned m = 0; m < 10; ++m) CHECK(lll::reach(*chain, 0, m) == m + 1);
  CHECK(lll::reach(*lll::no_events_family(), 4, 3) == 4);
}

TEST_CASE("stabilization bound of the pair chain matches a direct computation") {
  auto chain = lll::chain_family();
  // P_0 lies in event 0 only, x/(1-x) = 1/3, decay 9/10
  unsigned m = 0;
  double term = 1.0 / 3;
  while (term > 0.05) term *= 0.9, ++m;
  auto b = lll::stabilization_bound(*chain, 0, Rational(1, 10));
  CHECK(b.reach_depth == m);
  CHECK(b.reach_var == m + 1);
  // events 0..m have max vbl <= m+1
  CHECK(b.expected_resamples == Rational(static_cast<long>(m + 1), 3));
  CHECK(b.steps == static_cast<std::uint64_t>(std::ceil(2.0 * (m + 1) / 3 / 0.1 - 1e-9)));
  CHECK(b.steps == 134);
  CHECK_THROWS_AS(lll::stabilization_bound(*chain, 0, Rational(0)), lll::Error);
}

TEST_CASE("stabilization of a variable without events is immediate") {
  auto b = lll::stabilization_bound(*lll::no_events_family(), 3, Rational(1, 10));
  CHECK(b.steps == 0);
  lll::RandomTape tape(1);
  CHECK(lll::last_change_step(*lll::no_events_family(), tape, 3, 10) == std::optional<std::uint64_t>(0));
}

TEST_CASE("certified stability agrees with the final values of a finite instance") {
  auto inst = uniform_chain(4, 10, Rational(1, 4), Rational(1, 10));
  lll::FiniteEffectiveInstance eff(inst);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    lll::RandomTape tape(seed);
    lll::StagedRun run(eff, tape);
    run.run_stages(inst.variables.size() - 1);
    CHECK(run.certified_stable(inst.variables.size() - 1));
  }
}
