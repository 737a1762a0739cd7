#include "doctest.h"
#include "lll/applications.hpp"
#include "support.hpp"

using lll::Rational;
using namespace testing_support;

TEST_CASE("exact distribution conserves mass at every depth") {
  auto single = lll::single_bit_family();
  for (unsigned d = 0; d <= 12; ++d) {
    auto dist = lll::enumerate_exact_distribution(*single, 0, d);
    Rational total = dist.unresolved;
    for (const auto& [t, m] : dist.mass) total += m;
    CHECK(total == Rational(1));
    // only value 0 survives; each resample of P_0 costs one bit
    CHECK(dist.mass.count(lll::Tuple{1}) == 0);
    if (d >= 1) CHECK(dist.mass.at(lll::Tuple{0}) >= Rational(1) - Rational::pow2(-static_cast<long>(d) + 1));
  }
}

TEST_CASE("exact distribution of the pair chain") {
  auto chain = lll::chain_family();
  for (unsigned d : {4u, 8u, 12u}) {
    auto dist = lll::enumerate_exact_distribution(*chain, 2, d);
    Rational total = dist.unresolved;
    for (const auto& [t, m] : dist.mass) {
      total += m;
      CHECK(lll::verify_prefix(*chain, t).pass());
      CHECK(m.is_dyadic());
    }
    CHECK(total == Rational(1));
  }
  // deeper enumeration resolves at least as much mass
  auto a = lll::enumerate_exact_distribution(*chain, 1, 6), b = lll::enumerate_exact_distribution(*chain, 1, 10);
  CHECK(b.unresolved <= a.unresolved);
}

TEST_CASE("exact mode needs dyadic distributions") {
  auto inst = uniform_chain(2, 2, Rational(1, 3), Rational(0));
  inst.variables[0].distribution = {Rational(1, 3), Rational(2, 3)};
  inst.weights[0] = inst.weights[1] = Rational(1, 2);
  lll::FiniteEffectiveInstance eff(inst);
  CHECK_THROWS_AS(lll::enumerate_exact_distribution(eff, 0, 4), lll::Error);
}

TEST_CASE("extraction on trivial families") {
  lll::ExtractionParams p;
  auto none = lll::extract_computable_prefix(*lll::no_events_family(), 5, p);
  CHECK(none.values == std::vector<lll::Value>(6, 0));
  CHECK(none.confidence == Rational(1));
  auto single = lll::extract_computable_prefix(*lll::single_bit_family(), 0, p);
  CHECK(single.values == std::vector<lll::Value>{0});
}

TEST_CASE("longer exact extractions extend shorter ones") {
  auto chain = lll::chain_family();
  lll::ExtractionParams p;
  p.depth = 12;
  std::vector<lll::Value> prev;
  for (lll::VarIndex s = 0; s <= 5; ++s) {
    auto px = lll::extract_computable_prefix(*chain, s, p);
    REQUIRE(px.values.size() == s + 1);
    CHECK(std::equal(prev.begin(), prev.end(), px.values.begin()));
    CHECK(lll::verify_prefix(*chain, px.values).pass());
    prev = px.values;
  }
}

TEST_CASE("greedy choice from a hand-made distribution") {
  lll::ExactDistribution d;
  d.last = 1;
  d.mass[{0, 0}] = Rational(0);
  d.mass[{0, 1}] = Rational(1, 4);
  d.mass[{1, 0}] = Rational(1, 2);
  d.unresolved = Rational(1, 4);
  CHECK(lll::extract_from_distribution(d).values == std::vector<lll::Value>{0, 1});
  lll::ExactDistribution empty;
  empty.unresolved = Rational(1);
  CHECK_THROWS_AS(lll::extract_from_distribution(empty), lll::ExtractionThresholdError);
}

TEST_CASE("too shallow enumeration reports a threshold failure with the masses") {
  lll::ExtractionParams p;
  p.depth = 2;
  try {
    lll::extract_computable_prefix(*lll::chain_family(), 6, p);
    FAIL("expected a threshold failure");
  } catch (const lll::ExtractionThresholdError& e) {
    CHECK(e.code() == lll::ErrorCode::extraction_threshold);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("monte carlo extraction is seeded and labelled") {
  lll::ExtractionParams p;
  p.mode = lll::ExtractionMode::monte_carlo;
  p.replicas = 500;
  p.seed = 3;
  auto a = lll::extract_computable_prefix(*lll::chain_family(), 4, p);
  auto b = lll::extract_computable_prefix(*lll::chain_family(), 4, p);
  CHECK(a.values == b.values);
  CHECK(a.mode == lll::ExtractionMode::monte_carlo);
  CHECK(a.confidence >= Rational(1, 20));
  CHECK(a.confidence <= Rational(1));
  CHECK(a.replicas_used + a.replicas_discarded == 500);
  CHECK(lll::verify_prefix(*lll::chain_family(), a.values).pass());
}

TEST_CASE("prefix verification") {
  auto chain = lll::chain_family();
  CHECK(lll::verify_prefix(*chain, {}).pass());
  auto bad = lll::verify_prefix(*chain, std::vector<lll::Value>{1, 0, 0, 1});
  CHECK(bad.violations == std::vector<lll::EventId>{1});
  CHECK(bad.checked == 3);
}
