#include <cmath>
#include <map>

#include "doctest.h"
#include "lll/tape.hpp"
#include "support.hpp"

using lll::Rational;

namespace {

lll::VariableSpec spec(std::vector<Rational> dist) {
  lll::VariableSpec s;
  s.index = 0;
  s.distribution = std::move(dist);
  return s;
}

lll::Value decode(const lll::VariableSpec& s, std::vector<bool> bits, std::uint64_t* used = nullptr) {
  lll::ExplicitTape tape(std::move(bits));
  std::uint64_t n = 0;
  lll::Value v = lll::Sampler(s).sample(tape, {}, n);
  if (used) *used = n;
  return v;
}

}  // namespace

TEST_CASE("arithmetic decoding of a dyadic distribution") {
  auto s = spec({Rational(1, 4), Rational(3, 4)});
  std::uint64_t used = 0;
  // [0,1/4) -> 0, [1/4,1) -> 1
  CHECK(decode(s, {1}, &used) == 1);
  CHECK(used == 1);
  CHECK(decode(s, {0, 1}, &used) == 1);
  CHECK(used == 2);
  CHECK(decode(s, {0, 0}, &used) == 0);
  CHECK(used == 2);
  CHECK_THROWS_AS(decode(s, {0}), lll::Error);
}

TEST_CASE("a single-valued variable consumes no bits") {
  std::uint64_t used = 7;
  CHECK(decode(lll::VariableSpec::uniform(0, 1), {}, &used) == 0);
  CHECK(used == 0);
}

TEST_CASE("non-dyadic cells are decoded by interval refinement") {
  auto s = spec({Rational(1, 3), Rational(2, 3)});
  CHECK(decode(s, {0, 0}) == 0);           // [0,1/4) in [0,1/3)
  CHECK(decode(s, {1}) == 1);              // [1/2,1) in [1/3,1)
  CHECK(decode(s, {0, 1, 1}) == 1);        // [3/8,1/2)
  CHECK(decode(s, {0, 1, 0, 1, 0, 0}) == 0);  // [5/16,21/64) in [0,1/3)
}

TEST_CASE("exhausting the range of all short tapes reproduces the distribution") {
  // every 10-bit tape; cells fully determined within 10 bits get mass 2^-10
  auto s = spec({Rational(1, 8), Rational(1, 2), Rational(3, 8)});
  std::map<lll::Value, int> count;
  for (int t = 0; t < 1024; ++t) {
    std::vector<bool> bits;
    for (int b = 9; b >= 0; --b) bits.push_back((t >> b) & 1);
    count[decode(s, bits)]++;
  }
  CHECK(count[0] == 128);
  CHECK(count[1] == 512);
  CHECK(count[2] == 384);
}

TEST_CASE("random tape is deterministic per seed") {
  lll::RandomTape a(42), b(42), c(43);
  int diff = 0;
  for (int i = 0; i < 256; ++i) {
    bool x = a.draw({}), y = b.draw({}), z = c.draw({});
    CHECK(x == y);
    diff += x != z;
  }
  CHECK(diff > 64);
  CHECK(a.cursor() == 256);
}

TEST_CASE("initial draws of a variable do not depend on query order") {
  lll::RandomTape a(5), b(5);
  auto s = lll::VariableSpec::uniform(0, 7);
  lll::Sampler sampler(s);
  std::uint64_t bits = 0;
  std::vector<lll::Value> first, second(10);
  for (lll::VarIndex v = 0; v < 10; ++v) first.push_back(sampler.sample(a, {true, v}, bits));
  // interleave resample draws and reverse order
  for (int k = 0; k < 5; ++k) b.draw({});
  for (lll::VarIndex v = 10; v-- > 0;) second[v] = sampler.sample(b, {true, v}, bits);
  CHECK(first == second);
}

TEST_CASE("sampled frequencies match the distribution") {
  auto s = spec({Rational(1, 10), Rational(3, 10), Rational(6, 10)});
  lll::Sampler sampler(s);
  lll::RandomTape tape(2024);
  const int n = 60000;
  std::vector<int> count(3, 0);
  std::uint64_t bits = 0;
  for (int i = 0; i < n; ++i) count[sampler.sample(tape, {}, bits)]++;
  const double p[3] = {0.1, 0.3, 0.6};
  double chi2 = 0;
  for (int v = 0; v < 3; ++v) chi2 += std::pow(count[v] - n * p[v], 2) / (n * p[v]);
  // 2 degrees of freedom, 0.999 quantile 13.8
  CHECK(chi2 < 13.8);
}

TEST_CASE("tiny probabilities beyond the 64-bit fast path") {
  // 2^-70 needs the exact continuation
  auto s = spec({Rational::pow2(-70), Rational(1) - Rational::pow2(-70)});
  std::vector<bool> zeros(70, false);
  CHECK(decode(s, zeros) == 0);
  std::vector<bool> almost(70, false);
  almost[69] = true;
  CHECK(decode(s, almost) == 1);
}
