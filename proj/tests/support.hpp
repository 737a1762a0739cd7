#pragma once

// Instance builders and small independent oracles shared by the tests.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lll/core.hpp"

namespace testing_support {

/// Tiny exact fraction over __int128, independent of the GMP-backed Rational.
struct Frac {
  __int128 n = 0, d = 1;
  Frac(__int128 num = 0, __int128 den = 1) : n(num), d(den) { norm(); }
  void norm() {
    if (d < 0) n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) n /= a, d /= a;
  }
  friend Frac operator*(Frac a, Frac b) { return Frac(a.n * b.n, a.d * b.d); }
  friend Frac operator+(Frac a, Frac b) { return Frac(a.n * b.d + b.n * a.d, a.d * b.d); }
  friend Frac operator-(Frac a, Frac b) { return Frac(a.n * b.d - b.n * a.d, a.d * b.d); }
  friend bool operator<=(Frac a, Frac b) { return a.n * b.d <= b.n * a.d; }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
  std::string str() const {
    auto s = [](__int128 v) {
      bool neg = v < 0;
      if (neg) v = -v;
      std::string r;
      do r.insert(r.begin(), char('0' + int(v % 10))), v /= 10;
      while (v);
      return neg ? "-" + r : r;
    };
    return d == 1 ? s(n) : s(n) + "/" + s(d);
  }
};

inline lll::VariableSpec bit(lll::VarIndex i) { return lll::VariableSpec::uniform(i, 2); }

/// All-positive clause: the event forbids the all-zero tuple.
inline lll::Event clause_event(lll::EventId id, std::vector<lll::VarIndex> vars) {
  lll::Tuple zeros(vars.size(), 0);
  return lll::Event(id, std::move(vars), {zeros});
}

/// `count` clauses of size m on uniform bits, clause k on k(m-1) .. k(m-1)+m-1.
inline lll::FiniteInstance uniform_chain(std::size_t m, std::size_t count, lll::Rational x, lll::Rational eps) {
  lll::FiniteInstance inst;
  const std::size_t nvars = count == 0 ? 0 : count * (m - 1) + 1;
  for (std::size_t i = 0; i < nvars; ++i) inst.variables.push_back(bit(i));
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<lll::VarIndex> vars;
    for (std::size_t t = 0; t < m; ++t) vars.push_back(k * (m - 1) + t);
    inst.events.push_back(clause_event(k, vars));
    inst.weights[k] = x;
  }
  inst.epsilon = eps;
  return inst;
}

/// A size-m clause meeting `neighbors` other clauses, each in one variable.
inline lll::FiniteInstance star(std::size_t m, std::size_t neighbors, lll::Rational x, lll::Rational eps) {
  lll::FiniteInstance inst;
  std::vector<lll::VarIndex> center;
  lll::VarIndex next = 0;
  for (std::size_t t = 0; t < m; ++t) center.push_back(next++);
  inst.events.push_back(clause_event(0, center));
  for (std::size_t j = 0; j < neighbors; ++j) {
    std::vector<lll::VarIndex> vars{center[j % m]};
    for (std::size_t t = 1; t < m; ++t) vars.push_back(next++);
    inst.events.push_back(clause_event(j + 1, vars));
  }
  for (lll::VarIndex i = 0; i < next; ++i) inst.variables.push_back(bit(i));
  for (const auto& e : inst.events) inst.weights[e.id()] = x;
  inst.epsilon = eps;
  return inst;
}

#ifdef LLL_TEST_DATA
inline std::string data_path(const std::string& name) { return std::string(LLL_TEST_DATA) + "/" + name; }
#endif

}  // namespace testing_support
