// Acceptance run: one PASS/FAIL line per criterion with its runtime and limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "lll/applications.hpp"
#include "lll/tape.hpp"
#include "support.hpp"

using lll::Rational;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool ok = out.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s %2d %-28s %7.2fs (limit %.0fs) %s%s\n", ok ? "PASS" : "FAIL", number, name, secs, limit_seconds,
              out.detail.c_str(), in_time ? "" : " [too slow]");
  std::fflush(stdout);
}

lll::FiniteInstance chain20() { return uniform_chain(4, 20, Rational(1, 4), Rational(1, 10)); }

std::vector<lll::ExecutionLog> chain20_logs() {
  static std::vector<lll::ExecutionLog> logs = [] {
    auto inst = chain20();
    auto ord = lll::priority_ordering(inst);
    std::vector<lll::ExecutionLog> out;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      lll::RandomTape tape(seed);
      out.push_back(lll::solve_finite(inst, ord, tape, lll::default_budget(inst)).log);
    }
    return out;
  }();
  return logs;
}

/// Longest run of '0' in a word.
std::size_t longest_zero_run(const std::string& w) {
  std::size_t best = 0, cur = 0;
  for (char c : w) {
    cur = c == '0' ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}

/// Brute force: all-zero axis-parallel rectangles of area >= min_area.
std::size_t zero_rectangles(const std::vector<std::vector<std::uint8_t>>& b, std::uint64_t min_area) {
  const std::size_t rows = b.size(), cols = rows ? b[0].size() : 0;
  std::vector<std::vector<int>> ones(rows + 1, std::vector<int>(cols + 1, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) ones[i + 1][j + 1] = ones[i][j + 1] + ones[i + 1][j] - ones[i][j] + b[i][j];
  std::size_t found = 0;
  for (std::size_t r0 = 0; r0 < rows; ++r0)
    for (std::size_t r1 = r0 + 1; r1 <= rows; ++r1)
      for (std::size_t c0 = 0; c0 < cols; ++c0)
        for (std::size_t c1 = c0 + 1; c1 <= cols; ++c1) {
          if ((r1 - r0) * (c1 - c0) < min_area) continue;
          if (ones[r1][c1] - ones[r0][c1] - ones[r1][c0] + ones[r0][c0] == 0) ++found;
        }
  return found;
}

}  // namespace

int main() {
  criterion(1, "condition exactness", 1, [] {
    auto m4 = lll::check_lll(star(4, 4, Rational(1, 4), Rational(1, 10)), true);
    auto m3 = lll::check_lll(star(3, 2, Rational(1, 2), Rational(1, 10)), true);
    auto m3z = lll::check_lll(star(3, 2, Rational(1, 2), Rational(0)), true);
    // oracle: 1/16 <= (9/10)(1/4)(3/4)^4 and 1/8 vs (9/10)(1/2)(1/2)^2
    const Frac r4 = Frac(9, 10) * Frac(1, 4) * Frac(81, 256);
    const Frac r3 = Frac(9, 10) * Frac(1, 8);
    const bool ok = m4.pass && m4.rows[0].lhs == Rational(1, 16) && m4.rows[0].rhs.to_string() == r4.str() &&
                    !m3.pass && !m3.rows[0].pass && m3.rows[0].rhs.to_string() == r3.str() && m3z.pass &&
                    m3z.rows[0].lhs == m3z.rows[0].rhs;
    return Outcome{ok, "m4 rhs " + m4.rows[0].rhs.to_string() + ", m3 rhs " + m3.rows[0].rhs.to_string()};
  });

  criterion(2, "resample bound", 30, [] {
    auto logs = chain20_logs();
    auto stats = lll::resample_stats(logs, chain20());
    double worst = -1e9;
    bool ok = stats.size() == 20;
    for (const auto& s : stats) {
      ok = ok && s.mean <= 1.0 / 3 + s.half_width;
      worst = std::max(worst, s.mean - 1.0 / 3 - s.half_width);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max(mean - 1/3 - hw) = %.4f over %zu events", worst, stats.size());
    return Outcome{ok, buf};
  });

  criterion(3, "stage/finite equivalence", 10, [] {
    auto inst = chain20();
    lll::FiniteEffectiveInstance eff(inst);
    auto ord = lll::priority_ordering(inst);
    int same = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      lll::RandomTape t1(seed), t2(seed);
      auto finite = lll::solve_finite(inst, ord, t1, lll::default_budget(inst));
      lll::StagedRun run(eff, t2);
      run.run_stages(inst.variables.size() - 1);
      same += run.log() == finite.log;
    }
    return Outcome{same == 100, std::to_string(same) + "/100 identical logs"};
  });

  criterion(4, "stabilization", 60, [] {
    auto chain = lll::chain_family();
    auto b = lll::stabilization_bound(*chain, 0, Rational(1, 10));
    const int seeds = 2000;
    int late = 0;
    for (int s = 0; s < seeds; ++s) {
      lll::RandomTape tape(static_cast<std::uint64_t>(s));
      auto step = lll::last_change_step(*chain, tape, 0, 2000);
      if (!step || *step > b.steps) ++late;
    }
    const double p = static_cast<double>(late) / seeds;
    const double sigma = std::sqrt(0.1 * 0.9 / seeds);
    char buf[128];
    std::snprintf(buf, sizeof buf, "N=%llu freq=%.4f limit=%.4f", static_cast<unsigned long long>(b.steps), p,
                  0.1 + 3 * sigma);
    return Outcome{p <= 0.1 + 3 * sigma, buf};
  });

  criterion(5, "exact conservation", 5, [] {
    auto single = lll::single_bit_family();
    bool ok = true;
    std::string last;
    for (unsigned d = 1; d <= 12; ++d) {
      auto dist = lll::enumerate_exact_distribution(*single, 0, d);
      Rational total = dist.unresolved;
      for (const auto& [t, m] : dist.mass) total += m;
      const Rational zero = dist.mass.count({0}) ? dist.mass.at({0}) : Rational(0);
      ok = ok && total == Rational(1) && zero >= Rational(1) - Rational::pow2(1 - static_cast<long>(d));
      last = zero.to_string();
    }
    return Outcome{ok, "mass(0) at D=12: " + last};
  });

  criterion(6, "extraction soundness", 60, [] {
    auto chain = lll::chain_family();
    lll::ExtractionParams exact;
    auto a = lll::extract_computable_prefix(*chain, 6, exact);
    auto report = lll::verify_prefix(*chain, a.values);
    lll::ExtractionParams mc;
    mc.mode = lll::ExtractionMode::monte_carlo;
    mc.replicas = 10000;
    auto b = lll::extract_computable_prefix(*chain, 6, mc);
    std::string word;
    for (auto v : a.values) word += std::to_string(v);
    const bool ok = report.pass() && report.checked > 0 && a.values == b.values;
    return Outcome{ok, "exact " + word + (a.values == b.values ? " = monte carlo" : " != monte carlo")};
  });

  criterion(7, "threshold N", 1, [] {
    const std::uint64_t n = lll::min_clause_size(Rational(1, 2), Rational(0));
    auto holds = [](double m) {
      const double g = 0.25;
      return std::pow(2.0, -0.75) * (1 - std::pow(2.0, -g * m) / (1 - std::pow(2.0, -g))) >= 0.5;
    };
    return Outcome{n == 22 && holds(22) && !holds(21), "N=" + std::to_string(n)};
  });

  criterion(8, "substring avoidance", 60, [] {
    lll::AvoidParams p;
    auto zeros = std::shared_ptr<const lll::ForbiddenSet>(lll::zero_runs());
    auto a = lll::avoid_substrings(zeros, 256, p);
    auto b = lll::avoid_substrings(zeros, 256, p);
    const std::size_t run = longest_zero_run(a.word);
    const std::uint64_t n = a.derivation.min_length;
    const bool ok = a.word.size() == 256 && run < n && a.word == b.word && a.windows.pass();
    return Outcome{ok, "N=" + std::to_string(n) + " longest zero run " + std::to_string(run)};
  });

  criterion(9, "2D avoidance", 120, [] {
    lll::AvoidParams p;
    auto rects = std::shared_ptr<const lll::PatternSet>(lll::zero_rectangles());
    auto r = lll::avoid_patterns_2d(rects, 8, p);
    bool shape = r.block.size() == 17;
    for (const auto& row : r.block) shape = shape && row.size() == 17;
    const std::size_t bad = zero_rectangles(r.block, r.derivation.min_length);
    return Outcome{shape && bad == 0 && r.rectangles.pass(),
                   "N=" + std::to_string(r.derivation.min_length) + " zero rectangles " + std::to_string(bad)};
  });

  criterion(10, "witness tree injectivity", 60, [] {
    auto inst = chain20();
    auto graph = lll::build_dependency_graph(inst);
    std::size_t logs_checked = 0, trees = 0, clashes = 0;
    for (const auto& log : chain20_logs()) {
      if (log.records.size() > 20) continue;
      ++logs_checked;
      std::map<lll::EventId, std::set<std::string>> seen;
      for (std::uint64_t step = 1; step <= log.records.size(); ++step) {
        auto tree = lll::build_witness_tree(log, graph, step);
        ++trees;
        if (!seen[tree.vertices[0].label].insert(tree.canonical()).second) ++clashes;
      }
    }
    return Outcome{clashes == 0 && logs_checked > 0, std::to_string(logs_checked) + " logs, " + std::to_string(trees) +
                                                         " trees, " + std::to_string(clashes) + " collisions"};
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
