#include <set>
#include <sstream>

#include "doctest.h"
#include "lll/finite.hpp"
#include "lll/tape.hpp"
#include "support.hpp"

using lll::Rational;
using namespace testing_support;

namespace {

lll::SolveResult solve(const lll::FiniteInstance& inst, std::uint64_t seed, std::uint64_t budget = 0) {
  lll::RandomTape tape(seed);
  auto ord = lll::priority_ordering(inst);
  return lll::solve_finite(inst, ord, tape, budget ? budget : lll::default_budget(inst));
}

bool satisfies_all(const lll::FiniteInstance& inst, const lll::Assignment& a) {
  for (const auto& e : inst.events)
    if (a.violates(e)) return false;
  return true;
}

}  // namespace

TEST_CASE("priority ordering sorts by max variable then id") {
  lll::FiniteInstance inst;
  for (int i = 0; i < 6; ++i) inst.variables.push_back(bit(i));
  inst.events = {clause_event(7, {0, 5}), clause_event(3, {1, 2}), clause_event(1, {2, 3}), clause_event(2, {0, 2})};
  for (const auto& e : inst.events) inst.weights[e.id()] = Rational(1, 2);
  CHECK(lll::priority_ordering(inst) == std::vector<lll::EventId>{2, 3, 1, 7});
}

TEST_CASE("no events: the initial sample is returned unchanged") {
  lll::FiniteInstance inst;
  for (int i = 0; i < 8; ++i) inst.variables.push_back(bit(i));
  auto r = solve(inst, 11);
  CHECK(r.status == lll::SolveStatus::solved);
  CHECK(r.log.records.empty());
  CHECK(r.assignment == r.log.initial_values);
}

TEST_CASE("solutions satisfy every event and replay from the log") {
  auto inst = uniform_chain(4, 20, Rational(1, 4), Rational(1, 10));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto r = solve(inst, seed);
    REQUIRE(r.status == lll::SolveStatus::solved);
    CHECK(satisfies_all(inst, r.assignment));
    CHECK(lll::replay(r.log, inst) == r.assignment);
    // each record resamples the first violated event in priority order
    for (std::size_t k = 0; k < r.log.records.size(); ++k) CHECK(r.log.records[k].step == k + 1);
  }
}

TEST_CASE("same seed, same log") {
  auto inst = uniform_chain(3, 10, Rational(1, 2), Rational(0));
  auto a = solve(inst, 77), b = solve(inst, 77);
  CHECK(a.log == b.log);
}

TEST_CASE("budget exhaustion is reported, not thrown") {
  auto inst = uniform_chain(4, 20, Rational(1, 4), Rational(1, 10));
  bool exhausted = false;
  for (std::uint64_t seed = 0; seed < 20 && !exhausted; ++seed) {
    auto r = solve(inst, seed, 1);
    if (r.status == lll::SolveStatus::budget_exhausted) {
      exhausted = true;
      CHECK(r.log.records.size() == 1);
    }
  }
  CHECK(exhausted);
}

TEST_CASE("solve refuses instances failing the condition") {
  auto inst = star(3, 3, Rational(1, 8), Rational(0));
  lll::RandomTape tape(0);
  auto ord = lll::priority_ordering(inst);
  CHECK_THROWS_AS(lll::solve_finite(inst, ord, tape, 100), lll::ConditionFailed);
}

TEST_CASE("log text round-trips") {
  auto inst = uniform_chain(4, 8, Rational(1, 4), Rational(1, 10));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto r = solve(inst, seed);
    std::ostringstream out;
    lll::write_log(out, r.log);
    std::istringstream in(out.str());
    auto parsed = lll::parse_log(in, inst);
    CHECK(parsed.records.size() == r.log.records.size());
    for (std::size_t k = 0; k < parsed.records.size(); ++k) {
      CHECK(parsed.records[k].event == r.log.records[k].event);
      CHECK(parsed.records[k].before == r.log.records[k].before);
      CHECK(parsed.records[k].after == r.log.records[k].after);
    }
    CHECK(parsed.final_values == r.assignment);
  }
}

TEST_CASE("resample bound is x/(1-x)") {
  CHECK(lll::resample_bound(Rational(1, 4)) == Rational(1, 3));
  CHECK(lll::resample_bound(Rational(1, 2)) == Rational(1));
}

TEST_CASE("witness tree: root is the resampled event, children are closed neighbours") {
  auto inst = uniform_chain(4, 20, Rational(1, 4), Rational(1, 10));
  auto graph = lll::build_dependency_graph(inst);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto r = solve(inst, seed);
    for (const auto& rec : r.log.records) {
      auto tree = lll::build_witness_tree(r.log, graph, rec.step);
      CHECK(tree.vertices[0].label == rec.event);
      for (std::size_t i = 1; i < tree.size(); ++i) {
        const auto& v = tree.vertices[i];
        const auto& parent = tree.vertices[v.parent];
        CHECK(graph.closed_adjacent(v.label, parent.label));
        CHECK(v.depth == parent.depth + 1);
      }
      // children of one vertex carry distinct labels
      for (const auto& v : tree.vertices) {
        std::set<lll::EventId> labels;
        for (auto c : v.children) CHECK(labels.insert(tree.vertices[c].label).second);
      }
      // every label is a 4-clause, so a tree of size s has weight 16^-s
      CHECK(lll::tree_weight(tree, inst) == Rational::pow2(-4 * static_cast<long>(tree.size())));
      ++checked;
    }
  }
  CHECK(checked > 0);
  CHECK_THROWS_AS(lll::build_witness_tree(lll::ExecutionLog{}, graph, 1), lll::Error);
}

TEST_CASE("witness tree of a hand-made log") {
  // events: 0 on {0,1}, 1 on {1,2}, 2 on {3}
  lll::FiniteInstance inst;
  for (int i = 0; i < 4; ++i) inst.variables.push_back(bit(i));
  inst.events = {clause_event(0, {0, 1}), clause_event(1, {1, 2}), clause_event(2, {3})};
  for (const auto& e : inst.events) inst.weights[e.id()] = Rational(1, 2);
  inst.epsilon = Rational(0);
  auto graph = lll::build_dependency_graph(inst);
  lll::ExecutionLog log;
  auto rec = [](std::uint64_t step, lll::EventId e) {
    lll::ResampleRecord r;
    r.step = step;
    r.event = e;
    return r;
  };
  log.records = {rec(1, 0), rec(2, 2), rec(3, 1), rec(4, 0)};
  auto t = lll::build_witness_tree(log, graph, 4);
  // step 4 (event 0) <- step 3 (event 1, shares 1) <- step 1 (event 0, shares 1 with event 1 at depth 1)
  CHECK(t.size() == 3);
  CHECK(t.vertices[0].label == 0);
  auto t2 = lll::build_witness_tree(log, graph, 2);
  CHECK(t2.size() == 1);
  CHECK(lll::build_witness_tree(log, graph, 3).canonical() != t.canonical());
}

TEST_CASE("resample statistics need logs") {
  auto inst = uniform_chain(4, 2, Rational(1, 4), Rational(1, 10));
  CHECK_THROWS_AS(lll::resample_stats({}, inst), lll::Error);
}
