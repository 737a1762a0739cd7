#include "lll/finite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "resample_core.hpp"

namespace lll {

Value Assignment::at(VarIndex v) const {
  auto it = values.find(v);
  if (it == values.end()) fail(ErrorCode::instance_inconsistency, "variable " + std::to_string(v) + " unassigned");
  return it->second;
}

Tuple Assignment::local(const Event& e) const {
  Tuple t;
  t.reserve(e.vars().size());
  for (VarIndex v : e.vars()) t.push_back(at(v));
  return t;
}

namespace {

std::string condition_message(const ConditionReport& report) {
  std::string msg = "local lemma condition fails for event(s)";
  for (const ConditionRow& r : report.rows)
    if (!r.pass) msg += " " + std::to_string(r.event);
  return msg;
}

}  // namespace

ConditionFailed::ConditionFailed(ConditionReport report)
    : Error(ErrorCode::condition_failed, condition_message(report)), report_(std::move(report)) {}

std::vector<EventId> priority_ordering(const FiniteInstance& instance) {
  std::vector<const Event*> evs;
  for (const Event& e : instance.events) evs.push_back(&e);
  std::sort(evs.begin(), evs.end(), [](const Event* a, const Event* b) {
    return std::pair(a->max_var(), a->id()) < std::pair(b->max_var(), b->id());
  });
  std::vector<EventId> out;
  for (const Event* e : evs) out.push_back(e->id());
  return out;
}

Assignment sample_initial(const FiniteInstance& instance, Tape& tape) {
  Assignment a;
  for (const VariableSpec& v : instance.variables) a.values[v.index] = sample_variable(v, tape, DrawTag{true, v.index});
  return a;
}

std::optional<EventId> first_violated(const FiniteInstance& instance, const Assignment& assignment,
                                      std::span<const EventId> ordering) {
  for (EventId id : ordering)
    if (assignment.violates(instance.event(id))) return id;
  return std::nullopt;
}

Rational resample_bound(const Rational& x) { return x / (Rational(1) - x); }

std::uint64_t default_budget(const FiniteInstance& instance) {
  Rational total;
  for (const Event& e : instance.events) total += resample_bound(instance.weight(e.id()));
  mpz_class b = ceil(total * Rational(100));
  if (b < 10000) return 10000;
  return b.fits_ulong_p() ? b.get_ui() : ~0ULL;
}

SolveResult solve_finite(const FiniteInstance& instance, std::span<const EventId> ordering, Tape& tape,
                         std::uint64_t max_steps) {
  ConditionReport report = check_lll(instance, false);
  if (!report.pass) throw ConditionFailed(std::move(report));
  return solve_finite_unchecked(instance, ordering, tape, max_steps);
}

SolveResult solve_finite_unchecked(const FiniteInstance& instance, std::span<const EventId> ordering,
                                   Tape& tape, std::uint64_t max_steps) {
  if (max_steps == 0) fail(ErrorCode::invalid_argument, "max_steps must be positive");
  if (ordering.size() != instance.events.size())
    fail(ErrorCode::invalid_argument, "ordering must be a permutation of the event ids");

  std::vector<Sampler> samplers;
  samplers.reserve(instance.variables.size());
  for (const VariableSpec& v : instance.variables) samplers.emplace_back(v);

  detail::ResampleCore core(tape, [&](VarIndex v) -> const Sampler& { return samplers.at(v); });

  SolveResult result;
  for (const VariableSpec& v : instance.variables) result.log.initial_bits += core.sample_initial(v.index);
  result.log.initial_values = core.assignment();

  std::unordered_map<EventId, const Event*> by_id;
  for (const Event& e : instance.events) by_id[e.id()] = &e;
  for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
    auto it = by_id.find(ordering[pos]);
    if (it == by_id.end() || it->second == nullptr)
      fail(ErrorCode::invalid_argument, "ordering must be a permutation of the event ids");
    core.activate(*it->second, detail::Key{pos, 0});
    it->second = nullptr;
  }

  std::uint64_t step = 0;
  while (core.any_violated()) {
    if (step >= max_steps) {
      result.status = SolveStatus::budget_exhausted;
      break;
    }
    result.log.records.push_back(core.resample_first(++step));
  }
  result.assignment = core.assignment();
  result.log.final_values = result.assignment;
  return result;
}

Assignment replay(const ExecutionLog& log, const FiniteInstance& instance) {
  Assignment a = log.initial_values;
  for (const ResampleRecord& r : log.records) {
    const Event& e = instance.event(r.event);
    if (r.before.size() != e.vars().size() || r.after.size() != e.vars().size())
      fail(ErrorCode::instance_inconsistency, "record arity mismatch at step " + std::to_string(r.step));
    if (a.local(e) != r.before)
      fail(ErrorCode::instance_inconsistency, "record does not match replayed state at step " + std::to_string(r.step));
    for (std::size_t k = 0; k < e.vars().size(); ++k) a.values[e.vars()[k]] = r.after[k];
  }
  return a;
}

std::vector<EventResampleStat> resample_stats(std::span<const ExecutionLog> logs, const FiniteInstance& instance) {
  if (logs.empty()) fail(ErrorCode::invalid_argument, "resample_stats needs at least one log");
  std::map<EventId, std::vector<double>> counts;
  for (const Event& e : instance.events) counts[e.id()].assign(logs.size(), 0.0);
  for (std::size_t r = 0; r < logs.size(); ++r)
    for (const ResampleRecord& rec : logs[r].records) {
      auto it = counts.find(rec.event);
      if (it == counts.end()) fail(ErrorCode::instance_inconsistency, "log mentions unknown event");
      it->second[r] += 1;
    }

  constexpr double z99 = 2.5758293035489004;
  std::vector<EventResampleStat> out;
  const double n = static_cast<double>(logs.size());
  for (const Event& e : instance.events) {
    const auto& c = counts[e.id()];
    double mean = 0;
    for (double x : c) mean += x;
    mean /= n;
    double var = 0;
    for (double x : c) var += (x - mean) * (x - mean);
    var = logs.size() > 1 ? var / (n - 1) : 0.0;
    out.push_back({e.id(), mean, z99 * std::sqrt(var / n), resample_bound(instance.weight(e.id())).to_double()});
  }
  return out;
}

std::string WitnessTree::canonical() const {
  std::function<std::string(std::size_t)> rec = [&](std::size_t v) {
    std::vector<std::string> kids;
    for (std::size_t c : vertices[v].children) kids.push_back(rec(c));
    std::sort(kids.begin(), kids.end());
    std::string s = std::to_string(vertices[v].label) + "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return vertices.empty() ? std::string() : rec(0);
}

WitnessTree build_witness_tree(const ExecutionLog& log, const DependencyGraph& graph, std::uint64_t step) {
  if (step == 0 || step > log.records.size())
    fail(ErrorCode::out_of_range, "step " + std::to_string(step) + " outside 1.." + std::to_string(log.records.size()));
  WitnessTree tree;
  tree.vertices.push_back({log.records[step - 1].event, 0, 0, {}});
  for (std::uint64_t s = step - 1; s >= 1; --s) {
    EventId b = log.records[s - 1].event;
    std::optional<std::size_t> best;
    for (std::size_t v = 0; v < tree.vertices.size(); ++v)
      if (graph.closed_adjacent(tree.vertices[v].label, b) &&
          (!best || tree.vertices[v].depth > tree.vertices[*best].depth))
        best = v;
    if (best) {
      std::size_t idx = tree.vertices.size();
      tree.vertices.push_back({b, *best, tree.vertices[*best].depth + 1, {}});
      tree.vertices[*best].children.push_back(idx);
    }
  }
  return tree;
}

Rational tree_weight(const WitnessTree& tree, const FiniteInstance& instance) {
  std::map<EventId, Rational> memo;
  Rational w(1);
  for (const auto& v : tree.vertices) {
    auto it = memo.find(v.label);
    if (it == memo.end())
      it = memo.emplace(v.label, event_probability(instance.event(v.label), instance.variables)).first;
    w *= it->second;
  }
  return w;
}

namespace {

void write_tuple(std::ostream& out, const Tuple& t) {
  out << '(';
  for (std::size_t k = 0; k < t.size(); ++k) out << (k ? "," : "") << t[k];
  out << ')';
}

Tuple parse_tuple(const std::string& tok, std::size_t line) {
  if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
    fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad tuple '" + tok + "'");
  Tuple t;
  std::stringstream ss(tok.substr(1, tok.size() - 2));
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      t.push_back(static_cast<Value>(std::stoul(part)));
    } catch (const std::exception&) {
      fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad tuple '" + tok + "'");
    }
  }
  return t;
}

}  // namespace

void write_log(std::ostream& out, const ExecutionLog& log) {
  out << "init";
  for (auto [v, x] : log.initial_values.values) out << ' ' << v << '=' << x;
  out << '\n';
  for (const ResampleRecord& r : log.records) {
    out << "resample " << r.step << ' ' << r.event << " before ";
    write_tuple(out, r.before);
    out << " after ";
    write_tuple(out, r.after);
    out << " bits " << r.bits << '\n';
  }
}

ExecutionLog parse_log(std::istream& in, const FiniteInstance& instance) {
  ExecutionLog log;
  bool have_init = false;
  std::string raw;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& msg) {
    fail(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "init") {
        if (have_init) bad("duplicate init line");
        for (std::size_t k = 1; k < tok.size(); ++k) {
          auto eq = tok[k].find('=');
          if (eq == std::string::npos) bad("expected <i>=<v>");
          log.initial_values.values[std::stoull(tok[k].substr(0, eq))] =
              static_cast<Value>(std::stoul(tok[k].substr(eq + 1)));
        }
        have_init = true;
      } else if (tok[0] == "resample") {
        if (!have_init) bad("resample before init");
        if (tok.size() != 9 || tok[3] != "before" || tok[5] != "after" || tok[7] != "bits")
          bad("usage: resample <step> <event> before <tuple> after <tuple> bits <n>");
        ResampleRecord r;
        r.step = std::stoull(tok[1]);
        r.event = std::stoull(tok[2]);
        r.before = parse_tuple(tok[4], lineno);
        r.after = parse_tuple(tok[6], lineno);
        r.bits = std::stoull(tok[8]);
        if (r.step != log.records.size() + 1) bad("steps must be consecutive from 1");
        log.records.push_back(std::move(r));
      } else {
        bad("unknown directive '" + tok[0] + "'");
      }
    } catch (const std::invalid_argument&) {
      bad("bad number");
    } catch (const std::out_of_range&) {
      bad("number out of range");
    }
  }
  if (!have_init) fail(ErrorCode::parse_error, "missing init line");
  log.final_values = replay(log, instance);
  return log;
}

}  // namespace lll
