#include "lll/core.hpp"

#include <algorithm>
#include <unordered_map>

namespace lll {

bool VariableSpec::is_dyadic() const {
  return std::all_of(distribution.begin(), distribution.end(),
                     [](const Rational& p) { return p.is_dyadic(); });
}

void VariableSpec::validate() const {
  if (distribution.empty())
    fail(ErrorCode::instance_inconsistency, "variable " + std::to_string(index) + " has empty range");
  Rational total;
  for (const Rational& p : distribution) {
    if (p <= Rational(0))
      fail(ErrorCode::instance_inconsistency,
           "variable " + std::to_string(index) + " has non-positive probability " + p.to_string());
    total += p;
  }
  if (total != Rational(1))
    fail(ErrorCode::instance_inconsistency,
         "variable " + std::to_string(index) + " probabilities sum to " + total.to_string());
}

VariableSpec VariableSpec::uniform(VarIndex index, std::size_t range) {
  VariableSpec spec;
  spec.index = index;
  spec.distribution.assign(range, Rational(1, static_cast<long>(range)));
  return spec;
}

Event::Event(EventId id, std::vector<VarIndex> vars, std::vector<Tuple> forbidden)
    : id_(id), vars_(std::move(vars)), forbidden_(std::move(forbidden)) {
  if (vars_.empty()) fail(ErrorCode::instance_inconsistency, "event " + std::to_string(id_) + " has no variables");
  for (std::size_t k = 1; k < vars_.size(); ++k)
    if (vars_[k - 1] >= vars_[k])
      fail(ErrorCode::instance_inconsistency,
           "event " + std::to_string(id_) + ": variables must be strictly increasing");
  for (const Tuple& t : forbidden_)
    if (t.size() != vars_.size())
      fail(ErrorCode::instance_inconsistency,
           "event " + std::to_string(id_) + ": forbidden tuple has wrong arity");
  std::sort(forbidden_.begin(), forbidden_.end());
  forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()), forbidden_.end());
}

bool Event::contains(VarIndex v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool Event::shares_variable(const Event& other) const {
  auto a = vars_.begin(), b = other.vars_.begin();
  while (a != vars_.end() && b != other.vars_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

bool Event::is_forbidden(std::span<const Value> local) const {
  if (forbidden_.size() == 1) return std::equal(local.begin(), local.end(), forbidden_[0].begin());
  return std::binary_search(forbidden_.begin(), forbidden_.end(), local,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                            });
}

const VariableSpec& FiniteInstance::variable(VarIndex i) const {
  if (i >= variables.size())
    fail(ErrorCode::instance_inconsistency, "unknown variable " + std::to_string(i));
  return variables[i];
}

const Event& FiniteInstance::event(EventId id) const {
  for (const Event& e : events)
    if (e.id() == id) return e;
  fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
}

const Rational& FiniteInstance::weight(EventId id) const {
  auto it = weights.find(id);
  if (it == weights.end()) fail(ErrorCode::instance_inconsistency, "no weight for event " + std::to_string(id));
  return it->second;
}

void FiniteInstance::validate() const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].index != i)
      fail(ErrorCode::instance_inconsistency, "variables must be listed with indices 0..n-1");
    variables[i].validate();
  }
  if (epsilon < Rational(0) || epsilon >= Rational(1))
    fail(ErrorCode::instance_inconsistency, "epsilon must lie in [0,1), got " + epsilon.to_string());

  std::vector<EventId> ids;
  for (const Event& e : events) {
    ids.push_back(e.id());
    for (VarIndex v : e.vars())
      if (v >= variables.size())
        fail(ErrorCode::instance_inconsistency,
             "event " + std::to_string(e.id()) + " references missing variable " + std::to_string(v));
    e.validate_ranges([&](VarIndex v) { return variables[v].range_size(); });
    const Rational& x = weight(e.id());
    if (x <= Rational(0) || x >= Rational(1))
      fail(ErrorCode::instance_inconsistency,
           "weight of event " + std::to_string(e.id()) + " must lie in (0,1), got " + x.to_string());
    if (event_probability(e, variables) == Rational(1))
      fail(ErrorCode::instance_inconsistency,
           "event " + std::to_string(e.id()) + " has probability 1 and cannot be avoided");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    fail(ErrorCode::instance_inconsistency, "duplicate event id");
}

Rational event_probability(const Event& event, std::span<const VariableSpec> variables) {
  std::vector<const VariableSpec*> specs;
  specs.reserve(event.vars().size());
  for (VarIndex v : event.vars()) {
    const VariableSpec* found = nullptr;
    if (v < variables.size() && variables[v].index == v) {
      found = &variables[v];
    } else {
      for (const VariableSpec& s : variables)
        if (s.index == v) found = &s;
    }
    if (!found)
      fail(ErrorCode::instance_inconsistency,
           "event " + std::to_string(event.id()) + " references missing variable " + std::to_string(v));
    specs.push_back(found);
  }
  Rational total;
  for (const Tuple& t : event.forbidden()) {
    Rational term(1);
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] >= specs[k]->range_size())
        fail(ErrorCode::instance_inconsistency, "forbidden value out of range");
      term *= specs[k]->distribution[t[k]];
    }
    total += term;
  }
  return total;
}

const std::vector<EventId>& DependencyGraph::neighbors(EventId id) const {
  auto it = adjacency.find(id);
  if (it == adjacency.end()) fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
  return it->second;
}

bool DependencyGraph::closed_adjacent(EventId a, EventId b) const {
  if (a == b) return true;
  const auto& n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), b);
}

DependencyGraph build_dependency_graph(const FiniteInstance& instance) {
  std::unordered_map<VarIndex, std::vector<EventId>> by_var;
  DependencyGraph graph;
  for (const Event& e : instance.events) {
    graph.adjacency[e.id()];
    for (VarIndex v : e.vars()) by_var[v].push_back(e.id());
  }
  for (const Event& e : instance.events) {
    auto& adj = graph.adjacency[e.id()];
    for (VarIndex v : e.vars())
      for (EventId other : by_var[v])
        if (other != e.id()) adj.push_back(other);
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return graph;
}

Rational condition_rhs(const Rational& x, std::span<const Rational> neighbor_weights,
                       const Rational& eps) {
  Rational rhs = (Rational(1) - eps) * x;
  for (const Rational& w : neighbor_weights) rhs *= Rational(1) - w;
  return rhs;
}

ConditionReport check_lll(const FiniteInstance& instance, bool with_slack) {
  DependencyGraph graph = build_dependency_graph(instance);
  ConditionReport report;
  report.with_slack = with_slack;
  const Rational eps = with_slack ? instance.epsilon : Rational(0);
  for (const Event& e : instance.events) {
    std::vector<Rational> nw;
    for (EventId n : graph.neighbors(e.id())) nw.push_back(instance.weight(n));
    ConditionRow row;
    row.event = e.id();
    row.lhs = event_probability(e, instance.variables);
    row.rhs = condition_rhs(instance.weight(e.id()), nw, eps);
    row.slack = row.rhs - row.lhs;
    row.pass = row.lhs <= row.rhs;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace lll
