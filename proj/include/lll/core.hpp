#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lll/error.hpp"
#include "lll/rational.hpp"

namespace lll {

using VarIndex = std::uint64_t;
using EventId = std::uint64_t;
using Value = std::uint32_t;
using Tuple = std::vector<Value>;

/// A discrete random variable P_i with range {0, ..., n_i - 1}.
struct VariableSpec {
  VarIndex index = 0;
  std::vector<Rational> distribution;

  std::size_t range_size() const { return distribution.size(); }
  bool is_dyadic() const;
  /// Throws unless every probability is positive and they sum to exactly 1.
  void validate() const;

  static VariableSpec uniform(VarIndex index, std::size_t range);
};

/// A forbidden event: a finite variable set and the local evaluations that
/// make the event happen.
class Event {
 public:
  Event() = default;
  /// `vars` must be strictly increasing; forbidden tuples are sorted and
  /// deduplicated.
  Event(EventId id, std::vector<VarIndex> vars, std::vector<Tuple> forbidden);

  EventId id() const { return id_; }
  const std::vector<VarIndex>& vars() const { return vars_; }
  const std::vector<Tuple>& forbidden() const { return forbidden_; }
  VarIndex max_var() const { return vars_.back(); }

  bool contains(VarIndex v) const;
  bool shares_variable(const Event& other) const;
  bool is_forbidden(std::span<const Value> local) const;

  /// Throws if some tuple entry is outside its variable's range.
  template <typename RangeOf>
  void validate_ranges(RangeOf&& range_of) const;

 private:
  EventId id_ = 0;
  std::vector<VarIndex> vars_;
  std::vector<Tuple> forbidden_;
};

struct FiniteInstance {
  std::vector<VariableSpec> variables;  // variables[i].index == i
  std::vector<Event> events;
  std::map<EventId, Rational> weights;
  Rational epsilon;

  const VariableSpec& variable(VarIndex i) const;
  const Event& event(EventId id) const;
  const Rational& weight(EventId id) const;

  void validate() const;
};

struct DependencyGraph {
  std::map<EventId, std::vector<EventId>> adjacency;

  const std::vector<EventId>& neighbors(EventId id) const;
  /// B is in the closed neighbourhood of A: B == A or they share a variable.
  bool closed_adjacent(EventId a, EventId b) const;
};

struct ConditionRow {
  EventId event = 0;
  Rational lhs;
  Rational rhs;
  Rational slack;
  bool pass = false;
};

struct ConditionReport {
  std::vector<ConditionRow> rows;
  bool pass = true;
  bool with_slack = true;
};

/// Exact Pr[A] under the product measure.
Rational event_probability(const Event& event, std::span<const VariableSpec> variables);

DependencyGraph build_dependency_graph(const FiniteInstance& instance);

/// (1 - eps) * x * prod (1 - x(E)) over the supplied neighbour weights.
Rational condition_rhs(const Rational& x, std::span<const Rational> neighbor_weights,
                       const Rational& eps);

ConditionReport check_lll(const FiniteInstance& instance, bool with_slack);

/// Line-oriented instance text format.
FiniteInstance parse_instance(std::istream& in);
FiniteInstance load_instance(const std::string& path);
void write_instance(std::ostream& out, const FiniteInstance& instance);

template <typename RangeOf>
void Event::validate_ranges(RangeOf&& range_of) const {
  std::vector<std::size_t> ranges;
  ranges.reserve(vars_.size());
  for (VarIndex v : vars_) ranges.push_back(range_of(v));
  for (const Tuple& t : forbidden_)
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] >= ranges[k])
        throw Error(ErrorCode::instance_inconsistency,
                    "event " + std::to_string(id_) + ": value " + std::to_string(t[k]) +
                        " out of range for variable " + std::to_string(vars_[k]));
}

}  // namespace lll
