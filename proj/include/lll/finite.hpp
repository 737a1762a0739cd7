#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lll/core.hpp"
#include "lll/tape.hpp"

namespace lll {

struct Assignment {
  std::map<VarIndex, Value> values;

  bool has(VarIndex v) const { return values.count(v) != 0; }
  Value at(VarIndex v) const;
  Tuple local(const Event& e) const;
  bool violates(const Event& e) const { return e.is_forbidden(local(e)); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct ResampleRecord {
  std::uint64_t step = 0;  // 1-based
  EventId event = 0;
  Tuple before;
  Tuple after;
  std::uint64_t bits = 0;

  friend bool operator==(const ResampleRecord&, const ResampleRecord&) = default;
};

struct ExecutionLog {
  std::vector<ResampleRecord> records;
  Assignment initial_values;
  Assignment final_values;
  std::uint64_t initial_bits = 0;  // bits spent on the initial sample

  friend bool operator==(const ExecutionLog&, const ExecutionLog&) = default;
};

/// Thrown when a solve is requested on an instance failing the condition.
class ConditionFailed : public Error {
 public:
  explicit ConditionFailed(ConditionReport report);
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

enum class SolveStatus { solved, budget_exhausted };

struct SolveResult {
  SolveStatus status = SolveStatus::solved;
  Assignment assignment;
  ExecutionLog log;
};

/// Events sorted by (max variable, id).
std::vector<EventId> priority_ordering(const FiniteInstance& instance);

Assignment sample_initial(const FiniteInstance& instance, Tape& tape);

/// Earliest event of `ordering` violated by `assignment`, if any.
std::optional<EventId> first_violated(const FiniteInstance& instance, const Assignment& assignment,
                                      std::span<const EventId> ordering);

/// 100 * sum x/(1-x), clamped to at least 10^4.
std::uint64_t default_budget(const FiniteInstance& instance);

/// Moser-Tardos resampling, always resampling the first violated event of
/// `ordering`. Throws ConditionFailed if the non-slack condition fails.
SolveResult solve_finite(const FiniteInstance& instance, std::span<const EventId> ordering, Tape& tape,
                         std::uint64_t max_steps);

/// Same, without the up-front condition check.
SolveResult solve_finite_unchecked(const FiniteInstance& instance, std::span<const EventId> ordering,
                                   Tape& tape, std::uint64_t max_steps);

/// Applies every record to the initial values. Throws if a record's
/// `before` does not match the replayed state.
Assignment replay(const ExecutionLog& log, const FiniteInstance& instance);

struct EventResampleStat {
  EventId event = 0;
  double mean = 0;
  double half_width = 0;  // 99% normal-approximation half-width
  double bound = 0;       // x/(1-x)
};

std::vector<EventResampleStat> resample_stats(std::span<const ExecutionLog> logs,
                                              const FiniteInstance& instance);

/// x / (1 - x)
Rational resample_bound(const Rational& x);

struct WitnessTree {
  struct Vertex {
    EventId label = 0;
    std::size_t parent = 0;  // root points at itself
    std::size_t depth = 0;
    std::vector<std::size_t> children;
  };
  std::vector<Vertex> vertices;  // vertices[0] is the root

  std::size_t size() const { return vertices.size(); }
  /// Canonical form of the unordered labelled rooted tree.
  std::string canonical() const;
};

WitnessTree build_witness_tree(const ExecutionLog& log, const DependencyGraph& graph, std::uint64_t step);

Rational tree_weight(const WitnessTree& tree, const FiniteInstance& instance);

void write_log(std::ostream& out, const ExecutionLog& log);
/// Parses the log format and reconstructs final values by replay.
ExecutionLog parse_log(std::istream& in, const FiniteInstance& instance);

}  // namespace lll
