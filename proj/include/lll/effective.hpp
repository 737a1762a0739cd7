#pragma once

#include <cstdint>
#include <map>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lll/core.hpp"
#include "lll/finite.hpp"
#include "lll/tape.hpp"

namespace lll {

/// A countable instance presented by computable enumerators. Implementations
/// must be pure (same query, same answer) and safe to query concurrently.
class EffectiveInstance {
 public:
  virtual ~EffectiveInstance() = default;

  virtual VariableSpec variable_spec(VarIndex i) const = 0;
  /// Finite list of ids of the events involving P_i.
  virtual std::vector<EventId> events_of_variable(VarIndex i) const = 0;
  virtual Event event_def(EventId id) const = 0;
  virtual Rational weight(EventId id) const = 0;
  virtual Rational epsilon() const = 0;

  /// Ids of the events whose largest variable is i, ascending. The default
  /// filters events_of_variable(i).
  virtual std::vector<EventId> events_with_max_var(VarIndex i) const;

  /// The slack condition for one event on its induced finite sub-instance.
  /// The default evaluates it exactly over all neighbours.
  virtual ConditionRow check_condition(EventId id) const;
};

/// Fetches event `id` and checks it is consistent with having been listed
/// for variable `listed_for`.
Event checked_event(const EffectiveInstance& instance, EventId id, VarIndex listed_for);

/// Presents a finite instance as an effective one. Variables past the end
/// are constant (range 1) and touch no events.
class FiniteEffectiveInstance final : public EffectiveInstance {
 public:
  explicit FiniteEffectiveInstance(FiniteInstance instance);

  VariableSpec variable_spec(VarIndex i) const override;
  std::vector<EventId> events_of_variable(VarIndex i) const override;
  Event event_def(EventId id) const override;
  Rational weight(EventId id) const override;
  Rational epsilon() const override { return instance_.epsilon; }

  const FiniteInstance& finite() const { return instance_; }

 private:
  FiniteInstance instance_;
  std::map<VarIndex, std::vector<EventId>> by_var_;
  std::map<EventId, std::size_t> by_id_;
};

struct EventOrdering {
  VarIndex upto = 0;
  std::vector<EventId> ids;
  std::vector<VarIndex> max_vars;  // parallel to ids
};

/// All events with max vbl <= upto, sorted by (max vbl, id).
EventOrdering order_events(const EffectiveInstance& instance, VarIndex upto);

struct PrefixSnapshot {
  VarIndex stage = 0;
  std::vector<Value> values;  // P_0 .. P_stage
  std::uint64_t steps_elapsed = 0;

  friend bool operator==(const PrefixSnapshot&, const PrefixSnapshot&) = default;
};

class StageBudgetExhausted : public Error {
 public:
  StageBudgetExhausted(VarIndex stage, std::uint64_t steps);
  VarIndex stage() const { return stage_; }
  std::uint64_t steps() const { return steps_; }

 private:
  VarIndex stage_;
  std::uint64_t steps_;
};

/// Instance-side data of each stage: the events that become active with
/// their definitions, condition checks and T_k. Computed once and shared by
/// every run over the same instance; safe for concurrent use.
class StagePlan {
 public:
  struct Stage {
    std::vector<std::shared_ptr<const Event>> events;  // ascending id
    long double expected = 0;                          // T_k, for budgets only
    std::uint64_t default_budget = 0;                  // max(10^4, ceil(100 T_k))
  };

  explicit StagePlan(const EffectiveInstance& instance, bool verify_conditions = true, bool require_dyadic = false);

  const EffectiveInstance& instance() const { return instance_; }
  /// Computes stages up to k on first use. Throws ConditionFailed when an
  /// event of the stage fails the slack check.
  const Stage& stage(VarIndex k) const;
  const Sampler& sampler(VarIndex v) const;
  /// Definition of an event listed for variable `listed_for`, range-checked.
  std::shared_ptr<const Event> event(EventId id, VarIndex listed_for) const;

 private:
  const EffectiveInstance& instance_;
  bool verify_;
  bool dyadic_;
  mutable std::recursive_mutex mutex_;
  mutable std::deque<Stage> stages_;
  mutable std::unordered_map<VarIndex, std::unique_ptr<Sampler>> samplers_;
  mutable std::unordered_map<EventId, std::shared_ptr<const Event>> events_;
};

struct StageOptions {
  /// Resamples allowed per stage; default 100 * T_i clamped to >= 10^4.
  std::optional<std::uint64_t> stage_budget;
  /// Cap on total resamples across all stages.
  std::optional<std::uint64_t> total_budget;
  /// Check the slack condition on each event as it becomes active.
  bool verify_conditions = true;
  /// Reject non-dyadic variables (exact enumeration).
  bool require_dyadic = false;
  /// Shared plan; when set, its own verify/dyadic flags apply.
  std::shared_ptr<const StagePlan> plan;
};

/// One execution of the staged algorithm: stage i resamples, by priority,
/// the events with max vbl <= i until all of them hold. Variables are
/// instantiated lazily when their stage is reached.
class StagedRun {
 public:
  StagedRun(const EffectiveInstance& instance, Tape& tape, StageOptions options = {});
  ~StagedRun();
  StagedRun(const StagedRun&) = delete;
  StagedRun& operator=(const StagedRun&) = delete;

  /// Runs every stage up to and including i that has not run yet; returns
  /// the snapshot at the end of stage i.
  PrefixSnapshot run_stage(VarIndex i);
  std::vector<PrefixSnapshot> run_stages(VarIndex upto);

  /// Index of the next stage to run (0 when fresh).
  VarIndex next_stage() const { return next_stage_; }
  std::uint64_t steps() const { return log_.records.size(); }
  const ExecutionLog& log() const;
  Assignment values() const;
  std::optional<Value> value(VarIndex v) const;

  /// True when P_0..P_last provably never change again: every event that
  /// could still move them is either pinned by a variable whose value
  /// satisfies all its events, or lies in a finite satisfied region closed
  /// under such dependencies. `limit` bounds the events explored.
  bool certified_stable(VarIndex last, std::size_t limit = 100000) const;

 private:
  struct State;
  const EffectiveInstance& instance_;
  StageOptions options_;
  std::unique_ptr<State> state_;
  mutable ExecutionLog log_;
  VarIndex next_stage_ = 0;
};

std::vector<PrefixSnapshot> run_stages(const EffectiveInstance& instance, Tape& tape, VarIndex upto,
                                       StageOptions options = {});

/// Max variable index over the events within dependency distance m of the
/// events involving P_i; i itself when no event involves P_i.
VarIndex reach(const EffectiveInstance& instance, VarIndex i, unsigned m);

struct StabilizationBound {
  VarIndex variable = 0;
  Rational epsilon;
  std::uint64_t steps = 0;      // N(i, eps)
  unsigned reach_depth = 0;     // m
  VarIndex reach_var = 0;       // j
  Rational expected_resamples;  // T_j
};

/// Smallest m with sum_{A containing P_i} (1-e)^m x/(1-x) <= eps/2, j =
/// reach(i, m), T_j = sum over events with max vbl <= j of x/(1-x), and
/// N = ceil(2 T_j / eps).
StabilizationBound stabilization_bound(const EffectiveInstance& instance, VarIndex i, const Rational& eps);

/// Step of the last resample that changed the value of P_i, found by running
/// stages until P_i is certified stable. nullopt if that does not happen by
/// `max_stage`. 0 if P_i never changed.
std::optional<std::uint64_t> last_change_step(const EffectiveInstance& instance, Tape& tape, VarIndex i,
                                              VarIndex max_stage, StageOptions options = {});

}  // namespace lll
