#include "lll/effective.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "resample_core.hpp"

namespace lll {

std::vector<EventId> EffectiveInstance::events_with_max_var(VarIndex i) const {
  std::vector<EventId> out;
  for (EventId id : events_of_variable(i))
    if (event_def(id).max_var() == i) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

ConditionRow EffectiveInstance::check_condition(EventId id) const {
  Event e = event_def(id);
  std::vector<VariableSpec> specs;
  std::set<EventId> neighbors;
  for (VarIndex v : e.vars()) {
    specs.push_back(variable_spec(v));
    for (EventId n : events_of_variable(v))
      if (n != id) neighbors.insert(n);
  }
  std::vector<Rational> nw;
  for (EventId n : neighbors) nw.push_back(weight(n));
  ConditionRow row;
  row.event = id;
  row.lhs = event_probability(e, specs);
  row.rhs = condition_rhs(weight(id), nw, epsilon());
  row.slack = row.rhs - row.lhs;
  row.pass = row.lhs <= row.rhs;
  return row;
}

Event checked_event(const EffectiveInstance& instance, EventId id, VarIndex listed_for) {
  Event e = instance.event_def(id);
  if (e.id() != id)
    fail(ErrorCode::instance_inconsistency,
         "event_def(" + std::to_string(id) + ") returned event " + std::to_string(e.id()));
  if (!e.contains(listed_for))
    fail(ErrorCode::instance_inconsistency, "event " + std::to_string(id) + " is listed for variable " +
                                                std::to_string(listed_for) + " but does not involve it");
  return e;
}

FiniteEffectiveInstance::FiniteEffectiveInstance(FiniteInstance instance) : instance_(std::move(instance)) {
  instance_.validate();
  for (std::size_t k = 0; k < instance_.events.size(); ++k) {
    const Event& e = instance_.events[k];
    by_id_[e.id()] = k;
    for (VarIndex v : e.vars()) by_var_[v].push_back(e.id());
  }
  for (auto& [v, ids] : by_var_) std::sort(ids.begin(), ids.end());
}

VariableSpec FiniteEffectiveInstance::variable_spec(VarIndex i) const {
  if (i < instance_.variables.size()) return instance_.variables[i];
  return VariableSpec::uniform(i, 1);
}

std::vector<EventId> FiniteEffectiveInstance::events_of_variable(VarIndex i) const {
  auto it = by_var_.find(i);
  return it == by_var_.end() ? std::vector<EventId>{} : it->second;
}

Event FiniteEffectiveInstance::event_def(EventId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
  return instance_.events[it->second];
}

Rational FiniteEffectiveInstance::weight(EventId id) const { return instance_.weight(id); }

EventOrdering order_events(const EffectiveInstance& instance, VarIndex upto) {
  EventOrdering ord;
  ord.upto = upto;
  for (VarIndex i = 0; i <= upto; ++i) {
    std::vector<EventId> ids = instance.events_with_max_var(i);
    std::sort(ids.begin(), ids.end());
    for (EventId id : ids) {
      Event e = checked_event(instance, id, i);
      if (e.max_var() != i)
        fail(ErrorCode::instance_inconsistency,
             "event " + std::to_string(id) + " listed with max variable " + std::to_string(i));
      ord.ids.push_back(id);
      ord.max_vars.push_back(i);
    }
  }
  return ord;
}

StageBudgetExhausted::StageBudgetExhausted(VarIndex stage, std::uint64_t steps)
    : Error(ErrorCode::budget_exhausted, "resample budget exhausted in stage " + std::to_string(stage) +
                                             " after " + std::to_string(steps) + " resamples"),
      stage_(stage),
      steps_(steps) {}

StagePlan::StagePlan(const EffectiveInstance& instance, bool verify_conditions, bool require_dyadic)
    : instance_(instance), verify_(verify_conditions), dyadic_(require_dyadic) {}

const Sampler& StagePlan::sampler(VarIndex v) const {
  std::lock_guard lock(mutex_);
  auto it = samplers_.find(v);
  if (it != samplers_.end()) return *it->second;
  VariableSpec spec = instance_.variable_spec(v);
  if (spec.index != v)
    fail(ErrorCode::instance_inconsistency, "variable_spec(" + std::to_string(v) + ") has index " +
                                                std::to_string(spec.index));
  if (dyadic_ && !spec.is_dyadic())
    fail(ErrorCode::invalid_argument,
         "variable " + std::to_string(v) + " has a non-dyadic distribution; exact mode needs dyadic ones");
  return *samplers_.emplace(v, std::make_unique<Sampler>(spec)).first->second;
}

std::shared_ptr<const Event> StagePlan::event(EventId id, VarIndex listed_for) const {
  std::lock_guard lock(mutex_);
  auto it = events_.find(id);
  if (it != events_.end()) return it->second;
  Event e = checked_event(instance_, id, listed_for);
  e.validate_ranges([this](VarIndex v) { return sampler(v).range_size(); });
  return events_.emplace(id, std::make_shared<const Event>(std::move(e))).first->second;
}

const StagePlan::Stage& StagePlan::stage(VarIndex k) const {
  std::lock_guard lock(mutex_);
  while (stages_.size() <= k) {
    const VarIndex j = stages_.size();
    Stage st;
    st.expected = stages_.empty() ? 0 : stages_.back().expected;
    std::vector<EventId> ids = instance_.events_with_max_var(j);
    std::sort(ids.begin(), ids.end());
    for (EventId id : ids) {
      auto e = event(id, j);
      if (e->max_var() != j)
        fail(ErrorCode::instance_inconsistency,
             "event " + std::to_string(id) + " listed with max variable " + std::to_string(j));
      if (verify_) {
        ConditionRow row = instance_.check_condition(id);
        if (!row.pass) {
          ConditionReport report;
          report.pass = false;
          report.rows.push_back(std::move(row));
          throw ConditionFailed(std::move(report));
        }
      }
      const long double x = instance_.weight(id).to_double();
      st.expected += x / (1 - x);
      st.events.push_back(std::move(e));
    }
    const long double b = std::ceil(100 * st.expected);
    st.default_budget = b < 10000 ? 10000 : (b < 1.8e19L ? static_cast<std::uint64_t>(b) : ~0ULL);
    stages_.push_back(std::move(st));
  }
  return stages_[k];
}

struct StagedRun::State {
  State(std::shared_ptr<const StagePlan> p, Tape& tape)
      : plan(std::move(p)), core(tape, [this](VarIndex v) -> const Sampler& { return plan->sampler(v); }) {}

  std::shared_ptr<const StagePlan> plan;
  detail::ResampleCore core;
};

StagedRun::StagedRun(const EffectiveInstance& instance, Tape& tape, StageOptions options)
    : instance_(instance), options_(options) {
  std::shared_ptr<const StagePlan> plan = options.plan;
  if (!plan) plan = std::make_shared<StagePlan>(instance, options.verify_conditions, options.require_dyadic);
  else if (&plan->instance() != &instance) fail(ErrorCode::invalid_argument, "stage plan belongs to another instance");
  state_ = std::make_unique<State>(std::move(plan), tape);
}

StagedRun::~StagedRun() = default;

PrefixSnapshot StagedRun::run_stage(VarIndex i) {
  if (i + 1 < next_stage_)
    fail(ErrorCode::out_of_range, "stage " + std::to_string(i) + " already completed");
  State& st = *state_;
  for (VarIndex k = next_stage_; k <= i; ++k) {
    for (VarIndex v = 0; v <= k; ++v)
      if (!st.core.assigned(v)) {
        log_.initial_bits += st.core.sample_initial(v);
        log_.initial_values.values[v] = st.core.value(v);
      }

    const StagePlan::Stage& plan = st.plan->stage(k);
    for (const auto& e : plan.events) st.core.activate(*e, detail::Key{k, e->id()});
    const std::uint64_t budget = options_.stage_budget ? *options_.stage_budget : plan.default_budget;
    std::uint64_t stage_steps = 0;
    while (st.core.any_violated()) {
      if (stage_steps >= budget || (options_.total_budget && steps() >= *options_.total_budget))
        throw StageBudgetExhausted(k, steps());
      log_.records.push_back(st.core.resample_first(steps() + 1));
      ++stage_steps;
    }
    next_stage_ = k + 1;
  }

  PrefixSnapshot snap;
  snap.stage = i;
  snap.steps_elapsed = steps();
  for (VarIndex v = 0; v <= i; ++v) snap.values.push_back(st.core.value(v));
  return snap;
}

std::vector<PrefixSnapshot> StagedRun::run_stages(VarIndex upto) {
  std::vector<PrefixSnapshot> out;
  for (VarIndex k = next_stage_; k <= upto; ++k) out.push_back(run_stage(k));
  return out;
}

const ExecutionLog& StagedRun::log() const {
  log_.final_values = state_->core.assignment();
  return log_;
}

Assignment StagedRun::values() const { return state_->core.assignment(); }

std::optional<Value> StagedRun::value(VarIndex v) const {
  if (!state_->core.assigned(v)) return std::nullopt;
  return state_->core.value(v);
}

bool StagedRun::certified_stable(VarIndex last, std::size_t limit) const {
  State& st = *state_;
  for (VarIndex v = 0; v <= last; ++v)
    if (!st.core.assigned(v)) return false;

  std::unordered_map<VarIndex, bool> frozen_memo;
  // A variable whose value appears in no forbidden tuple of any of its
  // events can never be resampled again.
  auto frozen = [&](VarIndex v) {
    if (!st.core.assigned(v)) return false;
    auto it = frozen_memo.find(v);
    if (it != frozen_memo.end()) return it->second;
    bool result = true;
    const Value x = st.core.value(v);
    for (EventId id : instance_.events_of_variable(v)) {
      const Event& e = *st.plan->event(id, v);
      const std::size_t pos =
          static_cast<std::size_t>(std::lower_bound(e.vars().begin(), e.vars().end(), v) - e.vars().begin());
      for (const Tuple& t : e.forbidden())
        if (t[pos] == x) {
          result = false;
          break;
        }
      if (!result) break;
    }
    frozen_memo.emplace(v, result);
    return result;
  };

  std::unordered_set<VarIndex> seen_vars;
  std::unordered_set<EventId> seen_events;
  std::deque<VarIndex> queue;
  for (VarIndex v = 0; v <= last; ++v)
    if (!frozen(v) && seen_vars.insert(v).second) queue.push_back(v);

  while (!queue.empty()) {
    VarIndex u = queue.front();
    queue.pop_front();
    for (EventId id : instance_.events_of_variable(u)) {
      if (!seen_events.insert(id).second) continue;
      if (seen_events.size() > limit) return false;
      const Event& e = *st.plan->event(id, u);
      bool dead = false;
      for (VarIndex w : e.vars())
        if (frozen(w)) {
          dead = true;
          break;
        }
      if (dead) continue;
      for (VarIndex w : e.vars())
        if (!st.core.assigned(w)) return false;
      if (st.core.violated(e)) return false;
      for (VarIndex w : e.vars())
        if (seen_vars.insert(w).second) queue.push_back(w);
    }
  }
  return true;
}

std::vector<PrefixSnapshot> run_stages(const EffectiveInstance& instance, Tape& tape, VarIndex upto,
                                       StageOptions options) {
  StagedRun run(instance, tape, options);
  return run.run_stages(upto);
}

VarIndex reach(const EffectiveInstance& instance, VarIndex i, unsigned m) {
  std::unordered_set<EventId> seen;
  std::vector<Event> frontier;
  VarIndex best = i;
  bool any = false;
  for (EventId id : instance.events_of_variable(i))
    if (seen.insert(id).second) frontier.push_back(checked_event(instance, id, i));
  for (unsigned level = 0;; ++level) {
    for (const Event& e : frontier) {
      best = any ? std::max(best, e.max_var()) : e.max_var();
      any = true;
    }
    if (level == m || frontier.empty()) break;
    std::vector<Event> next;
    for (const Event& e : frontier)
      for (VarIndex v : e.vars())
        for (EventId id : instance.events_of_variable(v))
          if (seen.insert(id).second) next.push_back(checked_event(instance, id, v));
    frontier = std::move(next);
  }
  return any ? best : i;
}

StabilizationBound stabilization_bound(const EffectiveInstance& instance, VarIndex i, const Rational& eps) {
  if (eps <= Rational(0) || eps >= Rational(1))
    fail(ErrorCode::invalid_argument, "eps must lie in (0,1)");
  const Rational inst_eps = instance.epsilon();

  Rational local;
  for (EventId id : instance.events_of_variable(i)) {
    checked_event(instance, id, i);
    local += resample_bound(instance.weight(id));
  }

  StabilizationBound b;
  b.variable = i;
  b.epsilon = eps;
  const Rational target = eps / Rational(2);
  if (!local.is_zero()) {
    if (inst_eps <= Rational(0))
      fail(ErrorCode::invalid_argument, "stabilization bound needs a positive instance epsilon");
    const Rational decay = Rational(1) - inst_eps;
    Rational term = local;
    unsigned m = 0;
    while (term > target) {
      term *= decay;
      if (++m > 1000000) fail(ErrorCode::invalid_argument, "reach depth diverges");
    }
    b.reach_depth = m;
  }
  b.reach_var = reach(instance, i, b.reach_depth);

  EventOrdering ord = order_events(instance, b.reach_var);
  for (EventId id : ord.ids) b.expected_resamples += resample_bound(instance.weight(id));
  mpz_class n = ceil(b.expected_resamples * Rational(2) / eps);
  if (!n.fits_ulong_p()) fail(ErrorCode::invalid_argument, "stabilization bound overflows");
  b.steps = n.get_ui();
  return b;
}

std::optional<std::uint64_t> last_change_step(const EffectiveInstance& instance, Tape& tape, VarIndex i,
                                              VarIndex max_stage, StageOptions options) {
  StagedRun run(instance, tape, options);
  for (VarIndex k = 0; k <= max_stage; ++k) {
    run.run_stage(k);
    if (k >= i && run.certified_stable(i)) {
      std::uint64_t last = 0;
      for (const ResampleRecord& r : run.log().records) {
        Event e = instance.event_def(r.event);
        auto it = std::lower_bound(e.vars().begin(), e.vars().end(), i);
        if (it == e.vars().end() || *it != i) continue;
        std::size_t pos = static_cast<std::size_t>(it - e.vars().begin());
        if (r.before[pos] != r.after[pos]) last = r.step;
      }
      return last;
    }
  }
  return std::nullopt;
}

}  // namespace lll
