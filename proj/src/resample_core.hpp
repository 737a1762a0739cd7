#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lll/finite.hpp"
#include "lll/tape.hpp"

namespace lll::detail {

/// Priority key of an active event; smaller keys are resampled first.
using Key = std::pair<std::uint64_t, std::uint64_t>;

/// Shared state machine of the finite and the staged solvers: current
/// values, the active events, and the set of violated active events.
class ResampleCore {
 public:
  using SamplerOf = std::function<const Sampler&(VarIndex)>;

  ResampleCore(Tape& tape, SamplerOf sampler_of) : tape_(tape), sampler_of_(std::move(sampler_of)) {}

  bool assigned(VarIndex v) const { return v < values_.size() && values_[v] >= 0; }
  Value value(VarIndex v) const { return static_cast<Value>(values_[v]); }
  std::size_t extent() const { return values_.size(); }

  /// Draws the initial value of `v` from its tagged substream.
  std::uint64_t sample_initial(VarIndex v) {
    std::uint64_t bits = 0;
    Value x = sampler_of_(v).sample(tape_, DrawTag{true, v}, bits);
    set(v, x);
    return bits;
  }

  /// `e` must stay alive while the core exists. All its variables must be
  /// assigned.
  void activate(const Event& e, Key key) {
    for (VarIndex v : e.vars()) {
      if (v >= by_var_.size()) by_var_.resize(v + 1);
      by_var_[v].push_back(Entry{&e, key});
    }
    refresh(Entry{&e, key});
  }

  bool any_violated() const { return !violated_.empty(); }

  std::optional<Key> first_violated_key() const {
    if (violated_.empty()) return std::nullopt;
    return violated_.begin()->first;
  }

  /// Resamples the first violated event, variables in increasing index
  /// order, and returns the record.
  ResampleRecord resample_first(std::uint64_t step) {
    auto [key, event] = *violated_.begin();
    ResampleRecord rec;
    rec.step = step;
    rec.event = event->id();
    rec.before = local(*event);
    for (VarIndex v : event->vars()) {
      Value x = sampler_of_(v).sample(tape_, DrawTag{false, v}, rec.bits);
      set(v, x);
    }
    rec.after = local(*event);
    for (VarIndex v : event->vars())
      for (const Entry& en : by_var_[v]) refresh(en);
    return rec;
  }

  Tuple local(const Event& e) const {
    Tuple t;
    t.reserve(e.vars().size());
    for (VarIndex v : e.vars()) t.push_back(value(v));
    return t;
  }

  bool violated(const Event& e) const {
    scratch_.clear();
    for (VarIndex v : e.vars()) scratch_.push_back(value(v));
    return e.is_forbidden(scratch_);
  }

  Assignment assignment() const {
    Assignment a;
    for (std::size_t v = 0; v < values_.size(); ++v)
      if (values_[v] >= 0) a.values.emplace(v, static_cast<Value>(values_[v]));
    return a;
  }

  /// Active events containing v.
  template <typename F>
  void for_each_active_of(VarIndex v, F&& f) const {
    if (v >= by_var_.size()) return;
    for (const Entry& en : by_var_[v]) f(*en.event);
  }

 private:
  struct Entry {
    const Event* event;
    Key key;
  };

  void set(VarIndex v, Value x) {
    if (v >= values_.size()) values_.resize(v + 1, -1);
    values_[v] = x;
  }

  void refresh(const Entry& en) {
    if (violated(*en.event))
      violated_.emplace(en.key, en.event);
    else
      violated_.erase(en.key);
  }

  Tape& tape_;
  SamplerOf sampler_of_;
  std::vector<std::int64_t> values_;
  std::vector<std::vector<Entry>> by_var_;
  std::map<Key, const Event*> violated_;
  mutable std::vector<Value> scratch_;
};

}  // namespace lll::detail
