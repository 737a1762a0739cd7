#include "lll/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

namespace lll {

namespace {

std::string threshold_message(std::size_t position, const std::vector<std::pair<Value, std::string>>& achieved) {
  std::string msg = "no value passes the positivity threshold at position " + std::to_string(position) +
                    "; increase depth or replicas. achieved:";
  if (achieved.empty()) msg += " none";
  for (const auto& [v, m] : achieved) msg += " " + std::to_string(v) + "=" + m;
  return msg;
}

void ensure_conditions(const EffectiveInstance& instance, VarIndex upto) {
  StagePlan(instance, true).stage(upto);
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExtractionThresholdError::ExtractionThresholdError(std::size_t position,
                                                   std::vector<std::pair<Value, std::string>> achieved)
    : Error(ErrorCode::extraction_threshold, threshold_message(position, achieved)),
      position_(position),
      achieved_(std::move(achieved)) {}

ExactDistribution enumerate_exact_distribution(const EffectiveInstance& instance, VarIndex last, unsigned depth,
                                               ExactOptions options) {
  const VarIndex max_stage = options.max_stage.value_or(last + 4096);
  StageOptions opts;
  opts.plan = std::make_shared<StagePlan>(instance, false, true);

  ExactDistribution dist;
  dist.last = last;
  dist.depth = depth;
  VarIndex highest = last;

  // Runs the staged algorithm on one finite tape. Returns the certified
  // tuple, or nullopt if the stage cap was hit first. Throws tape_exhausted
  // when more bits are needed.
  auto run = [&](const std::vector<bool>& bits) -> std::optional<Tuple> {
    ExplicitTape tape(bits);
    StagedRun r(instance, tape, opts);
    for (VarIndex k = 0; k <= max_stage; ++k) {
      PrefixSnapshot snap = r.run_stage(k);
      highest = std::max(highest, k);
      if (k >= last && r.certified_stable(last))
        return Tuple(snap.values.begin(), snap.values.begin() + static_cast<std::ptrdiff_t>(last + 1));
    }
    return std::nullopt;
  };

  std::vector<bool> prefix;
  std::function<void()> explore = [&] {
    std::optional<Tuple> outcome;
    try {
      outcome = run(prefix);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::tape_exhausted) throw;
      if (prefix.size() >= depth) {
        dist.unresolved += Rational::pow2(-static_cast<long>(prefix.size()));
        return;
      }
      prefix.push_back(false);
      explore();
      prefix.back() = true;
      explore();
      prefix.pop_back();
      return;
    }
    const Rational w = Rational::pow2(-static_cast<long>(prefix.size()));
    if (outcome)
      dist.mass[*outcome] += w;
    else
      dist.unresolved += w;
  };
  explore();

  ensure_conditions(instance, highest);
  return dist;
}

ExtractedPrefix extract_from_distribution(const ExactDistribution& dist) {
  ExtractedPrefix out;
  out.mode = ExtractionMode::exact;
  for (VarIndex k = 0; k <= dist.last; ++k) {
    std::map<Value, Rational> cond;
    for (const auto& [t, m] : dist.mass)
      if (m > Rational(0) && std::equal(out.values.begin(), out.values.end(), t.begin())) cond[t[k]] += m;
    if (cond.empty()) {
      std::vector<std::pair<Value, std::string>> achieved;
      achieved.emplace_back(0, "0 (unresolved " + dist.unresolved.to_string() + ")");
      throw ExtractionThresholdError(k, std::move(achieved));
    }
    out.values.push_back(cond.begin()->first);
  }
  return out;
}

ExtractedPrefix extract_computable_prefix(const EffectiveInstance& instance, VarIndex last,
                                          const ExtractionParams& params) {
  if (params.mode == ExtractionMode::exact) {
    ExactOptions opts;
    opts.max_stage = params.max_stage;
    return extract_from_distribution(enumerate_exact_distribution(instance, last, params.depth, opts));
  }

  if (params.replicas == 0) fail(ErrorCode::invalid_argument, "monte-carlo extraction needs replicas > 0");
  if (params.margin <= Rational(0) || params.margin > Rational(1))
    fail(ErrorCode::invalid_argument, "margin must lie in (0,1]");

  ExtractedPrefix out;
  out.mode = ExtractionMode::monte_carlo;
  std::optional<std::uint64_t> cap = params.step_cap;
  VarIndex horizon = last;
  if (params.horizon) {
    horizon = std::max(horizon, *params.horizon);
  } else {
    std::uint64_t steps = 0;
    for (VarIndex i = 0; i <= last; ++i) {
      StabilizationBound b = stabilization_bound(instance, i, params.stabilization_eps);
      horizon = std::max(horizon, b.reach_var);
      steps = std::max(steps, b.steps);
    }
    if (!cap) cap = steps;
  }
  out.horizon = horizon;
  out.step_cap = cap.value_or(0);
  auto plan = std::make_shared<StagePlan>(instance, true);
  plan->stage(horizon);

  StageOptions opts;
  opts.plan = plan;
  opts.total_budget = cap;
  std::vector<std::optional<Tuple>> results(params.replicas);
  parallel_for(params.replicas, params.threads, [&](std::size_t r) {
    RandomTape tape(params.seed + r);
    StagedRun run(instance, tape, opts);
    std::optional<Tuple> best;
    try {
      for (VarIndex k = 0; k <= horizon; ++k) {
        PrefixSnapshot snap = run.run_stage(k);
        if (k >= last) best.emplace(snap.values.begin(), snap.values.begin() + static_cast<std::ptrdiff_t>(last + 1));
      }
    } catch (const StageBudgetExhausted&) {
    }
    results[r] = std::move(best);
  });

  std::vector<const Tuple*> survivors;
  for (const auto& r : results)
    if (r) survivors.push_back(&*r);
  out.replicas_used = survivors.size();
  out.replicas_discarded = params.replicas - survivors.size();
  if (survivors.empty()) throw ExtractionThresholdError(0, {});

  Rational confidence(1);
  for (VarIndex k = 0; k <= last; ++k) {
    std::map<Value, std::size_t> counts;
    for (const Tuple* t : survivors) ++counts[(*t)[k]];
    const Rational total(static_cast<long>(survivors.size()));
    std::optional<Value> chosen;
    for (const auto& [v, c] : counts)
      if (Rational(static_cast<long>(c)) >= params.margin * total) {
        chosen = v;
        confidence = std::min(confidence, Rational(static_cast<long>(c)) / total);
        break;
      }
    if (!chosen) {
      std::vector<std::pair<Value, std::string>> achieved;
      for (const auto& [v, c] : counts)
        achieved.emplace_back(v, std::to_string(c) + "/" + std::to_string(survivors.size()));
      throw ExtractionThresholdError(k, std::move(achieved));
    }
    out.values.push_back(*chosen);
    std::erase_if(survivors, [&](const Tuple* t) { return (*t)[k] != *chosen; });
  }
  out.confidence = confidence;
  return out;
}

PrefixReport verify_prefix(const EffectiveInstance& instance, std::span<const Value> prefix) {
  PrefixReport report;
  if (prefix.empty()) return report;
  EventOrdering ord = order_events(instance, prefix.size() - 1);
  for (EventId id : ord.ids) {
    Event e = instance.event_def(id);
    Tuple local;
    for (VarIndex v : e.vars()) local.push_back(prefix[v]);
    ++report.checked;
    if (e.is_forbidden(local)) report.violations.push_back(id);
  }
  return report;
}

}  // namespace lll
