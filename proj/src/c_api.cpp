#include "lll/lll.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "lll/applications.hpp"
#include "report.hpp"

struct lll_instance {
  lll::FiniteInstance inst;
};

struct lll_family {
  std::shared_ptr<lll::EffectiveInstance> impl;
  std::string name;
};

namespace {

thread_local std::string last_error;

lll_status status_of(lll::ErrorCode code) {
  switch (code) {
    case lll::ErrorCode::invalid_argument: return LLL_ERR_INVALID_ARGUMENT;
    case lll::ErrorCode::parse_error: return LLL_ERR_PARSE;
    case lll::ErrorCode::instance_inconsistency: return LLL_ERR_INCONSISTENT;
    case lll::ErrorCode::condition_failed: return LLL_ERR_CONDITION;
    case lll::ErrorCode::budget_exhausted: return LLL_ERR_BUDGET;
    case lll::ErrorCode::extraction_threshold: return LLL_ERR_THRESHOLD;
    case lll::ErrorCode::out_of_range: return LLL_ERR_OUT_OF_RANGE;
    case lll::ErrorCode::tape_exhausted: return LLL_ERR_TAPE;
  }
  return LLL_ERR_INTERNAL;
}

/// Runs `body`, translating exceptions into a status and the thread's last
/// error message.
template <typename F>
lll_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const lll::ConditionFailed& e) {
    last_error = std::string(e.what()) + "\n" + lll::report::condition_table(e.report(), true);
    return LLL_ERR_CONDITION;
  } catch (const lll::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LLL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LLL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return LLL_ERR_INTERNAL;
  }
}

lll_status invalid(const char* what) {
  last_error = what;
  return LLL_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

lll::Rational rational_or(const char* text, const lll::Rational& fallback) {
  return text ? lll::Rational::parse(text) : fallback;
}

void copy_values(std::span<const lll::Value> from, uint32_t* to, size_t len) {
  if (!to) return;
  for (size_t i = 0; i < len && i < from.size(); ++i) to[i] = from[i];
}

lll::AvoidParams avoid_params(const lll_avoid_options& o) {
  lll::AvoidParams p;
  p.epsilon = rational_or(o.epsilon, lll::Rational(1, 10));
  if (o.delta) p.delta = lll::Rational::parse(o.delta);
  if (o.alpha_prime) p.alpha_prime = lll::Rational::parse(o.alpha_prime);
  p.bi_infinite = o.bi_infinite != 0;
  p.replicas = o.replicas;
  p.seed = o.seed;
  p.margin = rational_or(o.margin, lll::Rational(1, 20));
  p.threads = o.threads;
  return p;
}

lll::report::Config avoid_config(const char* forbidden, const lll_avoid_options& o, const lll::AvoidParams& p) {
  return {{"forbidden", forbidden},
          {"alpha", o.alpha ? o.alpha : "1/2"},
          {"epsilon", p.epsilon.to_string()},
          {"delta", p.delta ? p.delta->to_string() : "default"},
          {"alpha_prime", p.alpha_prime ? p.alpha_prime->to_string() : "default"},
          {"replicas", std::to_string(p.replicas)},
          {"seed", std::to_string(p.seed)},
          {"margin", p.margin.to_string()}};
}

}  // namespace

extern "C" {

const char* lll_version(void) { return "0.1.0"; }

const char* lll_last_error(void) { return last_error.c_str(); }

const char* lll_status_name(lll_status status) {
  switch (status) {
    case LLL_OK: return "ok";
    case LLL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LLL_ERR_PARSE: return "parse error";
    case LLL_ERR_INCONSISTENT: return "instance inconsistency";
    case LLL_ERR_CONDITION: return "condition failed";
    case LLL_ERR_BUDGET: return "budget exhausted";
    case LLL_ERR_THRESHOLD: return "extraction threshold";
    case LLL_ERR_OUT_OF_RANGE: return "out of range";
    case LLL_ERR_TAPE: return "tape exhausted";
    case LLL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lll_string_free(char* s) { std::free(s); }

lll_status lll_instance_load(const char* path, lll_instance** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new lll_instance{lll::load_instance(path)};
    return LLL_OK;
  });
}

lll_status lll_instance_parse(const char* text, lll_instance** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    std::istringstream in(text);
    *out = new lll_instance{lll::parse_instance(in)};
    return LLL_OK;
  });
}

void lll_instance_free(lll_instance* inst) { delete inst; }

lll_status lll_instance_counts(const lll_instance* inst, size_t* variables, size_t* events) {
  if (!inst) return invalid("null instance");
  if (variables) *variables = inst->inst.variables.size();
  if (events) *events = inst->inst.events.size();
  return LLL_OK;
}

lll_status lll_check(const lll_instance* inst, int with_slack, int* pass, char** report) {
  if (!inst) return invalid("null instance");
  return guarded([&] {
    lll::ConditionReport r = lll::check_lll(inst->inst, with_slack != 0);
    if (pass) *pass = r.pass ? 1 : 0;
    put(report, lll::report::header("check", {{"slack", with_slack ? "on" : "off"},
                                              {"epsilon", inst->inst.epsilon.to_string()}}) +
                    lll::report::condition_table(r, with_slack != 0));
    return LLL_OK;
  });
}

lll_status lll_solve(const lll_instance* inst, uint64_t seed, uint64_t max_steps, uint32_t* values,
                     size_t values_len, uint64_t* resamples, char** report, char** log_text) {
  if (!inst) return invalid("null instance");
  return guarded([&] {
    const auto ordering = lll::priority_ordering(inst->inst);
    const uint64_t budget = max_steps ? max_steps : lll::default_budget(inst->inst);
    lll::RandomTape tape(seed);
    lll::SolveResult res = lll::solve_finite(inst->inst, ordering, tape, budget);
    std::vector<lll::Value> dense;
    for (const auto& v : inst->inst.variables) dense.push_back(res.assignment.at(v.index));
    copy_values(dense, values, values_len);
    if (resamples) *resamples = res.log.records.size();
    const bool solved = res.status == lll::SolveStatus::solved;
    std::string text = lll::report::header("solve", {{"seed", std::to_string(seed)},
                                                     {"max_steps", std::to_string(budget)},
                                                     {"ordering", "max-vbl,id"}});
    text += "status " + std::string(solved ? "solved" : "budget-exhausted") + "\n";
    text += "resamples " + std::to_string(res.log.records.size()) + "\n";
    text += lll::report::assignment_line(res.assignment);
    put(report, text);
    if (log_text) {
      std::ostringstream log;
      lll::write_log(log, res.log);
      *log_text = dup(log.str());
    }
    if (!solved) {
      last_error = "resample budget of " + std::to_string(budget) + " exhausted";
      return LLL_ERR_BUDGET;
    }
    return LLL_OK;
  });
}

void lll_stats_options_default(lll_stats_options* opts) {
  if (!opts) return;
  opts->runs = 1000;
  opts->seed_base = 0;
  opts->stab_eps = "1/10";
  opts->stab_vars = 1;
}

lll_status lll_stats(const lll_instance* inst, const lll_stats_options* opts, char** csv) {
  if (!inst) return invalid("null instance");
  lll_stats_options defaults;
  lll_stats_options_default(&defaults);
  const lll_stats_options& o = opts ? *opts : defaults;
  return guarded([&] {
    lll::report::StatsOptions so;
    so.runs = o.runs;
    so.seed_base = o.seed_base;
    so.stab_eps = rational_or(o.stab_eps, lll::Rational(1, 10));
    so.stab_vars = o.stab_vars;
    std::string text = lll::report::header("stats", {{"runs", std::to_string(so.runs)},
                                                     {"seed_base", std::to_string(so.seed_base)},
                                                     {"replica_seed", "seed_base+r"},
                                                     {"stab_eps", so.stab_eps.to_string()},
                                                     {"stab_vars", std::to_string(so.stab_vars)}});
    text += lll::report::stats_csv(inst->inst, so);
    put(csv, text);
    return LLL_OK;
  });
}

lll_status lll_witness_tree(const lll_instance* inst, const char* log_text, uint64_t step, char** report) {
  if (!inst || !log_text) return invalid("null argument");
  return guarded([&] {
    std::istringstream in(log_text);
    lll::ExecutionLog log = lll::parse_log(in, inst->inst);
    lll::DependencyGraph graph = lll::build_dependency_graph(inst->inst);
    lll::WitnessTree tree = lll::build_witness_tree(log, graph, step);
    put(report, lll::report::witness_tree(tree, step, lll::tree_weight(tree, inst->inst)));
    return LLL_OK;
  });
}

lll_status lll_family_create(const char* name, uint32_t m, const char* eps, const char* path, lll_family** out) {
  if (!name || !out) return invalid("null argument");
  return guarded([&] {
    lll::FamilySpec spec;
    spec.name = name;
    spec.m = m;
    spec.epsilon = rational_or(eps, lll::Rational(1, 10));
    if (path) spec.path = path;
    *out = new lll_family{lll::make_family(spec), spec.name};
    return LLL_OK;
  });
}

void lll_family_free(lll_family* fam) { delete fam; }

lll_status lll_stages(const lll_family* fam, uint64_t upto, uint64_t seed, char** text) {
  if (!fam) return invalid("null family");
  std::string out = lll::report::header("stages", {{"family", fam->name},
                                                   {"upto", std::to_string(upto)},
                                                   {"seed", std::to_string(seed)},
                                                   {"stage_budget", "max(10000,ceil(100*T_i))"}});
  lll_status st = guarded([&] {
    lll::RandomTape tape(seed);
    lll::StagedRun run(*fam->impl, tape);
    for (lll::VarIndex k = 0; k <= upto; ++k) {
      lll::PrefixSnapshot snap = run.run_stage(k);
      lll::PrefixReport check = lll::verify_prefix(*fam->impl, snap.values);
      if (!check.pass())
        lll::fail(lll::ErrorCode::instance_inconsistency, "snapshot " + std::to_string(k) + " violates an event");
      out += lll::report::prefix_line(k, snap.values);
    }
    return LLL_OK;
  });
  // partial snapshots are still useful after a budget failure
  put(text, out);
  return st;
}

void lll_extract_options_default(lll_extract_options* opts) {
  if (!opts) return;
  opts->mode = LLL_EXTRACT_EXACT;
  opts->depth = 16;
  opts->replicas = 10000;
  opts->seed = 0;
  opts->margin = "1/20";
  opts->threads = 0;
}

lll_status lll_extract(const lll_family* fam, uint64_t length, const lll_extract_options* opts, uint32_t* values,
                       size_t values_len, char** report) {
  if (!fam) return invalid("null family");
  lll_extract_options defaults;
  lll_extract_options_default(&defaults);
  const lll_extract_options& o = opts ? *opts : defaults;
  return guarded([&] {
    lll::ExtractionParams p;
    p.mode = o.mode == LLL_EXTRACT_MONTE_CARLO ? lll::ExtractionMode::monte_carlo : lll::ExtractionMode::exact;
    p.depth = o.depth;
    p.replicas = o.replicas;
    p.seed = o.seed;
    p.margin = rational_or(o.margin, lll::Rational(1, 20));
    p.threads = o.threads;
    std::string text = lll::report::header(
        "extract", {{"family", fam->name},
                    {"length", std::to_string(length)},
                    {"mode", p.mode == lll::ExtractionMode::exact ? "exact" : "mc"},
                    {"depth", std::to_string(p.depth)},
                    {"replicas", std::to_string(p.replicas)},
                    {"seed", std::to_string(p.seed)},
                    {"margin", p.margin.to_string()},
                    {"stabilization_eps", p.stabilization_eps.to_string()}});
    if (length == 0) {
      text += "prefix empty\nverify checked 0 violations 0 ok\n";
      put(report, text);
      return LLL_OK;
    }
    lll::ExtractedPrefix prefix = lll::extract_computable_prefix(*fam->impl, length - 1, p);
    lll::PrefixReport check = lll::verify_prefix(*fam->impl, prefix.values);
    copy_values(prefix.values, values, values_len);
    text += lll::report::extraction(prefix, check);
    put(report, text);
    if (!check.pass()) {
      last_error = "extracted prefix violates " + std::to_string(check.violations.size()) + " events";
      return LLL_ERR_INCONSISTENT;
    }
    return LLL_OK;
  });
}

void lll_avoid_options_default(lll_avoid_options* opts) {
  if (!opts) return;
  opts->alpha = "1/2";
  opts->epsilon = "1/10";
  opts->delta = nullptr;
  opts->alpha_prime = nullptr;
  opts->bi_infinite = 0;
  opts->replicas = 64;
  opts->seed = 0;
  opts->margin = "1/20";
  opts->threads = 0;
}

lll_status lll_avoid_1d(const char* forbidden, uint64_t length, const lll_avoid_options* opts, int* ok,
                        uint64_t* min_length, char** report) {
  if (!forbidden) return invalid("null forbidden set");
  lll_avoid_options defaults;
  lll_avoid_options_default(&defaults);
  const lll_avoid_options& o = opts ? *opts : defaults;
  return guarded([&] {
    lll::AvoidParams p = avoid_params(o);
    std::shared_ptr<const lll::ForbiddenSet> f =
        lll::load_forbidden_set(forbidden, rational_or(o.alpha, lll::Rational(1, 2)));
    lll::AvoidResult1D r = lll::avoid_substrings(f, length, p);
    lll::report::Config cfg = avoid_config(forbidden, o, p);
    cfg.insert(cfg.begin(), {"length", std::to_string(length)});
    cfg.push_back({"indexing", p.bi_infinite ? "zigzag" : "one-sided"});
    if (ok) *ok = r.windows.pass() && r.events.pass() ? 1 : 0;
    if (min_length) *min_length = r.derivation.min_length;
    put(report, lll::report::header("avoid-1d", cfg) + lll::report::avoid_1d(r));
    return LLL_OK;
  });
}

lll_status lll_avoid_2d(const char* forbidden, int64_t radius, const lll_avoid_options* opts, int* ok,
                        uint64_t* min_length, char** report) {
  if (!forbidden) return invalid("null forbidden set");
  lll_avoid_options defaults;
  lll_avoid_options_default(&defaults);
  const lll_avoid_options& o = opts ? *opts : defaults;
  return guarded([&] {
    lll::AvoidParams p = avoid_params(o);
    std::shared_ptr<const lll::PatternSet> f =
        lll::load_pattern_set(forbidden, rational_or(o.alpha, lll::Rational(1, 2)));
    lll::AvoidResult2D r = lll::avoid_patterns_2d(f, radius, p);
    lll::report::Config cfg = avoid_config(forbidden, o, p);
    cfg.insert(cfg.begin(), {"radius", std::to_string(radius)});
    cfg.push_back({"indexing", "spiral"});
    if (ok) *ok = r.rectangles.pass() && r.events.pass() ? 1 : 0;
    if (min_length) *min_length = r.derivation.min_length;
    put(report, lll::report::header("avoid-2d", cfg) + lll::report::avoid_2d(r));
    return LLL_OK;
  });
}

lll_status lll_min_clause_size(const char* alpha, const char* eps, uint64_t* n) {
  if (!alpha || !eps || !n) return invalid("null argument");
  return guarded([&] {
    *n = lll::min_clause_size(lll::Rational::parse(alpha), lll::Rational::parse(eps));
    return LLL_OK;
  });
}

}  // extern "C"
