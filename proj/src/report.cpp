#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lll/tape.hpp"

namespace lll::report {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string mode_name(ExtractionMode m) { return m == ExtractionMode::exact ? "exact" : "monte-carlo"; }

void derivation_lines(std::ostringstream& out, const AvoidDerivation& d) {
  out << "N " << d.min_length << "\n";
  out << "derivation alpha=" << d.alpha.to_string() << " alpha_prime=" << d.alpha_prime.to_string()
      << " delta=" << d.delta.to_string() << " alpha_trim=" << d.alpha_trim.to_string()
      << " beta=" << d.beta.to_string() << " epsilon=" << d.epsilon.to_string() << " min_trimmed=" << d.min_trimmed
      << "\n";
}

void prefix_diagnostics(std::ostringstream& out, const ExtractedPrefix& p) {
  out << "mode " << mode_name(p.mode) << "\n";
  out << "confidence " << p.confidence.to_string();
  if (p.mode == ExtractionMode::monte_carlo)
    out << " replicas_used " << p.replicas_used << " replicas_discarded " << p.replicas_discarded << " horizon "
        << p.horizon << " step_cap " << p.step_cap;
  out << "\n";
}

void check_line(std::ostringstream& out, const char* what, std::size_t checked, std::size_t violations) {
  out << what << " checked " << checked << " violations " << violations << " " << (violations ? "FAIL" : "ok")
      << "\n";
}

}  // namespace

std::string header(const std::string& command, const Config& config) {
  std::ostringstream out;
  out << "# " << command;
  for (const auto& [k, v] : config) out << " " << k << "=" << v;
  out << "\n";
  return out.str();
}

std::string condition_table(const ConditionReport& report, bool with_slack) {
  std::ostringstream out;
  out << "# condition " << (with_slack ? "with slack (1-eps)" : "without slack") << "\n";
  out << "event lhs rhs slack status\n";
  std::size_t failing = 0;
  for (const ConditionRow& r : report.rows) {
    out << r.event << " " << r.lhs.to_string() << " " << r.rhs.to_string() << " " << r.slack.to_string() << " "
        << (r.pass ? "pass" : "FAIL") << "\n";
    if (!r.pass) ++failing;
  }
  out << "result " << (report.pass ? "pass" : "fail") << " rows " << report.rows.size() << " failing " << failing
      << "\n";
  return out.str();
}

std::string assignment_line(const Assignment& a) {
  std::ostringstream out;
  out << "assignment";
  for (const auto& [v, x] : a.values) out << " " << v << "=" << x;
  out << "\n";
  return out.str();
}

std::string prefix_line(VarIndex stage, std::span<const Value> values) {
  std::ostringstream out;
  out << "prefix " << stage;
  for (Value v : values) out << " " << v;
  out << "\n";
  return out.str();
}

std::string extraction(const ExtractedPrefix& prefix, const PrefixReport& check) {
  std::ostringstream out;
  if (!prefix.values.empty()) out << prefix_line(prefix.values.size() - 1, prefix.values);
  prefix_diagnostics(out, prefix);
  check_line(out, "verify", check.checked, check.violations.size());
  for (EventId id : check.violations) out << "violated " << id << "\n";
  return out.str();
}

std::string avoid_1d(const AvoidResult1D& r) {
  std::ostringstream out;
  derivation_lines(out, r.derivation);
  out << "word " << r.first_position << " " << r.word << "\n";
  if (!r.word.empty()) prefix_diagnostics(out, r.prefix);
  check_line(out, "windows", r.windows.checked, r.windows.violations.size());
  for (const auto& [p, n] : r.windows.violations) out << "forbidden-window " << p << " " << n << "\n";
  check_line(out, "clauses", r.events.checked, r.events.violations.size());
  return out.str();
}

std::string avoid_2d(const AvoidResult2D& r) {
  std::ostringstream out;
  derivation_lines(out, r.derivation);
  out << "block " << r.radius << "\n";
  for (const auto& row : r.block) {
    out << "row ";
    for (auto c : row) out << static_cast<int>(c);
    out << "\n";
  }
  prefix_diagnostics(out, r.prefix);
  check_line(out, "rectangles", r.rectangles.checked, r.rectangles.violations.size());
  for (const auto& v : r.rectangles.violations)
    out << "forbidden-rectangle " << v[0] << " " << v[1] << " " << v[2] << " " << v[3] << "\n";
  check_line(out, "clauses", r.events.checked, r.events.violations.size());
  return out.str();
}

std::string witness_tree(const WitnessTree& tree, std::uint64_t step, const Rational& weight) {
  std::ostringstream out;
  std::size_t depth = 0;
  for (const auto& v : tree.vertices) depth = std::max(depth, v.depth);
  out << "tree step " << step << " root " << tree.vertices[0].label << " size " << tree.size() << " depth " << depth
      << " weight " << weight.to_string() << "\n";
  out << "canonical " << tree.canonical() << "\n";
  // preorder, two spaces per level
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    const auto& v = tree.vertices[i];
    out << std::string(2 * v.depth, ' ') << v.label << "\n";
    for (auto it = v.children.rbegin(); it != v.children.rend(); ++it) stack.push_back(*it);
  }
  return out.str();
}

std::string stats_csv(const FiniteInstance& instance, const StatsOptions& options) {
  if (options.runs == 0) fail(ErrorCode::invalid_argument, "runs must be positive");
  std::ostringstream out;
  out << kStatsColumns << "\n";
  const auto ordering = priority_ordering(instance);
  const double runs = static_cast<double>(options.runs);
  constexpr double z99 = 2.5758293035489;

  std::vector<ExecutionLog> logs;
  logs.reserve(options.runs);
  for (std::uint64_t r = 0; r < options.runs; ++r) {
    RandomTape tape(options.seed_base + r);
    SolveResult res = solve_finite(instance, ordering, tape, default_budget(instance));
    if (res.status != SolveStatus::solved)
      throw StageBudgetExhausted(0, res.log.records.size());
    logs.push_back(std::move(res.log));
  }
  for (const EventResampleStat& s : resample_stats(logs, instance))
    out << "event," << s.event << "," << options.runs << "," << fixed(s.mean) << "," << fixed(s.half_width) << ","
        << fixed(s.bound) << ",," << (s.mean <= s.bound + s.half_width ? 1 : 0) << "\n";

  if (instance.variables.empty()) return out.str();
  const VarIndex last = instance.variables.size() - 1;
  FiniteEffectiveInstance eff(instance);

  // Resamples through the end of stage k against T_k.
  StageOptions sopts;
  sopts.plan = std::make_shared<StagePlan>(eff, false);
  std::vector<double> sum(last + 1, 0), sum_sq(last + 1, 0);
  for (std::uint64_t r = 0; r < options.runs; ++r) {
    RandomTape tape(options.seed_base + r);
    StagedRun run(eff, tape, sopts);
    for (VarIndex k = 0; k <= last; ++k) {
      const double steps = static_cast<double>(run.run_stage(k).steps_elapsed);
      sum[k] += steps;
      sum_sq[k] += steps * steps;
    }
  }
  Rational bound;
  EventOrdering ord = order_events(eff, last);
  std::size_t next = 0;
  for (VarIndex k = 0; k <= last; ++k) {
    while (next < ord.ids.size() && ord.max_vars[next] == k) bound += resample_bound(instance.weight(ord.ids[next++]));
    const double mean = sum[k] / runs;
    const double var = options.runs > 1 ? std::max(0.0, (sum_sq[k] - runs * mean * mean) / (runs - 1)) : 0.0;
    const double ci = z99 * std::sqrt(var / runs);
    out << "stage," << k << "," << options.runs << "," << fixed(mean) << "," << fixed(ci) << ","
        << fixed(bound.to_double()) << ",," << (mean <= bound.to_double() + ci ? 1 : 0) << "\n";
  }

  // Frequency of a change of P_i after N(i, eps) resamples.
  if (instance.epsilon.is_zero() || options.stab_vars == 0) return out.str();
  const double eps = options.stab_eps.to_double();
  const double three_sigma = 3 * std::sqrt(eps * (1 - eps) / runs);
  for (VarIndex i = 0; i <= last && i < options.stab_vars; ++i) {
    StabilizationBound b = stabilization_bound(eff, i, options.stab_eps);
    std::uint64_t late = 0;
    for (std::uint64_t r = 0; r < options.runs; ++r) {
      RandomTape tape(options.seed_base + r);
      std::optional<std::uint64_t> change = last_change_step(eff, tape, i, last, sopts);
      if (!change || *change > b.steps) ++late;
    }
    const double freq = static_cast<double>(late) / runs;
    out << "stabilization," << i << "," << options.runs << "," << fixed(freq) << "," << fixed(three_sigma) << ","
        << fixed(eps) << "," << b.steps << "," << (freq <= eps + three_sigma ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace lll::report
