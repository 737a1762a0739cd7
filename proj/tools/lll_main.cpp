// Command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lll/lll.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCondition = 1;
constexpr int kExitBudget = 2;
constexpr int kExitThreshold = 3;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

int exit_code(lll_status st) {
  switch (st) {
    case LLL_OK: return kExitOk;
    case LLL_ERR_CONDITION: return kExitCondition;
    case LLL_ERR_BUDGET: return kExitBudget;
    case LLL_ERR_THRESHOLD: return kExitThreshold;
    case LLL_ERR_INVALID_ARGUMENT:
    case LLL_ERR_PARSE:
    case LLL_ERR_INCONSISTENT:
    case LLL_ERR_OUT_OF_RANGE: return kExitUsage;
    default: return kExitInternal;
  }
}

int report_error(lll_status st) {
  std::cerr << "error (" << lll_status_name(st) << "): " << lll_last_error() << "\n";
  return exit_code(st);
}

/// Owns a string handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { lll_string_free(p); }
  char** out() { return &p; }
  void print(std::ostream& os = std::cout) const {
    if (p) os << p;
  }
};

struct InstanceHandle {
  lll_instance* p = nullptr;
  ~InstanceHandle() { lll_instance_free(p); }
};

struct FamilyHandle {
  lll_family* p = nullptr;
  ~FamilyHandle() { lll_family_free(p); }
};

struct FamilyFlags {
  std::string name = "chain";
  unsigned m = 4;
  std::string eps = "1/10";
  std::string instance;

  void add(CLI::App* cmd) {
    cmd->add_option("--family", name, "none | single-bit | chain | uniform-chain | instance")
        ->check(CLI::IsMember({"none", "single-bit", "chain", "uniform-chain", "instance"}))
        ->capture_default_str();
    cmd->add_option("--m", m, "clause size of uniform-chain")->capture_default_str();
    cmd->add_option("--eps", eps, "epsilon of uniform-chain")->capture_default_str();
    cmd->add_option("--instance", instance, "instance file for --family instance");
  }

  lll_status open(FamilyHandle& h) const {
    return lll_family_create(name.c_str(), m, eps.c_str(), instance.empty() ? nullptr : instance.c_str(), &h.p);
  }
};

int load(const std::string& path, InstanceHandle& h) {
  lll_status st = lll_instance_load(path.c_str(), &h.p);
  return st == LLL_OK ? kExitOk : report_error(st);
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path);
  if (!out) return false;
  out << (text ? text : "");
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resampling solver for local-lemma instances, finite and infinite"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lll_version()));

  // check
  std::string check_path;
  bool slack = true;
  auto* check = app.add_subcommand("check", "Evaluate the local-lemma condition per event");
  check->add_option("instance", check_path, "instance file")->required();
  check->add_flag("--slack,!--no-slack", slack, "include the (1-eps) factor (default on)");

  // solve
  std::string solve_path, log_path;
  std::uint64_t seed = 0, max_steps = 0;
  auto* solve = app.add_subcommand("solve", "Run the resampling algorithm on a finite instance");
  solve->add_option("instance", solve_path, "instance file")->required();
  solve->add_option("--seed", seed, "tape seed")->capture_default_str();
  solve->add_option("--max-steps", max_steps, "resample budget, 0 = max(10^4, 100 sum x/(1-x))")
      ->capture_default_str();
  solve->add_option("--log", log_path, "write the execution log here");

  // stages
  FamilyFlags stage_family;
  std::uint64_t upto = 10;
  auto* stages = app.add_subcommand("stages", "Run stages 0..i of the infinite algorithm");
  stage_family.add(stages);
  stages->add_option("--upto", upto, "last stage")->capture_default_str();
  stages->add_option("--seed", seed, "tape seed")->capture_default_str();

  // extract
  FamilyFlags extract_family;
  std::uint64_t length = 8, replicas = 10000;
  unsigned depth = 16, threads = 0;
  std::string mode = "exact", margin = "1/20";
  auto* extract = app.add_subcommand("extract", "Extract a prefix of a computable satisfying assignment");
  extract_family.add(extract);
  extract->add_option("--length", length, "number of values a_0..a_{s-1}")->capture_default_str();
  extract->add_option("--mode", mode, "exact | mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  extract->add_option("--depth", depth, "exact mode: tape bits enumerated")->capture_default_str();
  extract->add_option("--replicas", replicas, "monte carlo replicas")->capture_default_str();
  extract->add_option("--margin", margin, "monte carlo pass fraction")->capture_default_str();
  extract->add_option("--seed", seed, "base seed, replica r uses seed + r")->capture_default_str();
  extract->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();

  // avoid
  std::string dim = "1d", forbidden, alpha = "1/2", avoid_eps = "1/10", delta, alpha_prime;
  std::int64_t radius = 4;
  std::uint64_t avoid_length = 64, avoid_replicas = 64;
  bool bi_infinite = false;
  auto* avoid = app.add_subcommand("avoid", "Generate a word or block avoiding a sparse forbidden set");
  avoid->add_option("--family", dim, "1d | 2d")->check(CLI::IsMember({"1d", "2d"}))->capture_default_str();
  avoid->add_option("--forbidden", forbidden, "1d: zero-runs (default) | periodic | file; 2d: zero-rects (default) | file");
  avoid->add_option("--alpha", alpha, "sparsity of the forbidden set")->capture_default_str();
  avoid->add_option("--length", avoid_length, "1d word length")->capture_default_str();
  avoid->add_option("--radius", radius, "2d block radius")->capture_default_str();
  avoid->add_option("--eps", avoid_eps, "slack epsilon")->capture_default_str();
  avoid->add_option("--delta", delta, "trimming fraction, default (1-alpha)/8");
  avoid->add_option("--alpha-prime", alpha_prime, "default alpha + (1-alpha)/4");
  avoid->add_flag("--bi-infinite", bi_infinite, "1d: index positions of Z by 0,-1,1,-2,...");
  avoid->add_option("--replicas", avoid_replicas, "monte carlo replicas")->capture_default_str();
  avoid->add_option("--seed", seed, "base seed")->capture_default_str();
  avoid->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();

  // stats
  std::string stats_path, stab_eps = "1/10";
  std::uint64_t runs = 1000, seed_base = 0, stab_vars = 1;
  auto* stats = app.add_subcommand("stats", "CSV of resample and stabilization statistics");
  stats->add_option("--instance", stats_path, "instance file")->required();
  stats->add_option("--runs", runs, "replicas")->capture_default_str();
  stats->add_option("--seed-base", seed_base, "replica r uses seed-base + r")->capture_default_str();
  stats->add_option("--stab-eps", stab_eps, "failure probability of the stabilization rows")->capture_default_str();
  stats->add_option("--stab-vars", stab_vars, "variables 0..k-1 get a stabilization row")->capture_default_str();

  // tree
  std::string tree_path, tree_log;
  std::uint64_t step = 1;
  auto* tree = app.add_subcommand("tree", "Witness tree of one resample step of a log");
  tree->add_option("--instance", tree_path, "instance file")->required();
  tree->add_option("--log", tree_log, "log written by solve --log")->required();
  tree->add_option("--step", step, "1-based resample step")->capture_default_str();

  // threshold
  std::string th_alpha = "1/2", th_eps = "0";
  auto* threshold = app.add_subcommand("threshold", "Smallest clause size N for sparsity alpha");
  threshold->add_option("--alpha", th_alpha)->capture_default_str();
  threshold->add_option("--eps", th_eps)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*check) {
    InstanceHandle inst;
    if (int rc = load(check_path, inst)) return rc;
    int pass = 0;
    Text report;
    lll_status st = lll_check(inst.p, slack ? 1 : 0, &pass, report.out());
    if (st != LLL_OK) return report_error(st);
    report.print();
    return pass ? kExitOk : kExitCondition;
  }

  if (*solve) {
    InstanceHandle inst;
    if (int rc = load(solve_path, inst)) return rc;
    Text report, log;
    lll_status st = lll_solve(inst.p, seed, max_steps, nullptr, 0, nullptr, report.out(),
                              log_path.empty() ? nullptr : log.out());
    report.print();
    if (!log_path.empty() && log.p && !write_file(log_path, log.p)) {
      std::cerr << "error: cannot write " << log_path << "\n";
      return kExitUsage;
    }
    return st == LLL_OK ? kExitOk : report_error(st);
  }

  if (*stages) {
    FamilyHandle fam;
    if (lll_status st = stage_family.open(fam); st != LLL_OK) return report_error(st);
    Text text;
    lll_status st = lll_stages(fam.p, upto, seed, text.out());
    text.print();
    return st == LLL_OK ? kExitOk : report_error(st);
  }

  if (*extract) {
    FamilyHandle fam;
    if (lll_status st = extract_family.open(fam); st != LLL_OK) return report_error(st);
    lll_extract_options opts;
    lll_extract_options_default(&opts);
    opts.mode = mode == "mc" ? LLL_EXTRACT_MONTE_CARLO : LLL_EXTRACT_EXACT;
    opts.depth = depth;
    opts.replicas = replicas;
    opts.seed = seed;
    opts.margin = margin.c_str();
    opts.threads = threads;
    Text report;
    lll_status st = lll_extract(fam.p, length, &opts, nullptr, 0, report.out());
    report.print();
    return st == LLL_OK ? kExitOk : report_error(st);
  }

  if (*avoid) {
    lll_avoid_options opts;
    lll_avoid_options_default(&opts);
    opts.alpha = alpha.c_str();
    opts.epsilon = avoid_eps.c_str();
    opts.delta = delta.empty() ? nullptr : delta.c_str();
    opts.alpha_prime = alpha_prime.empty() ? nullptr : alpha_prime.c_str();
    opts.bi_infinite = bi_infinite ? 1 : 0;
    opts.replicas = avoid_replicas;
    opts.seed = seed;
    opts.threads = threads;
    int ok = 0;
    std::uint64_t n = 0;
    Text report;
    if (forbidden.empty()) forbidden = dim == "1d" ? "zero-runs" : "zero-rects";
    lll_status st = dim == "1d" ? lll_avoid_1d(forbidden.c_str(), avoid_length, &opts, &ok, &n, report.out())
                                : lll_avoid_2d(forbidden.c_str(), radius, &opts, &ok, &n, report.out());
    if (st != LLL_OK) return report_error(st);
    report.print();
    return ok ? kExitOk : kExitInternal;
  }

  if (*stats) {
    InstanceHandle inst;
    if (int rc = load(stats_path, inst)) return rc;
    lll_stats_options opts;
    lll_stats_options_default(&opts);
    opts.runs = runs;
    opts.seed_base = seed_base;
    opts.stab_eps = stab_eps.c_str();
    opts.stab_vars = stab_vars;
    Text csv;
    lll_status st = lll_stats(inst.p, &opts, csv.out());
    if (st != LLL_OK) return report_error(st);
    csv.print();
    return kExitOk;
  }

  if (*tree) {
    InstanceHandle inst;
    if (int rc = load(tree_path, inst)) return rc;
    std::ifstream in(tree_log);
    if (!in) {
      std::cerr << "error: cannot open " << tree_log << "\n";
      return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Text report;
    lll_status st = lll_witness_tree(inst.p, buf.str().c_str(), step, report.out());
    if (st != LLL_OK) return report_error(st);
    report.print();
    return kExitOk;
  }

  if (*threshold) {
    std::uint64_t n = 0;
    lll_status st = lll_min_clause_size(th_alpha.c_str(), th_eps.c_str(), &n);
    if (st != LLL_OK) return report_error(st);
    std::cout << "# threshold alpha=" << th_alpha << " eps=" << th_eps << "\nN " << n << "\n";
    return kExitOk;
  }
  return kExitUsage;
}
