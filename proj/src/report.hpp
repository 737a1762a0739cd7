#pragma once

// Text renderings shared by the C API and the command-line tool.

#include <string>
#include <utility>
#include <vector>

#include "lll/applications.hpp"

namespace lll::report {

using Config = std::vector<std::pair<std::string, std::string>>;

/// "# <command> key=value ..." so every report carries its full configuration.
std::string header(const std::string& command, const Config& config);

std::string condition_table(const ConditionReport& report, bool with_slack);
std::string assignment_line(const Assignment& a);
std::string prefix_line(VarIndex stage, std::span<const Value> values);
std::string extraction(const ExtractedPrefix& prefix, const PrefixReport& check);
std::string avoid_1d(const AvoidResult1D& r);
std::string avoid_2d(const AvoidResult2D& r);
std::string witness_tree(const WitnessTree& tree, std::uint64_t step, const Rational& weight);

struct StatsOptions {
  std::uint64_t runs = 1000;
  std::uint64_t seed_base = 0;
  Rational stab_eps{1, 10};
  std::uint64_t stab_vars = 1;
};

inline constexpr const char* kStatsColumns = "section,key,runs,mean,ci,bound,n,ok";

/// Event rows (resamples per event against x/(1-x)), stage rows (resamples
/// through stage k against T_k) and stabilization rows (frequency of a
/// change of P_i after N(i, eps) against eps).
std::string stats_csv(const FiniteInstance& instance, const StatsOptions& options);

}  // namespace lll::report
