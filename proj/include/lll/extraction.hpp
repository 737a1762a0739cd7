#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lll/effective.hpp"

namespace lll {

/// Lower bounds on Pr[p_0 = a_0, ..., p_last = a_last] for the limit values,
/// from all tapes of depth D.
struct ExactDistribution {
  VarIndex last = 0;
  unsigned depth = 0;
  std::map<Tuple, Rational> mass;
  Rational unresolved;
};

struct ExactOptions {
  /// Tapes that have not certified P_0..P_last by this stage count as
  /// unresolved; defaults to last + 4096.
  std::optional<VarIndex> max_stage;
};

/// Enumerates every tape prefix of at most `depth` bits. A tape contributes
/// 2^-bits to a tuple once the run certifies P_0..P_last stable; the rest is
/// unresolved mass. Requires dyadic distributions.
ExactDistribution enumerate_exact_distribution(const EffectiveInstance& instance, VarIndex last, unsigned depth,
                                               ExactOptions options = {});

enum class ExtractionMode { exact, monte_carlo };

struct ExtractionParams {
  ExtractionMode mode = ExtractionMode::exact;
  // exact
  unsigned depth = 16;
  std::optional<VarIndex> max_stage;
  // monte carlo
  std::size_t replicas = 10000;
  Rational margin{1, 20};
  std::uint64_t seed = 0;
  /// Per-variable failure probability handed to stabilization_bound.
  Rational stabilization_eps{1, 100};
  /// Overrides the stage horizon and step cap derived from stabilization_bound.
  std::optional<VarIndex> horizon;
  std::optional<std::uint64_t> step_cap;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ExtractedPrefix {
  std::vector<Value> values;  // a_0 .. a_last
  ExtractionMode mode = ExtractionMode::exact;
  /// 1 in exact mode; in monte-carlo mode the smallest empirical fraction of
  /// surviving replicas backing a chosen value.
  Rational confidence{1};
  // monte carlo diagnostics
  std::size_t replicas_used = 0;
  std::size_t replicas_discarded = 0;
  VarIndex horizon = 0;
  std::uint64_t step_cap = 0;
};

/// Thrown when no value passes the positivity threshold at some position.
class ExtractionThresholdError : public Error {
 public:
  ExtractionThresholdError(std::size_t position, std::vector<std::pair<Value, std::string>> achieved);
  std::size_t position() const { return position_; }
  const std::vector<std::pair<Value, std::string>>& achieved() const { return achieved_; }

 private:
  std::size_t position_;
  std::vector<std::pair<Value, std::string>> achieved_;
};

/// Greedy left-to-right choice of a_0..a_last, each the smallest value whose
/// conditional mass (exact) or replica frequency (monte carlo) passes the
/// threshold.
ExtractedPrefix extract_computable_prefix(const EffectiveInstance& instance, VarIndex last,
                                          const ExtractionParams& params);

/// Greedy choice over a precomputed exact distribution.
ExtractedPrefix extract_from_distribution(const ExactDistribution& dist);

struct PrefixReport {
  std::size_t checked = 0;
  std::vector<EventId> violations;
  bool pass() const { return violations.empty(); }
};

/// Evaluates every event with max vbl < prefix.size() against the prefix.
PrefixReport verify_prefix(const EffectiveInstance& instance, std::span<const Value> prefix);

}  // namespace lll
