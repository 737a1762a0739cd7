#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lll/effective.hpp"
#include "lll/extraction.hpp"

namespace lll {

// ---------------------------------------------------------------------------
// Clauses

struct Literal {
  VarIndex var = 0;
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;  // distinct variables

  std::size_t size() const { return literals.size(); }
  /// The event "every literal is false": one forbidden tuple.
  Event to_event(EventId id) const;
  bool satisfied_by(const Assignment& a) const;
};

/// Effective infinite CNF: clauses listed per variable, defined per id.
class ClauseSource {
 public:
  virtual ~ClauseSource() = default;
  virtual std::vector<EventId> clauses_of_variable(VarIndex i) const = 0;
  virtual Clause clause(EventId id) const = 0;
};

/// Clause k on variables k(m-1) .. k(m-1)+m-1, all positive: consecutive
/// clauses share exactly one variable.
class UniformChainClauses final : public ClauseSource {
 public:
  explicit UniformChainClauses(std::size_t m, std::optional<std::size_t> count = std::nullopt);
  std::vector<EventId> clauses_of_variable(VarIndex i) const override;
  Clause clause(EventId id) const override;

 private:
  std::size_t m_;
  std::optional<std::size_t> count_;
};

/// 2^-m <= (1-eps) 2^(-m+2) (1 - 2^(-m+2))^(2^(m-2)): the worst case of an
/// m-uniform clause with 2^(m-2) neighbours.
ConditionRow uniform_cnf_feasibility(std::size_t m, const Rational& eps);

/// Uniform bits, x(A) = 2^(-m+2). Construction throws ConditionFailed when
/// m is too small for eps; queried clauses are checked for m distinct
/// variables and at most 2^(m-2) neighbours.
std::shared_ptr<EffectiveInstance> uniform_cnf_instance(std::shared_ptr<const ClauseSource> clauses, std::size_t m,
                                                        const Rational& eps);

// ---------------------------------------------------------------------------
// Variable-size CNFs

struct CnfFamilyParams {
  Rational alpha;
  Rational beta;  // (1 + alpha) / 2
  Rational epsilon;
  std::uint64_t min_size = 0;  // N
  Rational delta;              // 0 when unused

  static CnfFamilyParams make(const Rational& alpha, const Rational& eps, const Rational& delta = Rational(0));
};

/// (1-eps) 2^-beta (1 - 2^(-gamma N) / (1 - 2^-gamma)), gamma = (1-alpha)/2,
/// beta = (1+alpha)/2, compared against 1/2.
long double clause_size_inequality_lhs(const Rational& alpha, const Rational& eps, std::uint64_t n);
bool clause_size_inequality_holds(const Rational& alpha, const Rational& eps, std::uint64_t n);

/// Smallest N satisfying the inequality above.
std::uint64_t min_clause_size(const Rational& alpha, const Rational& eps);

/// floor(2^(-beta m)) to `extra_bits` bits below the leading bit, exact.
Rational dyadic_power_weight(const Rational& beta, std::uint64_t m, unsigned extra_bits = 48);

/// c <= k 2^(alpha m), evaluated exactly.
bool within_sparsity(const mpz_class& count, std::uint64_t k, const Rational& alpha, std::uint64_t m);

struct VarsizeReport {
  bool pass = false;
  Rational lhs;        // 2^-k
  Rational rhs_lower;  // (1-eps) x_k (1 - sum_m q_m x_m)^k
  Rational sum;        // sum_m q_m x_m
};

/// Sufficient form of the slack condition for a clause of size k with
/// `profile[m]` neighbours of size m and weights x = 2^(-beta size) (dyadic
/// floor). Throws invalid_argument naming m if profile[m] > k 2^(alpha m).
VarsizeReport check_varsize_condition(const CnfFamilyParams& params, std::uint64_t k,
                                      const std::map<std::uint64_t, mpz_class>& profile);

/// Drops floor(delta k) lowest-index variables of a size-k clause.
Clause trim_clause(const Clause& clause, const Rational& delta);
std::vector<Clause> trim_clauses(const std::vector<Clause>& clauses, const Rational& delta);

// ---------------------------------------------------------------------------
// Forbidden words and patterns

/// A decidable set of binary words with at most 2^(alpha n) words of length n.
class ForbiddenSet {
 public:
  virtual ~ForbiddenSet() = default;
  virtual std::vector<std::string> words(std::uint64_t n) const = 0;
  virtual bool contains(const std::string& word) const = 0;
  virtual Rational alpha() const = 0;
  virtual std::string name() const = 0;
  /// Longest word, when the set is finite.
  virtual std::optional<std::uint64_t> max_length() const { return std::nullopt; }
};

std::unique_ptr<ForbiddenSet> zero_runs(const Rational& alpha = Rational(1, 2));
/// Words whose smallest period is at most 2 (0^n, 1^n, 0101.., 1010..).
std::unique_ptr<ForbiddenSet> periodic_words(const Rational& alpha = Rational(1, 2));
std::unique_ptr<ForbiddenSet> explicit_words(std::vector<std::string> words, const Rational& alpha);
/// Built-in name or a file with one word per line.
std::unique_ptr<ForbiddenSet> load_forbidden_set(const std::string& spec, const Rational& alpha);

struct Pattern {
  std::size_t height = 0, width = 0;
  std::vector<std::uint8_t> cells;  // row-major
  std::uint64_t area() const { return height * width; }
  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

/// A decidable set of rectangular 0/1 patterns, at most 2^(alpha n) of area n.
class PatternSet {
 public:
  virtual ~PatternSet() = default;
  virtual std::vector<Pattern> patterns(std::uint64_t area) const = 0;
  virtual bool contains(const Pattern& p) const = 0;
  virtual Rational alpha() const = 0;
  virtual std::string name() const = 0;
  virtual std::optional<std::uint64_t> max_area() const { return std::nullopt; }
};

std::unique_ptr<PatternSet> zero_rectangles(const Rational& alpha = Rational(1, 2));
std::unique_ptr<PatternSet> explicit_patterns(std::vector<Pattern> patterns, const Rational& alpha);
/// `zero-rects` or a file of `rect <h> <w>` blocks.
std::unique_ptr<PatternSet> load_pattern_set(const std::string& spec, const Rational& alpha);

// ---------------------------------------------------------------------------
// Linearizations

/// Square spiral: 0 -> (0,0), ring k occupies indices (2k-1)^2 .. (2k+1)^2-1.
std::pair<std::int64_t, std::int64_t> spiral_cell(VarIndex index);
VarIndex spiral_index(std::int64_t x, std::int64_t y);

/// 0, -1, 1, -2, 2, ...
std::int64_t zigzag_position(VarIndex index);
VarIndex zigzag_index(std::int64_t position);

// ---------------------------------------------------------------------------
// Pattern-avoidance CNFs

struct AvoidParams {
  Rational epsilon{1, 10};
  std::optional<Rational> delta;        // default (1 - alpha) / 8
  std::optional<Rational> alpha_prime;  // default alpha + (1 - alpha) / 4
  bool bi_infinite = false;             // 1D only: positions in Z by zigzag
  std::size_t replicas = 64;
  std::uint64_t seed = 0;
  Rational margin{1, 20};
  unsigned threads = 0;
};

/// Parameters derived for a pattern family.
struct AvoidDerivation {
  Rational alpha;        // sparsity of F
  Rational alpha_prime;  // absorbs the number of placements per position
  Rational delta;        // trimming fraction
  Rational alpha_trim;   // per-variable sparsity of the trimmed clauses
  Rational beta;         // (1 + alpha_trim) / 2, weights 2^(-beta k)
  Rational epsilon;
  std::uint64_t min_trimmed = 0;  // smallest trimmed clause size
  std::uint64_t min_length = 0;   // N: smallest original pattern size
};

class PatternCnfInstance;

/// 1D: uniform bits per position, one clause per (w in F, |w| >= N, position),
/// trimmed by delta.
std::shared_ptr<PatternCnfInstance> substring_cnf(std::shared_ptr<const ForbiddenSet> forbidden,
                                                  const AvoidParams& params);
/// 2D: positions of Z^2 by the square spiral, one clause per (pattern, placement).
std::shared_ptr<PatternCnfInstance> pattern_cnf_2d(std::shared_ptr<const PatternSet> forbidden,
                                                   const AvoidParams& params);

class PatternCnfInstance : public EffectiveInstance {
 public:
  const AvoidDerivation& derivation() const { return derivation_; }

  VariableSpec variable_spec(VarIndex i) const override { return VariableSpec::uniform(i, 2); }
  Rational epsilon() const override { return derivation_.epsilon; }
  Rational weight(EventId id) const override;
  /// Sufficient form: 2^-k <= (1-eps) x_k (1 - S)^k with S = sum_m C(m) x_m,
  /// C(m) bounding the trimmed clauses of size m through one variable.
  ConditionRow check_condition(EventId id) const override;

  /// Trimmed size of the clause made from an original size-n pattern.
  std::uint64_t trimmed_size(std::uint64_t n) const;
  /// Upper bound on trimmed clauses of trimmed size m containing a variable,
  /// over original sizes n <= max_n.
  mpz_class cover_count(std::uint64_t m, std::uint64_t max_n) const;

 protected:
  explicit PatternCnfInstance(AvoidDerivation d) : derivation_(std::move(d)) {}
  void derive(bool two_dimensional);

  /// Number of patterns of original size n (words of length n / patterns of area n).
  virtual std::uint64_t pattern_count(std::uint64_t n) const = 0;
  /// Placements of one pattern of size n that cover a fixed position.
  virtual std::uint64_t placements_per_position(std::uint64_t n) const = 0;
  virtual std::optional<std::uint64_t> max_pattern_size() const = 0;

  AvoidDerivation derivation_;

 private:
  Rational sum_bound(std::uint64_t max_n) const;
  mutable std::mutex memo_mutex_;
  mutable std::map<std::uint64_t, Rational> sum_memo_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, ConditionRow> row_memo_;
  mutable std::map<std::uint64_t, Rational> weight_memo_;
};

struct WindowReport {
  std::size_t checked = 0;
  std::vector<std::pair<std::int64_t, std::uint64_t>> violations;  // (start, length)
  bool pass() const { return violations.empty(); }
};

struct AvoidResult1D {
  std::string word;            // positions lo .. lo + L - 1
  std::int64_t first_position = 0;
  AvoidDerivation derivation;
  ExtractedPrefix prefix;
  WindowReport windows;
  PrefixReport events;
};

/// Extracts a word of length L and scans every window of length >= N
/// against the decider.
AvoidResult1D avoid_substrings(std::shared_ptr<const ForbiddenSet> forbidden, std::uint64_t length,
                               const AvoidParams& params);
WindowReport scan_windows(const ForbiddenSet& forbidden, const std::string& word, std::uint64_t min_length);

struct RectangleReport {
  std::size_t checked = 0;
  std::vector<std::array<std::int64_t, 4>> violations;  // (x, y, h, w)
  bool pass() const { return violations.empty(); }
};

struct AvoidResult2D {
  std::int64_t radius = 0;
  std::vector<std::vector<std::uint8_t>> block;  // block[row][col], row 0 = y = +r
  AvoidDerivation derivation;
  ExtractedPrefix prefix;
  RectangleReport rectangles;
  PrefixReport events;
};

AvoidResult2D avoid_patterns_2d(std::shared_ptr<const PatternSet> forbidden, std::int64_t radius,
                                const AvoidParams& params);
RectangleReport scan_rectangles(const PatternSet& forbidden, const std::vector<std::vector<std::uint8_t>>& block,
                                std::uint64_t min_area);

// ---------------------------------------------------------------------------
// Built-in effective instances

/// Uniform bits, no events.
std::shared_ptr<EffectiveInstance> no_events_family();
/// Uniform bits, one event forbidding P_0 = 1 with x = 3/4, eps = 1/10.
std::shared_ptr<EffectiveInstance> single_bit_family();
/// Bits with Pr[1] = 3/4 and clauses (x_k or x_{k+1}) for all k, x = 1/4,
/// eps = 1/10.
std::shared_ptr<EffectiveInstance> chain_family();

struct FamilySpec {
  std::string name;  // none | single-bit | chain | uniform-chain | instance
  std::size_t m = 4;
  Rational epsilon{1, 10};
  std::string path;
};

std::shared_ptr<EffectiveInstance> make_family(const FamilySpec& spec);

}  // namespace lll
