#include "lll/applications.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lll {

// ---------------------------------------------------------------------------
// Clauses

Event Clause::to_event(EventId id) const {
  std::vector<Literal> lits = literals;
  std::sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
  std::vector<VarIndex> vars;
  Tuple falsifying;
  for (const Literal& l : lits) {
    if (!vars.empty() && vars.back() == l.var)
      fail(ErrorCode::instance_inconsistency, "clause " + std::to_string(id) + " repeats variable " + std::to_string(l.var));
    vars.push_back(l.var);
    falsifying.push_back(l.positive ? 0 : 1);
  }
  return Event(id, std::move(vars), {std::move(falsifying)});
}

bool Clause::satisfied_by(const Assignment& a) const {
  for (const Literal& l : literals)
    if ((a.at(l.var) != 0) == l.positive) return true;
  return false;
}

UniformChainClauses::UniformChainClauses(std::size_t m, std::optional<std::size_t> count) : m_(m), count_(count) {
  if (m < 2) fail(ErrorCode::invalid_argument, "uniform chain needs m >= 2");
}

std::vector<EventId> UniformChainClauses::clauses_of_variable(VarIndex i) const {
  const std::uint64_t stride = m_ - 1;
  std::vector<EventId> out;
  const std::uint64_t hi = i / stride;
  const std::uint64_t lo = i + 1 >= m_ ? (i + 1 - m_ + stride - 1) / stride : 0;
  for (std::uint64_t k = lo; k <= hi; ++k)
    if (!count_ || k < *count_) out.push_back(k);
  return out;
}

Clause UniformChainClauses::clause(EventId id) const {
  if (count_ && id >= *count_) fail(ErrorCode::instance_inconsistency, "unknown clause " + std::to_string(id));
  Clause c;
  for (std::size_t t = 0; t < m_; ++t) c.literals.push_back({id * (m_ - 1) + t, true});
  return c;
}

ConditionRow uniform_cnf_feasibility(std::size_t m, const Rational& eps) {
  if (m < 2) fail(ErrorCode::invalid_argument, "m must be at least 2");
  const Rational x = Rational::pow2(-static_cast<long>(m) + 2);
  ConditionRow row;
  row.lhs = Rational::pow2(-static_cast<long>(m));
  row.rhs = (Rational(1) - eps) * x * pow(Rational(1) - x, 1UL << (m - 2));
  row.slack = row.rhs - row.lhs;
  row.pass = row.lhs <= row.rhs;
  return row;
}

namespace {

class UniformCnfInstance final : public EffectiveInstance {
 public:
  UniformCnfInstance(std::shared_ptr<const ClauseSource> clauses, std::size_t m, Rational eps)
      : clauses_(std::move(clauses)), m_(m), eps_(std::move(eps)), x_(Rational::pow2(-static_cast<long>(m) + 2)) {}

  VariableSpec variable_spec(VarIndex i) const override { return VariableSpec::uniform(i, 2); }
  std::vector<EventId> events_of_variable(VarIndex i) const override {
    std::vector<EventId> ids = clauses_->clauses_of_variable(i);
    std::sort(ids.begin(), ids.end());
    return ids;
  }
  Event event_def(EventId id) const override {
    Clause c = clauses_->clause(id);
    if (c.size() != m_)
      fail(ErrorCode::instance_inconsistency,
           "clause " + std::to_string(id) + " has " + std::to_string(c.size()) + " literals, expected " + std::to_string(m_));
    return c.to_event(id);
  }
  Rational weight(EventId) const override { return x_; }
  Rational epsilon() const override { return eps_; }

  ConditionRow check_condition(EventId id) const override {
    Event e = event_def(id);
    std::set<EventId> neighbors;
    for (VarIndex v : e.vars())
      for (EventId n : events_of_variable(v))
        if (n != id) neighbors.insert(n);
    if (neighbors.size() > (1ULL << (m_ - 2)))
      fail(ErrorCode::instance_inconsistency, "clause " + std::to_string(id) + " has " +
                                                  std::to_string(neighbors.size()) + " neighbours, more than 2^(m-2)");
    return EffectiveInstance::check_condition(id);
  }

 private:
  std::shared_ptr<const ClauseSource> clauses_;
  std::size_t m_;
  Rational eps_;
  Rational x_;
};

}  // namespace

std::shared_ptr<EffectiveInstance> uniform_cnf_instance(std::shared_ptr<const ClauseSource> clauses, std::size_t m,
                                                        const Rational& eps) {
  ConditionRow row = uniform_cnf_feasibility(m, eps);
  if (!row.pass) {
    ConditionReport report;
    report.pass = false;
    report.rows.push_back(row);
    throw ConditionFailed(std::move(report));
  }
  return std::make_shared<UniformCnfInstance>(std::move(clauses), m, eps);
}

// ---------------------------------------------------------------------------
// Variable-size CNFs

CnfFamilyParams CnfFamilyParams::make(const Rational& alpha, const Rational& eps, const Rational& delta) {
  CnfFamilyParams p;
  p.alpha = alpha;
  p.beta = (Rational(1) + alpha) / Rational(2);
  p.epsilon = eps;
  p.min_size = min_clause_size(alpha, eps);
  p.delta = delta;
  return p;
}

long double clause_size_inequality_lhs(const Rational& alpha, const Rational& eps, std::uint64_t n) {
  const long double a = static_cast<long double>(alpha.to_double());
  const long double e = static_cast<long double>(eps.to_double());
  const long double beta = (1 + a) / 2, gamma = (1 - a) / 2;
  const long double tail = std::exp2l(-gamma * static_cast<long double>(n)) / (1 - std::exp2l(-gamma));
  return (1 - e) * std::exp2l(-beta) * (1 - tail);
}

bool clause_size_inequality_holds(const Rational& alpha, const Rational& eps, std::uint64_t n) {
  return clause_size_inequality_lhs(alpha, eps, n) >= 0.5L;
}

std::uint64_t min_clause_size(const Rational& alpha, const Rational& eps) {
  if (alpha <= Rational(0) || alpha >= Rational(1)) fail(ErrorCode::invalid_argument, "alpha must lie in (0,1)");
  if (eps < Rational(0) || eps >= Rational(1)) fail(ErrorCode::invalid_argument, "epsilon must lie in [0,1)");
  const long double beta = (1 + static_cast<long double>(alpha.to_double())) / 2;
  if ((1 - static_cast<long double>(eps.to_double())) * std::exp2l(-beta) <= 0.5L)
    fail(ErrorCode::invalid_argument, "no finite clause size: (1-eps) 2^-beta <= 1/2 for alpha=" + alpha.to_string() +
                                          ", eps=" + eps.to_string());
  for (std::uint64_t n = 1;; ++n) {
    if (clause_size_inequality_holds(alpha, eps, n)) return n;
    if (n > 100000000) fail(ErrorCode::invalid_argument, "clause size search diverged");
  }
}

Rational dyadic_power_weight(const Rational& beta, std::uint64_t m, unsigned extra_bits) {
  // floor(2^(P - beta m)) / 2^P with P = ceil(beta m) + extra_bits; the
  // floor is the integer q-th root of 2^(P q - p m) for beta = p/q.
  const mpz_class p = beta.numerator(), q = beta.denominator();
  if (p < 0 || !q.fits_ulong_p()) fail(ErrorCode::invalid_argument, "unsupported beta " + beta.to_string());
  const mpz_class exponent_num = p * m;  // beta m = exponent_num / q
  mpz_class ce;
  mpz_cdiv_q(ce.get_mpz_t(), exponent_num.get_mpz_t(), q.get_mpz_t());
  const mpz_class P = ce + extra_bits;
  const mpz_class shift = P * q - exponent_num;
  if (!P.fits_ulong_p() || !shift.fits_ulong_p()) fail(ErrorCode::invalid_argument, "weight exponent too large");
  mpz_class power = 1;
  mpz_mul_2exp(power.get_mpz_t(), power.get_mpz_t(), shift.get_ui());
  mpz_class root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), q.get_ui());
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), P.get_ui());
  return Rational(mpq_class(root, den));
}

bool within_sparsity(const mpz_class& count, std::uint64_t k, const Rational& alpha, std::uint64_t m) {
  // count <= k 2^(p m / q)  <=>  count^q <= k^q 2^(p m)
  const mpz_class p = alpha.numerator(), q = alpha.denominator();
  if (!q.fits_ulong_p() || p < 0) fail(ErrorCode::invalid_argument, "unsupported alpha " + alpha.to_string());
  const mpz_class pm = p * m;
  if (!pm.fits_ulong_p()) fail(ErrorCode::invalid_argument, "sparsity exponent too large");
  mpz_class lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), count.get_mpz_t(), q.get_ui());
  mpz_class kk = k;
  mpz_pow_ui(rhs.get_mpz_t(), kk.get_mpz_t(), q.get_ui());
  mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), pm.get_ui());
  return lhs <= rhs;
}

VarsizeReport check_varsize_condition(const CnfFamilyParams& params, std::uint64_t k,
                                      const std::map<std::uint64_t, mpz_class>& profile) {
  if (k == 0) fail(ErrorCode::invalid_argument, "clause size must be positive");
  VarsizeReport r;
  for (const auto& [m, c] : profile) {
    if (!within_sparsity(c, k, params.alpha, m))
      fail(ErrorCode::invalid_argument, "neighbour profile exceeds k 2^(alpha m) at m=" + std::to_string(m));
    if (c == 0) continue;
    // (1 - x)^q >= 1 - max(q, 1) x per variable, then the k-th power.
    Rational q(mpq_class(c, mpz_class(k)));
    if (q < Rational(1)) q = Rational(1);
    r.sum += q * dyadic_power_weight(params.beta, m);
  }
  r.lhs = Rational::pow2(-static_cast<long>(k));
  if (r.sum >= Rational(1)) {
    r.rhs_lower = Rational(0);
  } else {
    r.rhs_lower = (Rational(1) - params.epsilon) * dyadic_power_weight(params.beta, k) * pow(Rational(1) - r.sum, k);
  }
  r.pass = r.lhs <= r.rhs_lower;
  return r;
}

Clause trim_clause(const Clause& clause, const Rational& delta) {
  if (delta < Rational(0) || delta >= Rational(1)) fail(ErrorCode::invalid_argument, "delta must lie in [0,1)");
  Clause c = clause;
  std::sort(c.literals.begin(), c.literals.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
  mpz_class drop;
  const Rational dk = delta * Rational(static_cast<long>(c.size()));
  mpz_fdiv_q(drop.get_mpz_t(), dk.raw().get_num_mpz_t(), dk.raw().get_den_mpz_t());
  if (drop >= static_cast<unsigned long>(c.size()))
    fail(ErrorCode::invalid_argument, "trimming removes every literal of a clause of size " + std::to_string(c.size()));
  c.literals.erase(c.literals.begin(), c.literals.begin() + static_cast<std::ptrdiff_t>(drop.get_ui()));
  return c;
}

std::vector<Clause> trim_clauses(const std::vector<Clause>& clauses, const Rational& delta) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const Clause& c : clauses) out.push_back(trim_clause(c, delta));
  return out;
}

// ---------------------------------------------------------------------------
// Forbidden words and patterns

namespace {

bool is_binary(const std::string& w) {
  return !w.empty() && w.find_first_not_of("01") == std::string::npos;
}

class ZeroRuns final : public ForbiddenSet {
 public:
  explicit ZeroRuns(Rational alpha) : alpha_(std::move(alpha)) {}
  std::vector<std::string> words(std::uint64_t n) const override {
    if (n == 0) return {};
    return {std::string(n, '0')};
  }
  bool contains(const std::string& w) const override {
    return !w.empty() && w.find_first_not_of('0') == std::string::npos;
  }
  Rational alpha() const override { return alpha_; }
  std::string name() const override { return "zero-runs"; }

 private:
  Rational alpha_;
};

class PeriodicWords final : public ForbiddenSet {
 public:
  explicit PeriodicWords(Rational alpha) : alpha_(std::move(alpha)) {}
  std::vector<std::string> words(std::uint64_t n) const override {
    if (n == 0) return {};
    std::set<std::string> out;
    for (const char* seed : {"00", "11", "01", "10"}) {
      std::string w(n, '0');
      for (std::uint64_t i = 0; i < n; ++i) w[i] = seed[i % 2];
      out.insert(w);
    }
    return {out.begin(), out.end()};
  }
  bool contains(const std::string& w) const override {
    if (!is_binary(w)) return false;
    for (std::size_t i = 2; i < w.size(); ++i)
      if (w[i] != w[i - 2]) return false;
    return true;
  }
  Rational alpha() const override { return alpha_; }
  std::string name() const override { return "periodic"; }

 private:
  Rational alpha_;
};

class ExplicitWords final : public ForbiddenSet {
 public:
  ExplicitWords(std::vector<std::string> words, Rational alpha) : alpha_(std::move(alpha)) {
    for (auto& w : words) {
      if (!is_binary(w)) fail(ErrorCode::parse_error, "forbidden word '" + w + "' is not a binary word");
      by_length_[w.size()].insert(w);
      all_.insert(std::move(w));
    }
  }
  std::vector<std::string> words(std::uint64_t n) const override {
    auto it = by_length_.find(n);
    if (it == by_length_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }
  bool contains(const std::string& w) const override { return all_.count(w) != 0; }
  Rational alpha() const override { return alpha_; }
  std::string name() const override { return "explicit"; }
  std::optional<std::uint64_t> max_length() const override {
    return by_length_.empty() ? 0 : by_length_.rbegin()->first;
  }

 private:
  Rational alpha_;
  std::map<std::uint64_t, std::set<std::string>> by_length_;
  std::set<std::string> all_;
};

class ZeroRectangles final : public PatternSet {
 public:
  explicit ZeroRectangles(Rational alpha) : alpha_(std::move(alpha)) {}
  std::vector<Pattern> patterns(std::uint64_t area) const override {
    std::vector<Pattern> out;
    for (std::uint64_t h = 1; h <= area; ++h)
      if (area % h == 0) out.push_back(Pattern{h, area / h, std::vector<std::uint8_t>(area, 0)});
    return out;
  }
  bool contains(const Pattern& p) const override {
    return p.area() > 0 && std::all_of(p.cells.begin(), p.cells.end(), [](std::uint8_t c) { return c == 0; });
  }
  Rational alpha() const override { return alpha_; }
  std::string name() const override { return "zero-rects"; }

 private:
  Rational alpha_;
};

class ExplicitPatterns final : public PatternSet {
 public:
  ExplicitPatterns(std::vector<Pattern> patterns, Rational alpha) : alpha_(std::move(alpha)) {
    for (auto& p : patterns) {
      if (p.area() == 0 || p.cells.size() != p.area()) fail(ErrorCode::parse_error, "malformed pattern");
      by_area_[p.area()].insert(p);
      all_.insert(std::move(p));
    }
  }
  std::vector<Pattern> patterns(std::uint64_t area) const override {
    auto it = by_area_.find(area);
    if (it == by_area_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }
  bool contains(const Pattern& p) const override { return all_.count(p) != 0; }
  Rational alpha() const override { return alpha_; }
  std::string name() const override { return "explicit"; }
  std::optional<std::uint64_t> max_area() const override { return by_area_.empty() ? 0 : by_area_.rbegin()->first; }

 private:
  Rational alpha_;
  std::map<std::uint64_t, std::set<Pattern>> by_area_;
  std::set<Pattern> all_;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    lines.push_back(line);
  }
  return lines;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::unique_ptr<ForbiddenSet> zero_runs(const Rational& alpha) { return std::make_unique<ZeroRuns>(alpha); }
std::unique_ptr<ForbiddenSet> periodic_words(const Rational& alpha) { return std::make_unique<PeriodicWords>(alpha); }
std::unique_ptr<ForbiddenSet> explicit_words(std::vector<std::string> words, const Rational& alpha) {
  return std::make_unique<ExplicitWords>(std::move(words), alpha);
}

std::unique_ptr<ForbiddenSet> load_forbidden_set(const std::string& spec, const Rational& alpha) {
  if (spec == "zero-runs") return zero_runs(alpha);
  if (spec == "periodic") return periodic_words(alpha);
  std::vector<std::string> words;
  std::size_t lineno = 0;
  for (const std::string& raw : read_lines(spec)) {
    ++lineno;
    std::string w = trim(raw);
    if (w.empty()) continue;
    if (!is_binary(w))
      fail(ErrorCode::parse_error, spec + ":" + std::to_string(lineno) + ": expected a 0/1 word, got '" + w + "'");
    words.push_back(w);
  }
  return explicit_words(std::move(words), alpha);
}

std::unique_ptr<PatternSet> zero_rectangles(const Rational& alpha) { return std::make_unique<ZeroRectangles>(alpha); }
std::unique_ptr<PatternSet> explicit_patterns(std::vector<Pattern> patterns, const Rational& alpha) {
  return std::make_unique<ExplicitPatterns>(std::move(patterns), alpha);
}

std::unique_ptr<PatternSet> load_pattern_set(const std::string& spec, const Rational& alpha) {
  if (spec == "zero-rects") return zero_rectangles(alpha);
  std::vector<std::string> lines = read_lines(spec);
  std::vector<Pattern> patterns;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string line = trim(lines[k]);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    long long h = 0, w = 0;
    ls >> kw >> h >> w;
    if (kw != "rect" || !ls || h <= 0 || w <= 0)
      fail(ErrorCode::parse_error, spec + ":" + std::to_string(k + 1) + ": expected 'rect <h> <w>'");
    Pattern p{static_cast<std::size_t>(h), static_cast<std::size_t>(w), {}};
    for (long long r = 0; r < h; ++r) {
      ++k;
      std::string row = k < lines.size() ? trim(lines[k]) : std::string();
      if (row.size() != static_cast<std::size_t>(w) || !is_binary(row))
        fail(ErrorCode::parse_error, spec + ":" + std::to_string(k + 1) + ": expected a row of " + std::to_string(w) + " 0/1 cells");
      for (char c : row) p.cells.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    patterns.push_back(std::move(p));
  }
  return explicit_patterns(std::move(patterns), alpha);
}

// ---------------------------------------------------------------------------
// Linearizations

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> spiral_cell(VarIndex index) {
  if (index == 0) return {0, 0};
  const auto k = static_cast<std::int64_t>((isqrt(index) + 1) / 2);
  const auto t = static_cast<std::int64_t>(index) - (2 * k - 1) * (2 * k - 1);
  if (t < 2 * k) return {k, -k + 1 + t};
  if (t < 4 * k) return {k - 1 - (t - 2 * k), k};
  if (t < 6 * k) return {-k, k - 1 - (t - 4 * k)};
  return {-k + 1 + (t - 6 * k), -k};
}

VarIndex spiral_index(std::int64_t x, std::int64_t y) {
  const std::int64_t k = std::max(std::abs(x), std::abs(y));
  if (k == 0) return 0;
  const std::int64_t base = (2 * k - 1) * (2 * k - 1);
  std::int64_t t;
  if (x == k && y > -k)
    t = y + k - 1;
  else if (y == k && x < k)
    t = 2 * k + (k - 1 - x);
  else if (x == -k && y < k)
    t = 4 * k + (k - 1 - y);
  else
    t = 6 * k + x + k - 1;
  return static_cast<VarIndex>(base + t);
}

std::int64_t zigzag_position(VarIndex index) {
  if (index % 2 == 1) return -static_cast<std::int64_t>((index + 1) / 2);
  return static_cast<std::int64_t>(index / 2);
}

VarIndex zigzag_index(std::int64_t position) {
  return position >= 0 ? static_cast<VarIndex>(2 * position) : static_cast<VarIndex>(-2 * position - 1);
}

// ---------------------------------------------------------------------------
// Pattern-avoidance CNFs

std::uint64_t PatternCnfInstance::trimmed_size(std::uint64_t n) const {
  const Rational dn = derivation_.delta * Rational(static_cast<long>(n));
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), dn.raw().get_num_mpz_t(), dn.raw().get_den_mpz_t());
  return n - f.get_ui();
}

namespace {

/// Largest n with floor(delta n) <= v: variables of larger patterns are
/// never among the surviving ones at index v.
std::uint64_t max_size_through(const Rational& delta, VarIndex v) {
  if (delta.is_zero()) return ~0ULL;
  const Rational bound = Rational(static_cast<long>(v + 1)) / delta;
  mpz_class c = ceil(bound);
  return c.get_ui() - 1;
}

}  // namespace

mpz_class PatternCnfInstance::cover_count(std::uint64_t m, std::uint64_t max_n) const {
  mpz_class total = 0;
  // n - floor(delta n) = m forces m <= n <= m / (1 - delta) + 1
  const Rational upper = Rational(static_cast<long>(m)) / (Rational(1) - derivation_.delta) + Rational(1);
  const std::uint64_t hi = std::min<std::uint64_t>(ceil(upper).get_ui(), max_n);
  for (std::uint64_t n = std::max<std::uint64_t>(m, derivation_.min_length); n <= hi; ++n)
    if (trimmed_size(n) == m) total += mpz_class(placements_per_position(n)) * mpz_class(pattern_count(n));
  return total;
}

void PatternCnfInstance::derive(bool two_dimensional) {
  AvoidDerivation& d = derivation_;
  const Rational one(1);
  if (d.alpha <= Rational(0) || d.alpha >= one) fail(ErrorCode::invalid_argument, "sparsity alpha must lie in (0,1)");
  if (d.alpha_prime.is_zero()) d.alpha_prime = d.alpha + (one - d.alpha) / Rational(4);
  if (d.delta.is_zero()) d.delta = (one - d.alpha) / Rational(8);
  if (d.alpha_prime <= d.alpha || d.alpha_prime >= one) fail(ErrorCode::invalid_argument, "alpha' must lie in (alpha,1)");
  if (d.delta <= Rational(0) || d.delta >= one) fail(ErrorCode::invalid_argument, "delta must lie in (0,1)");
  d.alpha_trim = d.alpha_prime / (one - d.delta);
  if (d.alpha_trim >= one)
    fail(ErrorCode::invalid_argument, "delta too large: trimmed sparsity " + d.alpha_trim.to_string() + " >= 1");
  d.beta = (one + d.alpha_trim) / Rational(2);

  d.min_trimmed = min_clause_size(d.alpha_trim, d.epsilon);
  (void)two_dimensional;
  for (unsigned attempt = 0;; ++attempt) {
    if (attempt > 4096) fail(ErrorCode::invalid_argument, "could not validate sparsity for any clause size");
    d.min_length = d.min_trimmed;
    while (trimmed_size(d.min_length) < d.min_trimmed) ++d.min_length;
    bool ok = true;
    // placements per position times patterns of size n <= 2^(alpha' n), and
    // trimmed clauses through a variable <= 2^(alpha_trim m), on a window
    // of sizes past the threshold.
    for (std::uint64_t n = d.min_length; ok && n < d.min_length + 256; ++n) {
      if (auto mx = max_pattern_size(); mx && n > *mx) break;
      const std::uint64_t count = pattern_count(n);
      if (!within_sparsity(mpz_class(count), 1, d.alpha, n))
        fail(ErrorCode::instance_inconsistency, "sparsity violation: " + std::to_string(count) +
                                                    " patterns of size " + std::to_string(n));
      if (!within_sparsity(mpz_class(placements_per_position(n)) * count, 1, d.alpha_prime, n)) ok = false;
    }
    for (std::uint64_t m = d.min_trimmed; ok && m < d.min_trimmed + 256; ++m)
      if (!within_sparsity(cover_count(m, ~0ULL), 1, d.alpha_trim, m)) ok = false;
    if (ok) break;
    ++d.min_trimmed;
  }
}

Rational PatternCnfInstance::weight(EventId id) const {
  const std::uint64_t k = event_def(id).vars().size();
  std::lock_guard lock(memo_mutex_);
  auto it = weight_memo_.find(k);
  if (it == weight_memo_.end()) it = weight_memo_.emplace(k, dyadic_power_weight(derivation_.beta, k)).first;
  return it->second;
}

Rational PatternCnfInstance::sum_bound(std::uint64_t max_n) const {
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = sum_memo_.find(max_n); it != sum_memo_.end()) return it->second;
  }
  mpq_class sum = 0;
  std::map<std::uint64_t, mpz_class> cover;
  for (std::uint64_t n = derivation_.min_length; n <= max_n; ++n) {
    if (auto mx = max_pattern_size(); mx && n > *mx) break;
    const std::uint64_t c = pattern_count(n);
    if (c) cover[trimmed_size(n)] += mpz_class(placements_per_position(n)) * mpz_class(c);
  }
  for (const auto& [m, c] : cover) sum += c * dyadic_power_weight(derivation_.beta, m).raw();
  // Round up to a dyadic with 64 fractional bits past the leading zero run.
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 64 + 8 * 64);
  mpz_class num;
  mpz_class scaled_num = sum.get_num() * den;
  mpz_cdiv_q(num.get_mpz_t(), scaled_num.get_mpz_t(), sum.get_den_mpz_t());
  Rational bound(mpq_class(num, den));
  std::lock_guard lock(memo_mutex_);
  sum_memo_.emplace(max_n, bound);
  return bound;
}

ConditionRow PatternCnfInstance::check_condition(EventId id) const {
  Event e = event_def(id);
  const std::uint64_t k = e.vars().size();
  // Bucket the largest variable to a power of two; a larger bucket only
  // adds non-negative terms to the sum.
  VarIndex bucket = 1;
  while (bucket <= e.max_var()) bucket *= 2;
  std::uint64_t max_n = max_size_through(derivation_.delta, bucket - 1);
  if (auto mx = max_pattern_size()) max_n = std::min(max_n, *mx);
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = row_memo_.find({k, max_n}); it != row_memo_.end()) {
      ConditionRow row = it->second;
      row.event = id;
      return row;
    }
  }
  const Rational sum = sum_bound(max_n);
  ConditionRow row;
  row.event = id;
  row.lhs = Rational::pow2(-static_cast<long>(k));
  const Rational x = weight(id);
  row.rhs = sum >= Rational(1) ? Rational(0)
                               : (Rational(1) - derivation_.epsilon) * x * pow(Rational(1) - sum, k);
  row.slack = row.rhs - row.lhs;
  row.pass = row.lhs <= row.rhs;
  std::lock_guard lock(memo_mutex_);
  row_memo_.emplace(std::pair{k, max_n}, row);
  return row;
}

namespace {

constexpr std::uint64_t kPosOffset = 1ULL << 23;

/// 1D clause id: (position + offset) : 24 | length : 20 | word index : 20.
EventId encode_window(std::int64_t p, std::uint64_t n, std::uint64_t w) {
  if (n >= (1ULL << 20) || w >= (1ULL << 20) || p + static_cast<std::int64_t>(kPosOffset) < 0 ||
      p + static_cast<std::int64_t>(kPosOffset) >= static_cast<std::int64_t>(1ULL << 24))
    fail(ErrorCode::out_of_range, "window outside the encodable range");
  return (static_cast<std::uint64_t>(p + static_cast<std::int64_t>(kPosOffset)) << 40) | (n << 20) | w;
}

void decode_window(EventId id, std::int64_t& p, std::uint64_t& n, std::uint64_t& w) {
  p = static_cast<std::int64_t>(id >> 40) - static_cast<std::int64_t>(kPosOffset);
  n = (id >> 20) & ((1ULL << 20) - 1);
  w = id & ((1ULL << 20) - 1);
}

class SubstringCnf final : public PatternCnfInstance {
 public:
  SubstringCnf(std::shared_ptr<const ForbiddenSet> f, AvoidDerivation d, bool bi_infinite)
      : PatternCnfInstance(std::move(d)), forbidden_(std::move(f)), bi_(bi_infinite) {
    derive(false);
  }

  std::int64_t position(VarIndex v) const { return bi_ ? zigzag_position(v) : static_cast<std::int64_t>(v); }
  VarIndex var_at(std::int64_t z) const { return bi_ ? zigzag_index(z) : static_cast<VarIndex>(z); }

  /// Positions held by variables 0..v: an interval.
  std::pair<std::int64_t, std::int64_t> span_upto(VarIndex v) const {
    if (!bi_) return {0, static_cast<std::int64_t>(v)};
    return {zigzag_position(v % 2 == 1 ? v : (v == 0 ? 0 : v - 1)), zigzag_position(v % 2 == 0 ? v : v - 1)};
  }

  std::vector<EventId> events_with_max_var(VarIndex i) const override {
    const std::int64_t z = position(i);
    auto [lo, hi] = span_upto(i);
    std::vector<EventId> out;
    const auto width = static_cast<std::uint64_t>(hi - lo + 1);
    for (std::uint64_t n = derivation_.min_length; n <= width; ++n) {
      if (auto mx = forbidden_->max_length(); mx && n > *mx) break;
      const std::size_t count = words(n).size();
      std::int64_t p;
      if (z == hi)
        p = z - static_cast<std::int64_t>(n) + 1;
      else
        p = z;
      for (std::size_t w = 0; w < count; ++w) out.push_back(encode_window(p, n, w));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<EventId> events_of_variable(VarIndex v) const override {
    const std::int64_t z = position(v);
    std::uint64_t max_n = max_size_through(derivation_.delta, v);
    if (auto mx = forbidden_->max_length()) max_n = std::min(max_n, *mx);
    std::vector<EventId> out;
    for (std::uint64_t n = derivation_.min_length; n <= max_n; ++n) {
      const std::size_t count = words(n).size();
      if (count == 0) continue;
      const std::uint64_t drop = n - trimmed_size(n);
      for (std::int64_t p = z - static_cast<std::int64_t>(n) + 1; p <= z; ++p) {
        if (!bi_ && p < 0) continue;
        if (rank_in_window(v, p, n) < drop) continue;
        for (std::size_t w = 0; w < count; ++w) out.push_back(encode_window(p, n, w));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Event event_def(EventId id) const override {
    std::int64_t p;
    std::uint64_t n, w;
    decode_window(id, p, n, w);
    const auto& ws = words(n);
    if (n < derivation_.min_length || w >= ws.size() || (!bi_ && p < 0))
      fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
    const std::string& word = ws[w];
    std::vector<std::pair<VarIndex, Value>> cells;
    for (std::uint64_t t = 0; t < n; ++t)
      cells.emplace_back(var_at(p + static_cast<std::int64_t>(t)), static_cast<Value>(word[t] - '0'));
    if (bi_) std::sort(cells.begin(), cells.end());
    const std::uint64_t drop = n - trimmed_size(n);
    std::vector<VarIndex> vars;
    Tuple forbidden;
    for (std::size_t t = drop; t < cells.size(); ++t) {
      vars.push_back(cells[t].first);
      forbidden.push_back(cells[t].second);
    }
    return Event(id, std::move(vars), {std::move(forbidden)});
  }

  std::string word_of(std::span<const Value> values, std::int64_t& first) const {
    auto [lo, hi] = span_upto(values.size() - 1);
    first = lo;
    std::string s;
    for (std::int64_t z = lo; z <= hi; ++z) s.push_back(static_cast<char>('0' + values[var_at(z)]));
    return s;
  }

 protected:
  std::uint64_t pattern_count(std::uint64_t n) const override { return words(n).size(); }
  std::uint64_t placements_per_position(std::uint64_t n) const override {
    return bi_ ? n : trimmed_size(n);
  }
  std::optional<std::uint64_t> max_pattern_size() const override { return forbidden_->max_length(); }

 private:
  /// Number of positions of window [p, p+n) whose variable index is below v.
  std::uint64_t rank_in_window(VarIndex v, std::int64_t p, std::uint64_t n) const {
    if (!bi_) return static_cast<std::uint64_t>(static_cast<std::int64_t>(v) - p);
    if (v == 0) return 0;
    auto [lo, hi] = span_upto(v - 1);
    const std::int64_t a = std::max(lo, p), b = std::min(hi, p + static_cast<std::int64_t>(n) - 1);
    return b >= a ? static_cast<std::uint64_t>(b - a + 1) : 0;
  }

  const std::vector<std::string>& words(std::uint64_t n) const {
    std::lock_guard lock(mutex_);
    auto it = words_.find(n);
    if (it != words_.end()) return it->second;
    std::vector<std::string> ws = forbidden_->words(n);
    for (const auto& w : ws)
      if (w.size() != n || !forbidden_->contains(w))
        fail(ErrorCode::instance_inconsistency, "enumerator and decider disagree on '" + w + "'");
    if (!within_sparsity(mpz_class(static_cast<unsigned long>(ws.size())), 1, derivation_.alpha, n))
      fail(ErrorCode::instance_inconsistency,
           "sparsity violation: " + std::to_string(ws.size()) + " forbidden words of length " + std::to_string(n));
    return words_.emplace(n, std::move(ws)).first->second;
  }

  std::shared_ptr<const ForbiddenSet> forbidden_;
  bool bi_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, std::vector<std::string>> words_;
};

constexpr std::int64_t kCoordOffset = 1LL << 13;

/// 2D clause id: (x0 + offset) : 14 | (y0 + offset) : 14 | area : 20 | pattern : 16.
EventId encode_rect(std::int64_t x0, std::int64_t y0, std::uint64_t area, std::uint64_t pidx) {
  if (area >= (1ULL << 20) || pidx >= (1ULL << 16) || std::abs(x0) >= kCoordOffset || std::abs(y0) >= kCoordOffset)
    fail(ErrorCode::out_of_range, "placement outside the encodable range");
  return (static_cast<std::uint64_t>(x0 + kCoordOffset) << 50) | (static_cast<std::uint64_t>(y0 + kCoordOffset) << 36) |
         (area << 16) | pidx;
}

void decode_rect(EventId id, std::int64_t& x0, std::int64_t& y0, std::uint64_t& area, std::uint64_t& pidx) {
  x0 = static_cast<std::int64_t>(id >> 50) - kCoordOffset;
  y0 = static_cast<std::int64_t>((id >> 36) & ((1ULL << 14) - 1)) - kCoordOffset;
  area = (id >> 16) & ((1ULL << 20) - 1);
  pidx = id & ((1ULL << 16) - 1);
}

class PatternCnf2D final : public PatternCnfInstance {
 public:
  PatternCnf2D(std::shared_ptr<const PatternSet> f, AvoidDerivation d)
      : PatternCnfInstance(std::move(d)), forbidden_(std::move(f)) {
    derive(true);
  }

  std::vector<EventId> events_with_max_var(VarIndex i) const override {
    {
      std::lock_guard lock(mutex_);
      if (auto it = by_max_.find(i); it != by_max_.end()) return it->second;
    }
    auto [cx, cy] = spiral_cell(i);
    const std::int64_t k = std::max(std::abs(cx), std::abs(cy));
    std::vector<EventId> out;
    for (std::int64_t x0 = -k; x0 <= cx; ++x0)
      for (std::int64_t x1 = cx; x1 <= k; ++x1)
        for (std::int64_t y0 = -k; y0 <= cy; ++y0)
          for (std::int64_t y1 = cy; y1 <= k; ++y1) {
            const auto w = static_cast<std::uint64_t>(x1 - x0 + 1), h = static_cast<std::uint64_t>(y1 - y0 + 1);
            const std::uint64_t area = w * h;
            if (area < derivation_.min_length) continue;
            const auto& ps = patterns(area);
            bool any = false;
            for (const Pattern& p : ps) any = any || (p.height == h && p.width == w);
            if (!any || max_index(x0, y0, x1, y1) != i) continue;
            for (std::size_t t = 0; t < ps.size(); ++t)
              if (ps[t].height == h && ps[t].width == w) out.push_back(encode_rect(x0, y0, area, t));
          }
    std::sort(out.begin(), out.end());
    std::lock_guard lock(mutex_);
    return by_max_.emplace(i, std::move(out)).first->second;
  }

  std::vector<EventId> events_of_variable(VarIndex v) const override {
    auto [cx, cy] = spiral_cell(v);
    std::uint64_t max_n = max_size_through(derivation_.delta, v);
    if (auto mx = forbidden_->max_area()) max_n = std::min(max_n, *mx);
    std::vector<EventId> out;
    for (std::uint64_t n = derivation_.min_length; n <= max_n; ++n) {
      const auto& ps = patterns(n);
      const std::uint64_t drop = n - trimmed_size(n);
      for (std::size_t t = 0; t < ps.size(); ++t) {
        const auto h = static_cast<std::int64_t>(ps[t].height), w = static_cast<std::int64_t>(ps[t].width);
        for (std::int64_t x0 = cx - w + 1; x0 <= cx; ++x0)
          for (std::int64_t y0 = cy - h + 1; y0 <= cy; ++y0) {
            std::uint64_t rank = 0;
            for (std::int64_t x = x0; x < x0 + w; ++x)
              for (std::int64_t y = y0; y < y0 + h; ++y)
                if (spiral_index(x, y) < v) ++rank;
            if (rank >= drop) out.push_back(encode_rect(x0, y0, n, t));
          }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Event event_def(EventId id) const override {
    std::int64_t x0, y0;
    std::uint64_t area, pidx;
    decode_rect(id, x0, y0, area, pidx);
    const auto& ps = patterns(area);
    if (area < derivation_.min_length || pidx >= ps.size())
      fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
    const Pattern& p = ps[pidx];
    std::vector<std::pair<VarIndex, Value>> cells;
    for (std::size_t r = 0; r < p.height; ++r)
      for (std::size_t c = 0; c < p.width; ++c)
        cells.emplace_back(spiral_index(x0 + static_cast<std::int64_t>(c), y0 + static_cast<std::int64_t>(p.height - 1 - r)),
                           p.cells[r * p.width + c]);
    std::sort(cells.begin(), cells.end());
    const std::uint64_t drop = area - trimmed_size(area);
    std::vector<VarIndex> vars;
    Tuple forbidden;
    for (std::size_t t = drop; t < cells.size(); ++t) {
      vars.push_back(cells[t].first);
      forbidden.push_back(cells[t].second);
    }
    return Event(id, std::move(vars), {std::move(forbidden)});
  }

 protected:
  std::uint64_t pattern_count(std::uint64_t n) const override {
    if (forbidden_->name() == "zero-rects") {
      std::uint64_t d = 0;
      for (std::uint64_t h = 1; h * h <= n; ++h)
        if (n % h == 0) d += (h * h == n) ? 1 : 2;
      return d;
    }
    return patterns(n).size();
  }
  std::uint64_t placements_per_position(std::uint64_t n) const override { return n; }
  std::optional<std::uint64_t> max_pattern_size() const override { return forbidden_->max_area(); }

 private:
  static VarIndex max_index(std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1) {
    // The outermost ring of a rectangle lies on its boundary.
    VarIndex best = 0;
    for (std::int64_t x = x0; x <= x1; ++x) best = std::max({best, spiral_index(x, y0), spiral_index(x, y1)});
    for (std::int64_t y = y0; y <= y1; ++y) best = std::max({best, spiral_index(x0, y), spiral_index(x1, y)});
    return best;
  }

  const std::vector<Pattern>& patterns(std::uint64_t n) const {
    std::lock_guard lock(mutex_);
    auto it = patterns_.find(n);
    if (it != patterns_.end()) return it->second;
    std::vector<Pattern> ps = forbidden_->patterns(n);
    for (const auto& p : ps)
      if (p.area() != n || !forbidden_->contains(p))
        fail(ErrorCode::instance_inconsistency, "pattern enumerator and decider disagree");
    if (!within_sparsity(mpz_class(static_cast<unsigned long>(ps.size())), 1, derivation_.alpha, n))
      fail(ErrorCode::instance_inconsistency,
           "sparsity violation: " + std::to_string(ps.size()) + " patterns of area " + std::to_string(n));
    return patterns_.emplace(n, std::move(ps)).first->second;
  }

  std::shared_ptr<const PatternSet> forbidden_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, std::vector<Pattern>> patterns_;
  mutable std::map<VarIndex, std::vector<EventId>> by_max_;
};

AvoidDerivation initial_derivation(const Rational& alpha, const AvoidParams& params) {
  AvoidDerivation d;
  d.alpha = alpha;
  d.alpha_prime = params.alpha_prime.value_or(Rational(0));
  d.delta = params.delta.value_or(Rational(0));
  d.epsilon = params.epsilon;
  return d;
}

ExtractionParams mc_params(const AvoidParams& params, VarIndex horizon) {
  ExtractionParams ep;
  ep.mode = ExtractionMode::monte_carlo;
  ep.replicas = params.replicas;
  ep.seed = params.seed;
  ep.margin = params.margin;
  ep.horizon = horizon;
  ep.threads = params.threads;
  return ep;
}

}  // namespace

std::shared_ptr<PatternCnfInstance> substring_cnf(std::shared_ptr<const ForbiddenSet> forbidden,
                                                  const AvoidParams& params) {
  Rational alpha = forbidden->alpha();
  return std::make_shared<SubstringCnf>(std::move(forbidden), initial_derivation(alpha, params), params.bi_infinite);
}

std::shared_ptr<PatternCnfInstance> pattern_cnf_2d(std::shared_ptr<const PatternSet> forbidden,
                                                   const AvoidParams& params) {
  Rational alpha = forbidden->alpha();
  return std::make_shared<PatternCnf2D>(std::move(forbidden), initial_derivation(alpha, params));
}

WindowReport scan_windows(const ForbiddenSet& forbidden, const std::string& word, std::uint64_t min_length) {
  WindowReport r;
  std::uint64_t hi = word.size();
  if (auto mx = forbidden.max_length()) hi = std::min<std::uint64_t>(hi, *mx);
  for (std::uint64_t n = std::max<std::uint64_t>(min_length, 1); n <= hi; ++n)
    for (std::uint64_t p = 0; p + n <= word.size(); ++p) {
      ++r.checked;
      if (forbidden.contains(word.substr(p, n))) r.violations.emplace_back(static_cast<std::int64_t>(p), n);
    }
  return r;
}

AvoidResult1D avoid_substrings(std::shared_ptr<const ForbiddenSet> forbidden, std::uint64_t length,
                               const AvoidParams& params) {
  auto inst = substring_cnf(forbidden, params);
  auto& sub = static_cast<const SubstringCnf&>(*inst);
  AvoidResult1D out;
  out.derivation = inst->derivation();
  if (length == 0) return out;
  const VarIndex last = length - 1;
  out.prefix = extract_computable_prefix(*inst, last, mc_params(params, last + out.derivation.min_length));
  out.word = sub.word_of(out.prefix.values, out.first_position);
  out.windows = scan_windows(*forbidden, out.word, out.derivation.min_length);
  out.events = verify_prefix(*inst, out.prefix.values);
  return out;
}

RectangleReport scan_rectangles(const PatternSet& forbidden, const std::vector<std::vector<std::uint8_t>>& block,
                                std::uint64_t min_area) {
  RectangleReport r;
  const std::size_t rows = block.size(), cols = rows ? block[0].size() : 0;
  for (std::size_t h = 1; h <= rows; ++h)
    for (std::size_t w = 1; w <= cols; ++w) {
      if (h * w < min_area) continue;
      if (auto mx = forbidden.max_area(); mx && h * w > *mx) continue;
      for (std::size_t r0 = 0; r0 + h <= rows; ++r0)
        for (std::size_t c0 = 0; c0 + w <= cols; ++c0) {
          Pattern p{h, w, {}};
          for (std::size_t a = 0; a < h; ++a)
            for (std::size_t b = 0; b < w; ++b) p.cells.push_back(block[r0 + a][c0 + b]);
          ++r.checked;
          if (forbidden.contains(p))
            r.violations.push_back({static_cast<std::int64_t>(c0), static_cast<std::int64_t>(r0),
                                    static_cast<std::int64_t>(h), static_cast<std::int64_t>(w)});
        }
    }
  return r;
}

AvoidResult2D avoid_patterns_2d(std::shared_ptr<const PatternSet> forbidden, std::int64_t radius,
                                const AvoidParams& params) {
  if (radius < 0) fail(ErrorCode::invalid_argument, "radius must be non-negative");
  auto inst = pattern_cnf_2d(forbidden, params);
  AvoidResult2D out;
  out.radius = radius;
  out.derivation = inst->derivation();
  const auto side = static_cast<VarIndex>(2 * radius + 1);
  const VarIndex last = side * side - 1;
  const VarIndex horizon = (side + 2) * (side + 2) - 1;
  out.prefix = extract_computable_prefix(*inst, last, mc_params(params, horizon));
  out.block.assign(side, std::vector<std::uint8_t>(side, 0));
  for (VarIndex row = 0; row < side; ++row)
    for (VarIndex col = 0; col < side; ++col) {
      const std::int64_t x = -radius + static_cast<std::int64_t>(col), y = radius - static_cast<std::int64_t>(row);
      out.block[row][col] = static_cast<std::uint8_t>(out.prefix.values[spiral_index(x, y)]);
    }
  out.rectangles = scan_rectangles(*forbidden, out.block, out.derivation.min_length);
  out.events = verify_prefix(*inst, out.prefix.values);
  return out;
}

// ---------------------------------------------------------------------------
// Built-in effective instances

namespace {

class NoEvents final : public EffectiveInstance {
 public:
  VariableSpec variable_spec(VarIndex i) const override { return VariableSpec::uniform(i, 2); }
  std::vector<EventId> events_of_variable(VarIndex) const override { return {}; }
  Event event_def(EventId id) const override {
    fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
  }
  Rational weight(EventId id) const override {
    fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
  }
  Rational epsilon() const override { return Rational(1, 10); }
};

class SingleBit final : public EffectiveInstance {
 public:
  VariableSpec variable_spec(VarIndex i) const override { return VariableSpec::uniform(i, 2); }
  std::vector<EventId> events_of_variable(VarIndex i) const override {
    return i == 0 ? std::vector<EventId>{0} : std::vector<EventId>{};
  }
  Event event_def(EventId id) const override {
    if (id != 0) fail(ErrorCode::instance_inconsistency, "unknown event " + std::to_string(id));
    return Event(0, {0}, {{1}});
  }
  Rational weight(EventId) const override { return Rational(3, 4); }
  Rational epsilon() const override { return Rational(1, 10); }
};

class PairChain final : public EffectiveInstance {
 public:
  VariableSpec variable_spec(VarIndex i) const override {
    VariableSpec s;
    s.index = i;
    s.distribution = {Rational(1, 4), Rational(3, 4)};
    return s;
  }
  std::vector<EventId> events_of_variable(VarIndex i) const override {
    if (i == 0) return {0};
    return {i - 1, i};
  }
  Event event_def(EventId id) const override { return Event(id, {id, id + 1}, {{0, 0}}); }
  Rational weight(EventId) const override { return Rational(1, 4); }
  Rational epsilon() const override { return Rational(1, 10); }
};

}  // namespace

std::shared_ptr<EffectiveInstance> no_events_family() { return std::make_shared<NoEvents>(); }
std::shared_ptr<EffectiveInstance> single_bit_family() { return std::make_shared<SingleBit>(); }
std::shared_ptr<EffectiveInstance> chain_family() { return std::make_shared<PairChain>(); }

std::shared_ptr<EffectiveInstance> make_family(const FamilySpec& spec) {
  if (spec.name == "none") return no_events_family();
  if (spec.name == "single-bit") return single_bit_family();
  if (spec.name == "chain") return chain_family();
  if (spec.name == "uniform-chain")
    return uniform_cnf_instance(std::make_shared<UniformChainClauses>(spec.m), spec.m, spec.epsilon);
  if (spec.name == "instance") return std::make_shared<FiniteEffectiveInstance>(load_instance(spec.path));
  fail(ErrorCode::invalid_argument, "unknown family '" + spec.name + "'");
}

}  // namespace lll
