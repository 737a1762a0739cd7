#include "lll/rational.hpp"

#include <cctype>

#include "lll/error.hpp"

namespace lll {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::instance_inconsistency: return "instance inconsistency";
    case ErrorCode::condition_failed: return "condition failed";
    case ErrorCode::budget_exhausted: return "budget exhausted";
    case ErrorCode::extraction_threshold: return "extraction threshold";
    case ErrorCode::out_of_range: return "out of range";
    case ErrorCode::tape_exhausted: return "tape exhausted";
  }
  return "unknown";
}

Rational::Rational(long n, long d) {
  if (d == 0) fail(ErrorCode::invalid_argument, "zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view num = text, den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (!all_digits(den)) fail(ErrorCode::parse_error, "bad rational '" + std::string(text) + "'");
  }
  std::string_view digits = num;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) fail(ErrorCode::parse_error, "bad rational '" + std::string(text) + "'");

  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num));
  mpz_class d = den.empty() ? mpz_class(1) : mpz_class(std::string(den));
  if (d == 0) fail(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(mpq_class(p));
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(mpq_class(mpz_class(1), p));
}

bool Rational::is_dyadic() const {
  const mpz_class& d = v_.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorCode::invalid_argument, "division by zero");
  v_ /= o.v_;
  return *this;
}

Rational pow(Rational base, unsigned long exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
  return Rational(mpq_class(n, d));
}

mpz_class ceil(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return q;
}

}  // namespace lll
