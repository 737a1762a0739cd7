#include <fstream>
#include <sstream>

#include "lll/core.hpp"

namespace lll {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + msg);
}

std::uint64_t parse_uint(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    parse_fail(line, "expected non-negative integer, got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    parse_fail(line, "integer out of range '" + tok + "'");
  }
}

Rational parse_rational(const std::string& tok, std::size_t line) {
  try {
    return Rational::parse(tok);
  } catch (const Error& e) {
    parse_fail(line, e.what());
  }
}

struct PendingEvent {
  EventId id = 0;
  std::vector<VarIndex> vars;
  std::vector<Tuple> forbidden;
  std::size_t line = 0;
};

}  // namespace

FiniteInstance parse_instance(std::istream& in) {
  FiniteInstance inst;
  bool have_header = false, have_eps = false;
  std::uint64_t declared = 0;
  std::vector<bool> seen;
  std::vector<PendingEvent> pending;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string& kw = tok[0];
    if (kw != "vars" && !have_header) parse_fail(lineno, "expected 'vars <count>' header first");
    if (have_eps) parse_fail(lineno, "content after 'epsilon' footer");

    if (kw == "vars") {
      if (have_header) parse_fail(lineno, "duplicate 'vars' header");
      if (tok.size() != 2) parse_fail(lineno, "usage: vars <count>");
      declared = parse_uint(tok[1], lineno);
      inst.variables.resize(declared);
      seen.assign(declared, false);
      have_header = true;
    } else if (kw == "var") {
      if (tok.size() < 4) parse_fail(lineno, "usage: var <i> <n_i> <p_0> ... <p_{n_i-1}>");
      std::uint64_t i = parse_uint(tok[1], lineno);
      std::uint64_t n = parse_uint(tok[2], lineno);
      if (i >= declared) parse_fail(lineno, "variable index " + tok[1] + " exceeds declared count");
      if (seen[i]) parse_fail(lineno, "variable " + tok[1] + " defined twice");
      if (tok.size() != 3 + n) parse_fail(lineno, "expected " + tok[2] + " probabilities");
      VariableSpec spec;
      spec.index = i;
      for (std::size_t k = 0; k < n; ++k) spec.distribution.push_back(parse_rational(tok[3 + k], lineno));
      try {
        spec.validate();
      } catch (const Error& e) {
        parse_fail(lineno, e.what());
      }
      inst.variables[i] = std::move(spec);
      seen[i] = true;
    } else if (kw == "event") {
      // event <id> vars <i_1> ... <i_k> x <num/den>
      if (tok.size() < 6 || tok[2] != "vars" || tok[tok.size() - 2] != "x")
        parse_fail(lineno, "usage: event <id> vars <i_1> ... <i_k> x <num/den>");
      PendingEvent ev;
      ev.id = parse_uint(tok[1], lineno);
      ev.line = lineno;
      for (std::size_t k = 3; k + 2 < tok.size(); ++k) ev.vars.push_back(parse_uint(tok[k], lineno));
      if (ev.vars.empty()) parse_fail(lineno, "event needs at least one variable");
      for (std::size_t k = 1; k < ev.vars.size(); ++k)
        if (ev.vars[k - 1] >= ev.vars[k]) parse_fail(lineno, "event variables must be strictly increasing");
      inst.weights[ev.id] = parse_rational(tok.back(), lineno);
      pending.push_back(std::move(ev));
    } else if (kw == "forbid") {
      if (pending.empty()) parse_fail(lineno, "'forbid' before any 'event'");
      PendingEvent& ev = pending.back();
      if (tok.size() != ev.vars.size() + 1)
        parse_fail(lineno, "forbidden tuple must have " + std::to_string(ev.vars.size()) + " entries");
      Tuple t;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        auto v = parse_uint(tok[k], lineno);
        if (v > 0xffffffffULL) parse_fail(lineno, "value too large");
        const VarIndex var = ev.vars[k - 1];
        if (var < declared && seen[var] && v >= inst.variables[var].distribution.size())
          parse_fail(lineno, "value " + tok[k] + " out of range for variable " + std::to_string(var));
        t.push_back(static_cast<Value>(v));
      }
      ev.forbidden.push_back(std::move(t));
    } else if (kw == "epsilon") {
      if (tok.size() != 2) parse_fail(lineno, "usage: epsilon <num/den>");
      inst.epsilon = parse_rational(tok[1], lineno);
      have_eps = true;
    } else {
      parse_fail(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!have_header) parse_fail(lineno, "missing 'vars' header");
  if (!have_eps) parse_fail(lineno, "missing 'epsilon' footer");
  for (std::size_t i = 0; i < declared; ++i)
    if (!seen[i]) parse_fail(lineno, "variable " + std::to_string(i) + " not defined");

  for (PendingEvent& ev : pending) {
    try {
      Event e(ev.id, std::move(ev.vars), std::move(ev.forbidden));
      inst.events.push_back(std::move(e));
    } catch (const Error& e) {
      parse_fail(ev.line, e.what());
    }
  }
  inst.validate();
  return inst;
}

FiniteInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::parse_error, "cannot open '" + path + "'");
  return parse_instance(in);
}

void write_instance(std::ostream& out, const FiniteInstance& instance) {
  out << "vars " << instance.variables.size() << '\n';
  for (const VariableSpec& v : instance.variables) {
    out << "var " << v.index << ' ' << v.range_size();
    for (const Rational& p : v.distribution) out << ' ' << p.to_string();
    out << '\n';
  }
  for (const Event& e : instance.events) {
    out << "event " << e.id() << " vars";
    for (VarIndex v : e.vars()) out << ' ' << v;
    out << " x " << instance.weight(e.id()).to_string() << '\n';
    for (const Tuple& t : e.forbidden()) {
      out << "forbid";
      for (Value v : t) out << ' ' << v;
      out << '\n';
    }
  }
  out << "epsilon " << instance.epsilon.to_string() << '\n';
}

}  // namespace lll
