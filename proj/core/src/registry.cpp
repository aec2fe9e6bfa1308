#include "permot/periodring/registry.hpp"

#include "permot/error.hpp"

namespace permot {

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::TwoPiI: return "two_pi_i";
    case SymbolKind::LogPrime: return "log_prime";
    case SymbolKind::LogUnit: return "log_unit";
    case SymbolKind::AbelianPeriod: return "abelian_period";
    case SymbolKind::EllipticLog: return "elliptic_log";
    case SymbolKind::User: return "user";
  }
  return "user";
}

std::optional<SymbolKind> symbol_kind_from_string(std::string_view text) {
  for (auto k : {SymbolKind::TwoPiI, SymbolKind::LogPrime, SymbolKind::LogUnit,
                 SymbolKind::AbelianPeriod, SymbolKind::EllipticLog, SymbolKind::User})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

SymbolRegistry::SymbolRegistry(FieldPtr field, std::string two_pi_i_name) : field_(std::move(field)) {
  symbols_.push_back({SymbolKind::TwoPiI, std::move(two_pi_i_name), 0, FieldElem()});
}

void SymbolRegistry::require_open() const {
  if (frozen_) throw RegistryStateError("symbol registry is frozen");
}

std::size_t SymbolRegistry::add_symbol(SymbolKind kind, std::string name) {
  require_open();
  if (kind == SymbolKind::TwoPiI) throw SymbolError("the registry already holds its 2*pi*i symbol");
  if (kind == SymbolKind::LogPrime || kind == SymbolKind::LogUnit)
    throw SymbolError("use add_log_prime / add_log_unit for logarithm symbols");
  if (name.empty()) throw SymbolError("empty symbol name");
  if (field_ && name == field_->generator())
    throw SymbolError("symbol '" + name + "' clashes with the field generator");
  if (find(name)) throw SymbolError("duplicate symbol '" + name + "'");
  symbols_.push_back({kind, std::move(name), 0, FieldElem()});
  return symbols_.size() - 1;
}

std::size_t SymbolRegistry::add_log_prime(const mpz_class& p) {
  if (auto i = find_log_prime(p)) return *i;
  require_open();
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
    throw SymbolError("log_prime symbol requested for non-prime " + p.get_str());
  std::string name = "log" + p.get_str();
  if (find(name)) throw SymbolError("symbol name '" + name + "' already taken");
  symbols_.push_back({SymbolKind::LogPrime, std::move(name), p, FieldElem()});
  return symbols_.size() - 1;
}

std::size_t SymbolRegistry::add_log_unit(std::string name, FieldElem value) {
  require_open();
  if (find(name)) throw SymbolError("duplicate symbol '" + name + "'");
  if (value.is_zero() || value.is_one() || (-value).is_one())
    throw SymbolError("log_unit '" + name + "' needs a value other than 0 and +-1");
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::LogUnit && (s.unit_value == value || s.unit_value == value.inverse()))
      throw SymbolError("log_unit '" + name + "' repeats the value of '" + s.name + "'");
  symbols_.push_back({SymbolKind::LogUnit, std::move(name), 0, std::move(value)});
  return symbols_.size() - 1;
}

std::optional<std::size_t> SymbolRegistry::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> SymbolRegistry::find_log_prime(const mpz_class& p) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].kind == SymbolKind::LogPrime && symbols_[i].prime == p) return i;
  return std::nullopt;
}

void SymbolRegistry::add_relation(Monomial lhs, Polynomial rhs) {
  require_open();
  monomial::trim(lhs);
  const std::string shown = format(Polynomial::term(FieldElem(1), lhs)) + " -> " + format(rhs);
  auto reject = [&](const std::string& why) {
    throw SymbolError("relation " + shown + " rejected: " + why);
  };
  if (lhs.size() > symbols_.size()) reject("unknown symbol index");
  if (monomial::degree(lhs) == 0) reject("left-hand side must be a non-constant monomial");
  for (const auto& [m, c] : rhs.terms()) {
    if (m.size() > symbols_.size()) reject("unknown symbol index");
    if (!monomial::grlex_less(m, lhs))
      reject("violates the triangular rewriting restriction (right-hand monomial not smaller "
             "than the left-hand monomial in grlex order)");
  }
  for (const auto& rule : rules_) {
    if (monomial::divides(rule.lhs, lhs) || monomial::divides(lhs, rule.lhs))
      reject("violates the triangular rewriting restriction (left-hand monomials overlap)");
    for (const auto& [m, c] : rhs.terms())
      if (monomial::divides(rule.lhs, m))
        reject("violates the triangular rewriting restriction (right-hand side contains a "
               "rewritable monomial)");
    for (const auto& [m, c] : rule.rhs.terms())
      if (monomial::divides(lhs, m))
        reject("violates the triangular rewriting restriction (an earlier right-hand side "
               "contains this left-hand monomial)");
  }
  if (rhs.is_zero()) reject("a monomial equal to zero makes its symbols zero divisors");
  // A common monomial factor m of lhs - rhs gives m * (...) = 0.
  Monomial common = lhs;
  for (const auto& [m, c] : rhs.terms()) common = monomial::gcd(common, m);
  if (monomial::degree(common) > 0) reject("introduces a zero divisor (common monomial factor)");
  rules_.push_back({std::move(lhs), std::move(rhs)});
}

Polynomial SymbolRegistry::normal_form(const Polynomial& p) const {
  if (rules_.empty()) return p;
  Polynomial cur = p;
  for (;;) {
    bool rewritten = false;
    // Largest reducible term first; rewriting only creates smaller monomials.
    for (auto it = cur.terms().rbegin(); it != cur.terms().rend() && !rewritten; ++it) {
      for (const auto& rule : rules_) {
        if (!monomial::divides(rule.lhs, it->first)) continue;
        const Monomial cofactor = monomial::div(it->first, rule.lhs);
        const FieldElem c = it->second;
        const Monomial m = it->first;
        Polynomial next = cur;
        next.add_term(-c, m);
        next += rule.rhs.shifted(cofactor).scaled(c);
        cur = std::move(next);
        rewritten = true;
        break;
      }
    }
    if (!rewritten) return cur;
  }
}

std::string SymbolRegistry::format(const Polynomial& p) const {
  return p.to_string([this](std::size_t i) {
    return i < symbols_.size() ? symbols_[i].name : "x" + std::to_string(i);
  });
}

}  // namespace permot
