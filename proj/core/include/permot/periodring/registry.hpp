#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permot/numfield/number_field.hpp"
#include "permot/periodring/polynomial.hpp"

namespace permot {

enum class SymbolKind { TwoPiI, LogPrime, LogUnit, AbelianPeriod, EllipticLog, User };

std::string_view to_string(SymbolKind kind);
std::optional<SymbolKind> symbol_kind_from_string(std::string_view text);

struct Symbol {
  SymbolKind kind = SymbolKind::User;
  std::string name;
  mpz_class prime;       // LogPrime only
  FieldElem unit_value;  // LogUnit only: the element whose logarithm this is
};

// lhs -> rhs with every monomial of rhs strictly grlex-smaller than lhs.
struct RewriteRule {
  Monomial lhs;
  Polynomial rhs;
};

// Ordered set of formal transcendental generators over the base field plus
// a triangular rewriting system.  Index 0 is always the distinguished 2*pi*i.
// The registry is filled, frozen, and from then on only read; every
// mutating call after freeze() throws RegistryStateError.
class SymbolRegistry {
 public:
  static constexpr std::size_t kTwoPiI = 0;

  explicit SymbolRegistry(FieldPtr field = nullptr, std::string two_pi_i_name = "twopii");

  std::size_t add_symbol(SymbolKind kind, std::string name);
  // Registers "log<p>" for a rational prime p; returns the existing index
  // when already present.
  std::size_t add_log_prime(const mpz_class& p);
  std::size_t add_log_unit(std::string name, FieldElem value);

  // Validates the triangular form and the zero-divisor heuristics, then
  // appends.  Throws SymbolError with the reason on rejection.
  void add_relation(Monomial lhs, Polynomial rhs);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  std::size_t size() const { return symbols_.size(); }
  const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::string& name(std::size_t i) const { return symbols_.at(i).name; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::optional<std::size_t> find_log_prime(const mpz_class& p) const;
  const std::vector<RewriteRule>& relations() const { return rules_; }
  const FieldPtr& field() const { return field_; }

  // Applies the rewrite rules until no left-hand monomial divides any term.
  Polynomial normal_form(const Polynomial& p) const;

  std::string format(const Polynomial& p) const;

 private:
  void require_open() const;

  FieldPtr field_;
  std::vector<Symbol> symbols_;
  std::vector<RewriteRule> rules_;
  bool frozen_ = false;
};

using RegistryPtr = std::shared_ptr<const SymbolRegistry>;

}  // namespace permot
