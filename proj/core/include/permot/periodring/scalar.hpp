#pragma once

#include <map>
#include <optional>
#include <string>

#include "permot/numfield/matrix.hpp"
#include "permot/periodring/polynomial.hpp"
#include "permot/periodring/registry.hpp"

namespace permot {

// Element of the fraction field of K[symbols]/(relations).
//
// Both numerator and denominator are kept in rewrite normal form, common
// polynomial factors are cancelled and the denominator is scaled to leading
// coefficient 1.  Without relations this representative is canonical; with
// relations equality still holds exactly because operator== compares by
// cross-multiplication.  A null registry marks a constant from K.
class PeriodScalar {
 public:
  PeriodScalar() = default;
  PeriodScalar(const FieldElem& c) : num_(c), den_(1) {}  // NOLINT
  PeriodScalar(long c) : PeriodScalar(FieldElem(c)) {}  // NOLINT

  static PeriodScalar symbol(const RegistryPtr& registry, std::size_t index);
  static PeriodScalar two_pi_i(const RegistryPtr& registry);
  // Throws DomainError on a zero denominator or when the denominator
  // normalizes to zero modulo the relations.
  static PeriodScalar fraction(Polynomial num, Polynomial den, RegistryPtr registry);
  static PeriodScalar polynomial(Polynomial num, RegistryPtr registry) {
    return fraction(std::move(num), Polynomial(1), std::move(registry));
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const RegistryPtr& registry() const { return registry_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  // The value when it lies in K.
  std::optional<FieldElem> constant_value() const;

  PeriodScalar operator-() const;
  PeriodScalar& operator+=(const PeriodScalar& o);
  PeriodScalar& operator-=(const PeriodScalar& o);
  PeriodScalar& operator*=(const PeriodScalar& o);
  PeriodScalar& operator/=(const PeriodScalar& o);
  friend PeriodScalar operator+(PeriodScalar a, const PeriodScalar& b) { return a += b; }
  friend PeriodScalar operator-(PeriodScalar a, const PeriodScalar& b) { return a -= b; }
  friend PeriodScalar operator*(PeriodScalar a, const PeriodScalar& b) { return a *= b; }
  friend PeriodScalar operator/(PeriodScalar a, const PeriodScalar& b) { return a /= b; }

  PeriodScalar inverse() const;
  PeriodScalar pow(long e) const;

  bool operator==(const PeriodScalar& o) const;
  bool operator!=(const PeriodScalar& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  PeriodScalar(Polynomial num, Polynomial den, RegistryPtr registry)
      : num_(std::move(num)), den_(std::move(den)), registry_(std::move(registry)) {}

  void canonicalize();
  static RegistryPtr join(const RegistryPtr& a, const RegistryPtr& b);
  Polynomial nf(const Polynomial& p) const;

  Polynomial num_;
  Polynomial den_ = Polynomial(1);
  RegistryPtr registry_;
};

inline bool is_zero(const PeriodScalar& s) { return s.is_zero(); }

using ScalarMatrix = Matrix<PeriodScalar>;

// Re-applies the rewrite rules and fraction reduction.  The registry must be
// frozen.
PeriodScalar normal_form(const PeriodScalar& s);

using MonomialCoefficients = std::map<Monomial, FieldElem, GrlexLess>;

// Monomial -> coefficient map of a scalar with trivial denominator; throws
// DomainError otherwise.
MonomialCoefficients monomial_coefficients(const PeriodScalar& s);

// Logarithm of a nonzero element of K as a combination of registry symbols.
// Over Q: a = sign * prod p^e gives sum e_p log p + (1/2) 2*pi*i for a < 0
// (principal branch).  Over a number field: 1, -1, a declared log_unit value
// or its inverse.  Throws SymbolError when a needed symbol is missing and
// DomainError for a = 0.
PeriodScalar log_decompose(const FieldElem& a, const RegistryPtr& registry);

// Multiplicative coordinates of a nonzero element: sign bit (a = -|a| over Q,
// or a = -u over a field) and exponents over the registry's multiplicative
// generators (log_prime / log_unit symbol indices).
struct MultiplicativeCoordinates {
  bool negative = false;
  std::map<std::size_t, mpz_class> exponents;
};
MultiplicativeCoordinates multiplicative_coordinates(const FieldElem& a, const SymbolRegistry& registry);

// Rational primes dividing the numerator or denominator of a nonzero rational.
std::vector<mpz_class> prime_support(const mpq_class& a);

// Parses an expression over registry symbols, e.g. "w2*e1 + twopii" or
// "(1/2)*twopii + 3*log2".  The field generator name denotes the field
// generator.
PeriodScalar parse_scalar(const std::string& text, const RegistryPtr& registry);

// Scalar matrix helpers.
ScalarMatrix to_scalar(const FieldMatrix& m);
ScalarMatrix to_scalar(const IntMatrix& m);
// Entrywise K-values when all entries are constant.
std::optional<FieldMatrix> constant_matrix(const ScalarMatrix& m);
std::string to_string(const ScalarMatrix& m);

}  // namespace permot
