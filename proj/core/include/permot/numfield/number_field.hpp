#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace permot {

// Dense univariate polynomial over Q, coefficients low degree first.
// The zero polynomial is the empty vector.
using QPoly = std::vector<mpq_class>;

namespace qpoly {

void trim(QPoly& p);
int degree(const QPoly& p);  // -1 for zero
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
// Division with remainder; b must be nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly& quot, QPoly& rem);
QPoly mod(const QPoly& a, const QPoly& b);
// Monic gcd together with Bezout cofactors: s*a + t*b = g.
QPoly ext_gcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t);
mpq_class eval(const QPoly& p, const mpq_class& x);

}  // namespace qpoly

// Largest degree for which irreducibility of a defining polynomial is
// decided; larger degrees are rejected.
inline constexpr int kMaxFieldDegree = 8;

// Decides irreducibility over Q of a polynomial of degree <= kMaxFieldDegree
// by a rational root search followed by Kronecker's factor search over Z.
bool is_irreducible_over_q(const QPoly& f);

// A simple number field Q[x]/(f) with f monic and irreducible.
class NumberField {
 public:
  // Throws DomainError when f is not monic, has degree < 1 or
  // > kMaxFieldDegree, or is reducible over Q.
  static std::shared_ptr<const NumberField> make(QPoly minpoly,
                                                 std::string generator = "a");

  int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
  const QPoly& minpoly() const { return minpoly_; }
  const std::string& generator() const { return generator_; }

  bool operator==(const NumberField& other) const {
    return minpoly_ == other.minpoly_;
  }

 private:
  NumberField(QPoly minpoly, std::string generator)
      : minpoly_(std::move(minpoly)), generator_(std::move(generator)) {}

  QPoly minpoly_;
  std::string generator_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of Q or of a number field K = Q[x]/(f), stored in the power basis
// 1, a, ..., a^(d-1) with trailing zeros trimmed.  A null field pointer marks
// a plain rational, which embeds into every field; binary operations take the
// field from whichever operand carries one.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(long v) : coeffs_{mpq_class(v)} { normalize(); }  // NOLINT
  FieldElem(const mpz_class& v) : coeffs_{mpq_class(v)} { normalize(); }  // NOLINT
  FieldElem(const mpq_class& v) : coeffs_{v} { normalize(); }  // NOLINT
  FieldElem(QPoly coords, FieldPtr field);

  static FieldElem generator(const FieldPtr& field);

  const QPoly& coords() const { return coeffs_; }
  const FieldPtr& field() const { return field_; }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  bool is_rational() const { return coeffs_.size() <= 1; }
  // Requires is_rational().
  mpq_class rational() const;

  FieldElem operator-() const;
  FieldElem& operator+=(const FieldElem& o);
  FieldElem& operator-=(const FieldElem& o);
  FieldElem& operator*=(const FieldElem& o);
  FieldElem& operator/=(const FieldElem& o);
  friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
  friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
  friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }
  friend FieldElem operator/(FieldElem a, const FieldElem& b) { return a /= b; }

  // Throws DomainError on zero.
  FieldElem inverse() const;
  FieldElem pow(long e) const;

  bool operator==(const FieldElem& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  // Total order on coordinate vectors; not a field order.
  bool operator<(const FieldElem& o) const;

  std::string to_string() const;

 private:
  void normalize();
  void adopt_field(const FieldElem& o);

  QPoly coeffs_;
  FieldPtr field_;
};

inline bool is_zero(const FieldElem& x) { return x.is_zero(); }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }

// Parses "3", "-1/2", or a polynomial expression in the field generator such
// as "1+2*a-a^2/3".  Throws DomainError on malformed input.
FieldElem parse_field_elem(const std::string& text, const FieldPtr& field);

}  // namespace permot
