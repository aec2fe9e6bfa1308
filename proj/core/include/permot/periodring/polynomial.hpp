#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "permot/numfield/number_field.hpp"

namespace permot {

// Exponent vector indexed by registry position, trailing zeros trimmed so
// that equal monomials have equal representations.
using Monomial = std::vector<int>;

namespace monomial {

void trim(Monomial& m);
int degree(const Monomial& m);
int exponent(const Monomial& m, std::size_t var);
Monomial mul(const Monomial& a, const Monomial& b);
bool divides(const Monomial& d, const Monomial& m);
// Requires divides(d, m).
Monomial div(const Monomial& m, const Monomial& d);
Monomial gcd(const Monomial& a, const Monomial& b);
Monomial var(std::size_t index, int power = 1);
// Graded lexicographic order: total degree first, then the exponent of the
// lowest-indexed variable is most significant.
bool grlex_less(const Monomial& a, const Monomial& b);

}  // namespace monomial

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial::grlex_less(a, b); }
};

// Sparse multivariate polynomial with FieldElem coefficients; no zero
// coefficients are stored.  Iteration runs from the smallest monomial up,
// so the leading term is terms().rbegin().
class Polynomial {
 public:
  using TermMap = std::map<Monomial, FieldElem, GrlexLess>;

  Polynomial() = default;
  Polynomial(const FieldElem& c);  // NOLINT: constants embed implicitly
  Polynomial(long c) : Polynomial(FieldElem(c)) {}  // NOLINT
  static Polynomial term(const FieldElem& c, Monomial m);
  static Polynomial variable(std::size_t index, int power = 1);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant coefficient (zero if absent).
  FieldElem constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::size_t size() const { return terms_.size(); }

  // Requires !is_zero().
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const FieldElem& leading_coefficient() const { return terms_.rbegin()->second; }

  int total_degree() const;
  int degree_in(std::size_t var) const;
  // Largest variable index with positive exponent, or -1 for constants.
  int max_variable() const;

  FieldElem coefficient(const Monomial& m) const;
  void add_term(const FieldElem& c, const Monomial& m);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const FieldElem& c) const;
  Polynomial shifted(const Monomial& m) const;  // multiply by a monomial
  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Exact quotient, or false when `d` does not divide this polynomial.
  bool divide_exact(const Polynomial& d, Polynomial& quotient) const;

  // Coefficients as a univariate polynomial in `var`: result[k] is the
  // coefficient of var^k.
  std::vector<Polynomial> univariate_coefficients(std::size_t var) const;

  std::string to_string(const std::function<std::string(std::size_t)>& name) const;

 private:
  TermMap terms_;
};

// Monic greatest common divisor in K[x_1, ..., x_n] (primitive PRS with
// recursive contents).  gcd(0, 0) = 0.
Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b);

inline bool is_zero(const Polynomial& p) { return p.is_zero(); }

}  // namespace permot
