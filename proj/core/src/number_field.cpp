#include "permot/numfield/number_field.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <sstream>

#include "permot/error.hpp"
#include "permot/expr_lexer.hpp"

namespace permot {

namespace qpoly {

void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& quot, QPoly& rem) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  rem = a;
  trim(rem);
  quot.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, 0);
  const mpq_class& lead = b.back();
  while (!rem.empty() && rem.size() >= b.size()) {
    const std::size_t shift = rem.size() - b.size();
    mpq_class c = rem.back() / lead;
    quot[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) rem[shift + j] -= c * b[j];
    rem.pop_back();
    trim(rem);
  }
  trim(quot);
}

QPoly mod(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

QPoly ext_gcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t) {
  QPoly r0 = a, r1 = b;
  trim(r0);
  trim(r1);
  QPoly s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    QPoly q, r;
    divmod(r0, r1, q, r);
    QPoly s2 = sub(s0, mul(q, s1));
    QPoly t2 = sub(t0, mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (!r0.empty()) {
    mpq_class lead = r0.back();
    for (auto& c : r0) c /= lead;
    for (auto& c : s0) c /= lead;
    for (auto& c : t0) c /= lead;
  }
  s = std::move(s0);
  t = std::move(t0);
  return r0;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace qpoly

namespace {

using ZPoly = std::vector<mpz_class>;

// Scales a rational polynomial to a primitive integer polynomial.
ZPoly primitive_integer(const QPoly& f) {
  mpz_class den = 1;
  for (const auto& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z(f.size());
  mpz_class g = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpq_class v = f[i] * den;
    z[i] = v.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& c : z) c /= g;
  return z;
}

mpz_class zeval(const ZPoly& p, long x) {
  mpz_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<mpz_class> positive_divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, int>> fac;
  for (mpz_class p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    fac.emplace_back(p, e);
  }
  if (n > 1) fac.emplace_back(n, 1);
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : fac) {
    const std::size_t base = divs.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

bool has_rational_root(const ZPoly& f) {
  if (sgn(f.front()) == 0) return true;
  const auto num = positive_divisors(f.front());
  const auto den = positive_divisors(f.back());
  QPoly fq(f.begin(), f.end());
  for (const auto& p : num)
    for (const auto& q : den)
      for (int s : {1, -1}) {
        mpq_class r(p * s, q);
        r.canonicalize();
        if (sgn(qpoly::eval(fq, r)) == 0) return true;
      }
  return false;
}

// Kronecker search for an integer factor of degree k.
bool has_factor_of_degree(const ZPoly& f, int k) {
  struct Point {
    long x;
    std::vector<mpz_class> divisors;
  };
  std::vector<Point> candidates;
  for (long x = -24; x <= 24; ++x) {
    mpz_class v = zeval(f, x);
    if (sgn(v) == 0) return true;
    candidates.push_back({x, positive_divisors(v)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Point& a, const Point& b) {
                     return a.divisors.size() < b.divisors.size();
                   });
  candidates.resize(static_cast<std::size_t>(k) + 1);

  const QPoly fq(f.begin(), f.end());
  std::vector<mpq_class> values(candidates.size());

  // Lagrange interpolation through (x_j, values_j).
  auto interpolate = [&]() {
    QPoly acc;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      QPoly basis{1};
      mpq_class denom = 1;
      for (std::size_t m = 0; m < candidates.size(); ++m) {
        if (m == j) continue;
        basis = qpoly::mul(basis, QPoly{mpq_class(-candidates[m].x), 1});
        denom *= candidates[j].x - candidates[m].x;
      }
      mpq_class scale = values[j] / denom;
      for (auto& c : basis) c *= scale;
      acc = qpoly::add(acc, basis);
    }
    return acc;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t j) -> bool {
    if (j == candidates.size()) {
      QPoly g = interpolate();
      if (qpoly::degree(g) != k) return false;
      for (const auto& c : g)
        if (c.get_den() != 1) return false;
      return qpoly::mod(fq, g).empty();
    }
    for (const auto& d : candidates[j].divisors) {
      for (int s : {1, -1}) {
        // A factor and its negative are interchangeable; fix the first sign.
        if (j == 0 && s < 0) continue;
        values[j] = mpq_class(d * s);
        if (search(j + 1)) return true;
      }
    }
    return false;
  };
  return search(0);
}

}  // namespace

bool is_irreducible_over_q(const QPoly& f_in) {
  QPoly f = f_in;
  qpoly::trim(f);
  const int n = qpoly::degree(f);
  if (n < 1) return false;
  if (n > kMaxFieldDegree)
    throw DomainError("irreducibility check limited to degree " +
                      std::to_string(kMaxFieldDegree));
  if (n == 1) return true;
  ZPoly z = primitive_integer(f);
  if (has_rational_root(z)) return false;
  for (int k = 2; k <= n / 2; ++k)
    if (has_factor_of_degree(z, k)) return false;
  return true;
}

std::shared_ptr<const NumberField> NumberField::make(QPoly minpoly,
                                                     std::string generator) {
  qpoly::trim(minpoly);
  if (minpoly.size() < 2)
    throw DomainError("defining polynomial must have degree >= 1");
  if (minpoly.back() != 1)
    throw DomainError("defining polynomial must be monic");
  if (qpoly::degree(minpoly) > kMaxFieldDegree)
    throw DomainError("defining polynomial degree " +
                      std::to_string(qpoly::degree(minpoly)) +
                      " exceeds the supported bound " +
                      std::to_string(kMaxFieldDegree));
  if (!is_irreducible_over_q(minpoly))
    throw DomainError("defining polynomial is reducible over Q");
  return std::shared_ptr<const NumberField>(
      new NumberField(std::move(minpoly), std::move(generator)));
}

FieldElem::FieldElem(QPoly coords, FieldPtr field)
    : coeffs_(std::move(coords)), field_(std::move(field)) {
  normalize();
}

FieldElem FieldElem::generator(const FieldPtr& field) {
  if (!field) throw DomainError("generator of Q requested");
  return FieldElem(QPoly{0, 1}, field);
}

void FieldElem::normalize() {
  qpoly::trim(coeffs_);
  if (field_ && static_cast<int>(coeffs_.size()) > field_->degree())
    coeffs_ = qpoly::mod(coeffs_, field_->minpoly());
}

void FieldElem::adopt_field(const FieldElem& o) {
  if (!o.field_) return;
  if (!field_) {
    field_ = o.field_;
    return;
  }
  if (field_ != o.field_ && !(*field_ == *o.field_))
    throw DomainError("arithmetic between elements of different fields");
}

mpq_class FieldElem::rational() const {
  if (!is_rational()) throw DomainError("field element is not rational");
  return coeffs_.empty() ? mpq_class(0) : coeffs_[0];
}

FieldElem FieldElem::operator-() const {
  FieldElem r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
  adopt_field(o);
  coeffs_ = qpoly::add(coeffs_, o.coeffs_);
  return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) {
  adopt_field(o);
  coeffs_ = qpoly::sub(coeffs_, o.coeffs_);
  return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o) {
  adopt_field(o);
  coeffs_ = qpoly::mul(coeffs_, o.coeffs_);
  normalize();
  return *this;
}

FieldElem& FieldElem::operator/=(const FieldElem& o) {
  adopt_field(o);
  return *this *= o.inverse();
}

FieldElem FieldElem::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero field element");
  if (is_rational()) return FieldElem(QPoly{1 / coeffs_[0]}, field_);
  QPoly s, t;
  QPoly g = qpoly::ext_gcd(coeffs_, field_->minpoly(), s, t);
  if (g.size() != 1) throw DomainError("element is a zero divisor");
  return FieldElem(std::move(s), field_);
}

FieldElem FieldElem::pow(long e) const {
  FieldElem base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  FieldElem acc(QPoly{1}, field_);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

bool FieldElem::operator<(const FieldElem& o) const {
  if (coeffs_.size() != o.coeffs_.size()) return coeffs_.size() < o.coeffs_.size();
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    int c = cmp(coeffs_[i], o.coeffs_[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string FieldElem::to_string() const {
  if (coeffs_.empty()) return "0";
  if (coeffs_.size() == 1) return coeffs_[0].get_str();
  const std::string gen = field_ ? field_->generator() : "a";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const mpq_class& c = coeffs_[i];
    if (sgn(c) == 0) continue;
    mpq_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? "-" : "+");
    }
    first = false;
    if (i == 0) {
      out << mag.get_str();
      continue;
    }
    if (mag != 1) out << mag.get_str() << "*";
    out << gen;
    if (i > 1) out << "^" << i;
  }
  return out.str();
}

FieldElem parse_field_elem(const std::string& text, const FieldPtr& field) {
  ExprLexer lex(text);
  // expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
  // unary := '-' unary | power ; power := atom ('^' int)? ;
  // atom := number | generator | '(' expr ')'
  std::function<FieldElem()> expr;
  std::function<FieldElem()> atom = [&]() -> FieldElem {
    const Token t = lex.next();
    switch (t.kind) {
      case Token::Number:
        return FieldElem(mpq_class(mpz_class(t.text)));
      case Token::Ident:
        if (field && t.text == field->generator()) return FieldElem::generator(field);
        throw DomainError("unknown identifier '" + t.text + "' in field element '" +
                          text + "'");
      case Token::LParen: {
        FieldElem v = expr();
        lex.expect(Token::RParen);
        return v;
      }
      default:
        throw DomainError("malformed field element '" + text + "'");
    }
  };
  std::function<FieldElem()> power = [&]() {
    FieldElem base = atom();
    if (lex.peek().kind == Token::Caret) {
      lex.next();
      bool neg = false;
      if (lex.peek().kind == Token::Minus) {
        lex.next();
        neg = true;
      }
      const Token e = lex.next();
      if (e.kind != Token::Number) throw DomainError("exponent must be an integer in '" + text + "'");
      long k = std::stol(e.text);
      base = base.pow(neg ? -k : k);
    }
    return base;
  };
  std::function<FieldElem()> unary = [&]() -> FieldElem {
    if (lex.peek().kind == Token::Minus) {
      lex.next();
      return -unary();
    }
    return power();
  };
  std::function<FieldElem()> term = [&]() {
    FieldElem v = unary();
    for (;;) {
      const auto k = lex.peek().kind;
      if (k == Token::Star) {
        lex.next();
        v *= unary();
      } else if (k == Token::Slash) {
        lex.next();
        FieldElem d = unary();
        if (d.is_zero()) throw DomainError("division by zero in '" + text + "'");
        v /= d;
      } else {
        return v;
      }
    }
  };
  expr = [&]() {
    FieldElem v = term();
    for (;;) {
      const auto k = lex.peek().kind;
      if (k == Token::Plus) {
        lex.next();
        v += term();
      } else if (k == Token::Minus) {
        lex.next();
        v -= term();
      } else {
        return v;
      }
    }
  };
  FieldElem v = expr();
  if (lex.peek().kind != Token::End) throw DomainError("trailing input in field element '" + text + "'");
  if (field) v += FieldElem(QPoly{}, field);
  return v;
}

}  // namespace permot
