#include "permot/periodring/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "permot/error.hpp"

namespace permot {

namespace monomial {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

int degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

int exponent(const Monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

Monomial mul(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

bool divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > exponent(m, i)) return false;
  return true;
}

Monomial div(const Monomial& m, const Monomial& d) {
  Monomial r = m;
  r.resize(std::max(m.size(), d.size()), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    r[i] -= d[i];
    if (r[i] < 0) throw DomainError("monomial division is not exact");
  }
  trim(r);
  return r;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  Monomial r(std::min(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::min(a[i], b[i]);
  trim(r);
  return r;
}

Monomial var(std::size_t index, int power) {
  Monomial m(index + 1, 0);
  m[index] = power;
  trim(m);
  return m;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  const int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int ea = exponent(a, i), eb = exponent(b, i);
    if (ea != eb) return ea < eb;
  }
  return false;
}

}  // namespace monomial

Polynomial::Polynomial(const FieldElem& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::term(const FieldElem& c, Monomial m) {
  Polynomial p;
  monomial::trim(m);
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t index, int power) {
  return term(FieldElem(1), monomial::var(index, power));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

FieldElem Polynomial::constant() const { return coefficient(Monomial{}); }

int Polynomial::total_degree() const {
  return terms_.empty() ? -1 : monomial::degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(std::size_t var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial::exponent(m, var));
  return d;
}

int Polynomial::max_variable() const {
  int v = -1;
  for (const auto& [m, c] : terms_) v = std::max(v, static_cast<int>(m.size()) - 1);
  return v;
}

FieldElem Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? FieldElem() : it->second;
}

void Polynomial::add_term(const FieldElem& c, const Monomial& m) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(c, m);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(-c, m);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ca * cb, monomial::mul(ma, mb));
  return r;
}

Polynomial Polynomial::scaled(const FieldElem& c) const {
  if (c.is_zero()) return {};
  Polynomial r = *this;
  for (auto& [m, x] : r.terms_) x *= c;
  return r;
}

Polynomial Polynomial::shifted(const Monomial& s) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(monomial::mul(m, s), c);
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial acc(1), base = *this;
  while (e) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return acc;
}

bool Polynomial::divide_exact(const Polynomial& d, Polynomial& quotient) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  quotient = Polynomial();
  Polynomial rem = *this;
  const Monomial& lm = d.leading_monomial();
  const FieldElem lc_inv = d.leading_coefficient().inverse();
  while (!rem.is_zero()) {
    const Monomial& rm = rem.leading_monomial();
    if (!monomial::divides(lm, rm)) return false;
    const Monomial q = monomial::div(rm, lm);
    const FieldElem c = rem.leading_coefficient() * lc_inv;
    quotient.add_term(c, q);
    rem -= d.shifted(q).scaled(c);
  }
  return true;
}

std::vector<Polynomial> Polynomial::univariate_coefficients(std::size_t var) const {
  std::vector<Polynomial> out(static_cast<std::size_t>(std::max(degree_in(var), 0)) + 1);
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    const int e = monomial::exponent(m, var);
    if (var < rest.size()) rest[var] = 0;
    monomial::trim(rest);
    out[static_cast<std::size_t>(e)].add_term(c, rest);
  }
  return out;
}

std::string Polynomial::to_string(const std::function<std::string(std::size_t)>& name) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string coef = c.to_string();
    const bool compound = !c.is_rational();
    bool negative = false;
    if (!compound && coef[0] == '-') {
      negative = true;
      coef = coef.substr(1);
    }
    if (!first) out << (negative ? " - " : " + ");
    else if (negative) out << "-";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += name(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out << (compound ? "(" + coef + ")" : coef);
    } else if (coef == "1") {
      out << mono;
    } else {
      out << (compound ? "(" + coef + ")" : coef) << "*" << mono;
    }
  }
  return out.str();
}

namespace {

Polynomial make_monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(p.leading_coefficient().inverse());
}

Polynomial exact_quotient(const Polynomial& a, const Polynomial& d) {
  Polynomial q;
  if (!a.divide_exact(d, q)) throw DomainError("internal: expected exact polynomial division");
  return q;
}

Polynomial content_in(const Polynomial& p, std::size_t var) {
  Polynomial g;
  for (const auto& c : p.univariate_coefficients(var)) {
    if (c.is_zero()) continue;
    g = polynomial_gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial coefficient_in(const Polynomial& p, std::size_t var, int k) {
  auto cs = p.univariate_coefficients(var);
  return k < static_cast<int>(cs.size()) ? cs[static_cast<std::size_t>(k)] : Polynomial();
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
  const int db = b.degree_in(var);
  const Polynomial lcb = coefficient_in(b, var, db);
  Polynomial r = a;
  while (!r.is_zero()) {
    const int dr = r.degree_in(var);
    if (dr < db) break;
    const Polynomial lcr = coefficient_in(r, var, dr);
    r = lcb * r - (lcr * b).shifted(monomial::var(var, dr - db));
  }
  return r;
}

Polynomial primitive_part(const Polynomial& p, std::size_t var) {
  return exact_quotient(p, content_in(p, var));
}

}  // namespace

Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  // A monomial shares only monomial factors.
  if (a.is_monomial() || b.is_monomial()) {
    const Polynomial& mono = a.is_monomial() ? a : b;
    const Polynomial& other = a.is_monomial() ? b : a;
    Monomial g = mono.leading_monomial();
    for (const auto& [m, c] : other.terms()) g = monomial::gcd(g, m);
    return Polynomial::term(FieldElem(1), g);
  }
  const std::size_t var = static_cast<std::size_t>(std::max(a.max_variable(), b.max_variable()));
  const Polynomial ca = content_in(a, var), cb = content_in(b, var);
  const Polynomial c = polynomial_gcd(ca, cb);
  Polynomial pa = exact_quotient(a, ca), pb = exact_quotient(b, cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  Polynomial g(1);
  if (pb.degree_in(var) > 0) {
    for (;;) {
      Polynomial r = pseudo_remainder(pa, pb, var);
      if (r.is_zero()) {
        g = primitive_part(pb, var);
        break;
      }
      if (r.degree_in(var) == 0) break;
      pa = std::move(pb);
      pb = primitive_part(r, var);
    }
  }
  return make_monic(c * g);
}

}  // namespace permot
