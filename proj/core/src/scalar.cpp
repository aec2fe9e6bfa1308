#include "permot/periodring/scalar.hpp"

#include <algorithm>
#include <functional>

#include "permot/error.hpp"
#include "permot/expr_lexer.hpp"

namespace permot {

RegistryPtr PeriodScalar::join(const RegistryPtr& a, const RegistryPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  throw DomainError("period scalars from different symbol registries");
}

Polynomial PeriodScalar::nf(const Polynomial& p) const {
  return registry_ ? registry_->normal_form(p) : p;
}

PeriodScalar PeriodScalar::symbol(const RegistryPtr& registry, std::size_t index) {
  if (!registry) throw SymbolError("symbol requested without a registry");
  if (index >= registry->size()) throw SymbolError("symbol index out of range");
  return PeriodScalar(Polynomial::variable(index), Polynomial(1), registry);
}

PeriodScalar PeriodScalar::two_pi_i(const RegistryPtr& registry) {
  return symbol(registry, SymbolRegistry::kTwoPiI);
}

PeriodScalar PeriodScalar::fraction(Polynomial num, Polynomial den, RegistryPtr registry) {
  if (den.is_zero()) throw DomainError("period scalar with zero denominator");
  PeriodScalar s(std::move(num), std::move(den), std::move(registry));
  s.canonicalize();
  return s;
}

void PeriodScalar::canonicalize() {
  num_ = nf(num_);
  den_ = nf(den_);
  if (den_.is_zero()) throw DomainError("denominator vanishes modulo the declared relations (zero divisor)");
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (!den_.is_constant()) {
    const Polynomial g = polynomial_gcd(num_, den_);
    if (!g.is_constant()) {
      Polynomial n2, d2;
      num_.divide_exact(g, n2);
      den_.divide_exact(g, d2);
      num_ = nf(n2);
      den_ = nf(d2);
    }
  }
  const FieldElem lc = den_.leading_coefficient();
  if (!lc.is_one()) {
    const FieldElem inv = lc.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

std::optional<FieldElem> PeriodScalar::constant_value() const {
  if (!num_.is_constant() || !den_.is_constant()) return std::nullopt;
  return num_.constant() / den_.constant();
}

PeriodScalar PeriodScalar::operator-() const {
  PeriodScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

PeriodScalar& PeriodScalar::operator+=(const PeriodScalar& o) {
  registry_ = join(registry_, o.registry_);
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = PeriodScalar(o.num_, o.den_, registry_);
  if (den_ == o.den_) {
    num_ += o.num_;
    if (den_.is_constant()) {
      if (num_.is_zero()) den_ = Polynomial(1);
      return *this;
    }
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  canonicalize();
  return *this;
}

PeriodScalar& PeriodScalar::operator-=(const PeriodScalar& o) { return *this += -o; }

PeriodScalar& PeriodScalar::operator*=(const PeriodScalar& o) {
  registry_ = join(registry_, o.registry_);
  if (is_zero() || o.is_zero()) return *this = PeriodScalar(Polynomial(), Polynomial(1), registry_);
  const bool polynomial_product = den_.is_constant() && o.den_.is_constant();
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  if (polynomial_product) {
    num_ = nf(num_);
    return *this;
  }
  canonicalize();
  return *this;
}

PeriodScalar& PeriodScalar::operator/=(const PeriodScalar& o) { return *this *= o.inverse(); }

PeriodScalar PeriodScalar::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero period scalar");
  return fraction(den_, num_, registry_);
}

PeriodScalar PeriodScalar::pow(long e) const {
  PeriodScalar base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  PeriodScalar acc(1);
  acc.registry_ = registry_;
  while (k) {
    if (k & 1) acc *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return acc;
}

bool PeriodScalar::operator==(const PeriodScalar& o) const {
  if (num_ == o.num_ && den_ == o.den_) return true;
  const RegistryPtr reg = join(registry_, o.registry_);
  Polynomial diff = num_ * o.den_ - o.num_ * den_;
  if (reg) diff = reg->normal_form(diff);
  return diff.is_zero();
}

std::string PeriodScalar::to_string() const {
  auto fmt = [this](const Polynomial& p) {
    return registry_ ? registry_->format(p) : p.to_string([](std::size_t i) { return "x" + std::to_string(i); });
  };
  if (den_.is_constant()) return fmt(num_);
  std::string n = fmt(num_), d = fmt(den_);
  if (num_.size() > 1) n = "(" + n + ")";
  if (den_.size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

PeriodScalar normal_form(const PeriodScalar& s) {
  if (s.registry() && !s.registry()->frozen())
    throw RegistryStateError("normal_form requires a frozen registry");
  return PeriodScalar::fraction(s.numerator(), s.denominator(), s.registry());
}

MonomialCoefficients monomial_coefficients(const PeriodScalar& s) {
  if (!s.is_polynomial()) throw DomainError("monomial_coefficients of a scalar with nontrivial denominator");
  const FieldElem d = s.denominator().constant();
  MonomialCoefficients out;
  for (const auto& [m, c] : s.numerator().terms()) out.emplace(m, c / d);
  return out;
}

std::vector<mpz_class> prime_support(const mpq_class& a) {
  std::vector<mpz_class> primes;
  for (mpz_class n : {mpz_class(abs(a.get_num())), mpz_class(a.get_den())}) {
    for (mpz_class p = 2; p * p <= n && p < 1000000; ++p) {
      if (n % p != 0) continue;
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
    if (n > 1) {
      if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
        throw DomainError("cannot factor " + a.get_str() + " within the trial-division bound");
      primes.push_back(n);
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

MultiplicativeCoordinates multiplicative_coordinates(const FieldElem& a, const SymbolRegistry& registry) {
  if (a.is_zero()) throw DomainError("logarithm of zero");
  MultiplicativeCoordinates out;
  const bool over_q = !registry.field() || registry.field()->degree() == 1;
  if (over_q) {
    const mpq_class q = a.rational();
    out.negative = sgn(q) < 0;
    for (const auto& p : prime_support(q)) {
      auto idx = registry.find_log_prime(p);
      if (!idx) throw SymbolError("missing symbol log" + p.get_str() + " for the logarithm of " + q.get_str());
      mpz_class e = 0, n = abs(q.get_num()), d = q.get_den();
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      while (d % p == 0) {
        d /= p;
        --e;
      }
      out.exponents[*idx] = e;
    }
    return out;
  }
  if (a.is_one()) return out;
  if ((-a).is_one()) {
    out.negative = true;
    return out;
  }
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const Symbol& s = registry.symbol(i);
    if (s.kind != SymbolKind::LogUnit) continue;
    if (s.unit_value == a) {
      out.exponents[i] = 1;
      return out;
    }
    if (s.unit_value.inverse() == a) {
      out.exponents[i] = -1;
      return out;
    }
  }
  throw SymbolError("undeclared multiplicative generator " + a.to_string() +
                    " (declare it as a log_unit symbol)");
}

PeriodScalar log_decompose(const FieldElem& a, const RegistryPtr& registry) {
  if (!registry) throw SymbolError("log_decompose needs a symbol registry");
  const MultiplicativeCoordinates mc = multiplicative_coordinates(a, *registry);
  Polynomial p;
  for (const auto& [idx, e] : mc.exponents) p.add_term(FieldElem(e), monomial::var(idx));
  if (mc.negative) p.add_term(FieldElem(mpq_class(1, 2)), monomial::var(SymbolRegistry::kTwoPiI));
  return PeriodScalar::polynomial(std::move(p), registry);
}

PeriodScalar parse_scalar(const std::string& text, const RegistryPtr& registry) {
  ExprLexer lex(text);
  const FieldPtr field = registry ? registry->field() : nullptr;
  std::function<PeriodScalar()> expr;
  std::function<PeriodScalar()> atom = [&]() -> PeriodScalar {
    const Token t = lex.next();
    switch (t.kind) {
      case Token::Number:
        return PeriodScalar(FieldElem(mpz_class(t.text)));
      case Token::Ident: {
        if (field && t.text == field->generator()) return PeriodScalar(FieldElem::generator(field));
        if (registry)
          if (auto idx = registry->find(t.text)) return PeriodScalar::symbol(registry, *idx);
        throw SymbolError("unknown symbol '" + t.text + "' in '" + text + "'");
      }
      case Token::LParen: {
        PeriodScalar v = expr();
        lex.expect(Token::RParen);
        return v;
      }
      default:
        throw DomainError("malformed expression '" + text + "'");
    }
  };
  std::function<PeriodScalar()> power = [&]() {
    PeriodScalar base = atom();
    if (lex.peek().kind == Token::Caret) {
      lex.next();
      bool neg = false;
      if (lex.peek().kind == Token::Minus) {
        lex.next();
        neg = true;
      }
      const Token e = lex.next();
      if (e.kind != Token::Number) throw DomainError("exponent must be an integer in '" + text + "'");
      const long k = std::stol(e.text);
      base = base.pow(neg ? -k : k);
    }
    return base;
  };
  std::function<PeriodScalar()> unary = [&]() -> PeriodScalar {
    if (lex.peek().kind == Token::Minus) {
      lex.next();
      return -unary();
    }
    return power();
  };
  std::function<PeriodScalar()> term = [&]() {
    PeriodScalar v = unary();
    for (;;) {
      const auto k = lex.peek().kind;
      if (k == Token::Star) {
        lex.next();
        v *= unary();
      } else if (k == Token::Slash) {
        lex.next();
        PeriodScalar d = unary();
        if (d.is_zero()) throw DomainError("division by zero in '" + text + "'");
        v /= d;
      } else {
        return v;
      }
    }
  };
  expr = [&]() {
    PeriodScalar v = term();
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
  PeriodScalar v = expr();
  if (lex.peek().kind != Token::End) throw DomainError("trailing input in '" + text + "'");
  return v;
}

ScalarMatrix to_scalar(const FieldMatrix& m) {
  ScalarMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = PeriodScalar(m(i, j));
  return s;
}

ScalarMatrix to_scalar(const IntMatrix& m) {
  ScalarMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = PeriodScalar(FieldElem(m(i, j)));
  return s;
}

std::optional<FieldMatrix> constant_matrix(const ScalarMatrix& m) {
  FieldMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto c = m(i, j).constant_value();
      if (!c) return std::nullopt;
      out(i, j) = *c;
    }
  return out;
}

std::string to_string(const ScalarMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += m(i, j).to_string();
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace permot
