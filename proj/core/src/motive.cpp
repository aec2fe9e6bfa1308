#include "permot/onemotive/motive.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <map>
#include <set>

#include "permot/error.hpp"
#include "permot/expr_lexer.hpp"
#include "permot/numfield/linear_algebra.hpp"

namespace permot {

namespace {

constexpr std::size_t kMaxTorsionElements = 1000000;

bool is_zero_expression(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  return t == "0";
}

FieldElem power(const FieldElem& a, const mpz_class& e) {
  if (!e.fits_slong_p()) throw DomainError("exponent too large");
  return a.pow(e.get_si());
}

mpz_class valuation(mpz_class n, const mpz_class& p) {
  mpz_class v = 0;
  if (n == 0) return v;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// Sign bit and exponents over named multiplicative generators: "p<prime>"
// for rationals, "u<index>" for declared log_unit symbols.
struct Coords {
  bool negative = false;
  std::map<std::string, mpz_class> exps;
};

Coords coords_of(const FieldElem& a, const RegistryPtr& reg) {
  if (a.is_zero()) throw DomainError("u takes the value 0, which is not in G_m");
  Coords c;
  if (a.is_rational()) {
    const mpq_class q = a.rational();
    c.negative = q < 0;
    for (const auto& p : prime_support(q)) {
      const mpz_class v = valuation(abs(q.get_num()), p) - valuation(q.get_den(), p);
      if (v != 0) c.exps["p" + p.get_str()] = v;
    }
    return c;
  }
  if (!reg) throw SymbolError("number-field value " + a.to_string() + " needs declared log_unit symbols");
  const auto mc = multiplicative_coordinates(a, *reg);
  c.negative = mc.negative;
  for (const auto& [idx, e] : mc.exponents)
    if (e != 0) c.exps["u" + std::to_string(idx)] = e;
  return c;
}

Lattice kernel_or_all(const IntMatrix& a, std::size_t cols) {
  if (a.rows() == 0) return Lattice::standard(cols);
  return integer_kernel(a);
}

Lattice project(const Lattice& l, std::size_t count) {
  if (l.rank() == 0) return Lattice(count);
  return Lattice::span(l.basis().block(0, 0, count, l.rank()));
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  const std::size_t n = a.ambient_rank();
  if (a.rank() == 0 || b.rank() == 0) return Lattice(n);
  IntMatrix joined(n, a.rank() + b.rank());
  joined.set_block(0, 0, a.basis());
  IntMatrix nb = b.basis();
  for (auto i = 0u; i < nb.rows(); ++i)
    for (auto j = 0u; j < nb.cols(); ++j) nb(i, j) = -nb(i, j);
  joined.set_block(0, a.rank(), nb);
  const Lattice k = integer_kernel(joined);
  if (k.rank() == 0) return Lattice(n);
  return Lattice::span(a.basis() * k.basis().block(0, 0, a.rank(), k.rank()));
}

// Integer rows expressing sum_j x_j coords(col_j) = 0 in G_m (exponents and
// the sign bit via a slack variable).  `columns` lists, per G_m coordinate,
// the (unknown index, coefficient sign, value) contributions.
struct Contribution {
  std::size_t unknown;
  int sign;
  FieldElem value;
};

IntMatrix multiplicative_system(const std::vector<std::vector<Contribution>>& equations, std::size_t unknowns,
                                const RegistryPtr& reg) {
  std::vector<std::vector<mpz_class>> rows;
  const std::size_t total = unknowns + equations.size();
  for (std::size_t e = 0; e < equations.size(); ++e) {
    std::map<std::string, std::vector<mpz_class>> by_key;
    std::vector<mpz_class> sign_row(total, 0);
    for (const auto& c : equations[e]) {
      const Coords co = coords_of(c.value, reg);
      for (const auto& [key, v] : co.exps) {
        auto& row = by_key.try_emplace(key, std::vector<mpz_class>(total, 0)).first->second;
        row[c.unknown] += c.sign * v;
      }
      if (co.negative) sign_row[c.unknown] += c.sign;
    }
    for (auto& [key, row] : by_key) rows.push_back(std::move(row));
    sign_row[unknowns + e] = -2;
    rows.push_back(std::move(sign_row));
  }
  IntMatrix a(rows.size(), total);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < total; ++j) a(i, j) = rows[i][j];
  return a;
}

FieldElem torus_value(const OneMotive& m, std::size_t coord, std::size_t gen) { return m.u_torus(coord, gen); }

// Subgroup L_tor cap ker u as a lattice between D Z^t and Z^t.
Lattice torsion_kernel_lattice(const OneMotive& m) {
  const std::size_t t = m.torsion_generators();
  mpz_class count = 1;
  for (const auto& d : m.lattice_torsion) count *= d;
  if (count > kMaxTorsionElements) throw DomainError("torsion subgroup of L too large to enumerate");
  IntMatrix gens = IntMatrix(t, t);
  for (std::size_t i = 0; i < t; ++i) gens(i, i) = m.lattice_torsion[i];
  Lattice k = Lattice::span(gens);
  std::vector<long> x(t, 0);
  for (;;) {
    std::vector<mpz_class> v(x.begin(), x.end());
    if (!k.contains(v)) {
      bool in_kernel = true;
      for (std::size_t i = 0; i < m.torus_rank && in_kernel; ++i) {
        FieldElem prod(1);
        for (std::size_t j = 0; j < t; ++j) prod *= torus_value(m, i, m.lattice_rank + j).pow(x[j]);
        in_kernel = prod.is_one();
      }
      if (in_kernel) {
        IntMatrix more(t, k.rank() + 1);
        more.set_block(0, 0, k.basis());
        for (std::size_t i = 0; i < t; ++i) more(i, k.rank()) = v[i];
        k = Lattice::span(more);
      }
    }
    std::size_t i = 0;
    while (i < t && x[i] + 1 == m.lattice_torsion[i]) x[i++] = 0;
    if (i == t) break;
    ++x[i];
  }
  return k;
}

std::vector<mpz_class> nontrivial(const std::vector<mpz_class>& divisors) {
  std::vector<mpz_class> out;
  for (const auto& d : divisors)
    if (d > 1) out.push_back(d);
  return out;
}

void add_identifiers(const std::string& expr, SymbolKind kind, SymbolRegistry& reg) {
  ExprLexer lex(expr);
  while (lex.peek().kind != Token::End) {
    const Token t = lex.next();
    if (t.kind != Token::Ident) continue;
    if (reg.find(t.text)) continue;
    if (reg.field() && t.text == reg.field()->generator()) continue;
    reg.add_symbol(kind, t.text);
  }
}

}  // namespace

void validate(const OneMotive& m) {
  const std::size_t gens = m.lattice_rank + m.torsion_generators();
  if (m.u_torus.rows() != m.torus_rank || m.u_torus.cols() != gens)
    throw DimensionError("u_torus is " + m.u_torus.shape() + " but the motive needs " +
                         std::to_string(m.torus_rank) + "x" + std::to_string(gens));
  for (const auto& v : m.u_torus.data())
    if (v.is_zero()) throw DomainError("u_torus has a zero entry, which is not in G_m");
  for (const auto& d : m.lattice_torsion)
    if (d < 2) throw DomainError("lattice torsion orders must be at least 2");
  for (std::size_t j = 0; j < m.torsion_generators(); ++j)
    for (std::size_t i = 0; i < m.torus_rank; ++i)
      if (!power(m.u_torus(i, m.lattice_rank + j), m.lattice_torsion[j]).is_one())
        throw DomainError("torsion generator " + std::to_string(j) + " of order " + m.lattice_torsion[j].get_str() +
                          " must map to a root of unity of that order");
  const std::size_t g = m.genus();
  if (m.abelian) {
    const auto& a = *m.abelian;
    if (a.period_symbols.size() != 2 * g) throw DimensionError("abelian period matrix must have 2g rows");
    for (const auto& row : a.period_symbols)
      if (row.size() != 2 * g) throw DimensionError("abelian period matrix must be 2g x 2g");
    if (a.hodge_cols.size() != g) throw DimensionError("hodge_cols must list g indices");
    std::set<std::size_t> seen;
    for (auto c : a.hodge_cols)
      if (c >= 2 * g || !seen.insert(c).second) throw DomainError("hodge_cols must be distinct indices below 2g");
  }
  if (g > 0) {
    if (m.u_abelian.size() != m.lattice_rank)
      throw DimensionError("u_abelian needs one row per free lattice generator");
    for (const auto& row : m.u_abelian)
      if (row.size() != 2 * g) throw DimensionError("u_abelian rows must have 2g entries");
  } else if (!m.u_abelian.empty() &&
             std::any_of(m.u_abelian.begin(), m.u_abelian.end(), [](const auto& r) { return !r.empty(); })) {
    throw DomainError("u_abelian given without an abelian part");
  }
  if (m.abelian_kernel && m.abelian_kernel->rows() != m.lattice_rank)
    throw DimensionError("abelian_kernel generators must have one entry per free lattice generator");
}

OneMotive lattice_motive(std::size_t rank) {
  OneMotive m;
  m.lattice_rank = rank;
  m.u_torus = FieldMatrix(0, rank);
  return m;
}

OneMotive torus_motive(std::size_t rank) {
  OneMotive m;
  m.torus_rank = rank;
  m.u_torus = FieldMatrix(rank, 0);
  return m;
}

OneMotive torus_lattice_motive(const FieldMatrix& values) {
  OneMotive m;
  m.torus_rank = values.rows();
  m.lattice_rank = values.cols();
  m.u_torus = values;
  validate(m);
  return m;
}

WeightData weight_filtration(const OneMotive& m) {
  validate(m);
  WeightData w;
  w.w2 = torus_motive(m.torus_rank);
  w.w1 = torus_motive(m.torus_rank);
  w.w1.abelian = m.abelian;
  w.w0 = m;
  const std::size_t s = m.torus_rank, g2 = 2 * m.genus(), n = s + g2 + m.lattice_rank;
  auto first = [n](std::size_t k) {
    IntMatrix b(n, k);
    for (std::size_t i = 0; i < k; ++i) b(i, i) = 1;
    return k ? Lattice::span(b) : Lattice(n);
  };
  w.lattices = {{-2, first(s)}, {-1, first(s + g2)}, {0, first(n)}};
  return w;
}

TorsionParts torsion_parts(const OneMotive& m) {
  validate(m);
  const std::size_t r = m.lattice_rank, t = m.torsion_generators(), s = m.torus_rank;
  TorsionParts out;
  if (t == 0) {
    out.tor = lattice_motive(0);
    out.fr = m;
    out.tf = m;
    return out;
  }
  const Lattice k = torsion_kernel_lattice(m);
  IntMatrix d(t, t);
  for (std::size_t i = 0; i < t; ++i) d(i, i) = m.lattice_torsion[i];
  // K = Lambda / D Z^t with Lambda = B Z^t; coordinates of D in B.
  const QMatrix c = inverse(to_rational(k.basis())) * to_rational(d);
  IntMatrix ci(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) ci(i, j) = c(i, j).get_num();
  out.tor = lattice_motive(0);
  out.tor.lattice_torsion = nontrivial(elementary_divisors(ci));
  out.tor.u_torus = FieldMatrix(0, out.tor.lattice_torsion.size());

  // F = Z^t / Lambda, generated by the columns of U^{-1} from U B V = diag.
  const SmithForm sf = snf(k.basis());
  const QMatrix uinv = inverse(to_rational(sf.u));
  out.tf = m;
  out.tf.lattice_torsion.clear();
  std::vector<std::vector<FieldElem>> tf_cols;
  for (std::size_t j = 0; j < t; ++j) {
    if (sf.d(j, j) <= 1) continue;
    out.f_invariants.push_back(sf.d(j, j));
    out.tf.lattice_torsion.push_back(sf.d(j, j));
    std::vector<FieldElem> col(s, FieldElem(1));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t l = 0; l < t; ++l) col[i] *= power(torus_value(m, i, r + l), uinv(l, j).get_num());
    tf_cols.push_back(std::move(col));
  }
  out.tf.u_torus = FieldMatrix(s, r + tf_cols.size());
  out.tf.u_torus.set_block(0, 0, m.u_torus.block(0, 0, s, r));
  for (std::size_t j = 0; j < tf_cols.size(); ++j)
    for (std::size_t i = 0; i < s; ++i) out.tf.u_torus(i, r + j) = tf_cols[j][i];

  // G / u(L_tor): characters of T trivial on the torsion image.
  long w = 1;
  for (std::size_t j = 0; j < t; ++j) {
    long order = 1;
    for (std::size_t i = 0; i < s; ++i) {
      const FieldElem z = torus_value(m, i, r + j);
      long o = 1;
      while (!z.pow(o).is_one()) ++o;
      order = std::lcm(order, o);
    }
    w = std::lcm(w, order);
  }
  IntMatrix chars(s, s);
  for (std::size_t i = 0; i < s; ++i) chars(i, i) = w;
  Lattice lambda = s ? Lattice::span(chars) : Lattice(0);
  mpz_class box = 1;
  for (std::size_t i = 0; i < s; ++i) box *= w;
  if (box > kMaxTorsionElements) throw DomainError("character search for G / u(L_tor) too large");
  std::vector<long> chi(s, 0);
  for (bool more = s > 0 && w > 1; more;) {
    bool trivial = true;
    for (std::size_t j = 0; j < t && trivial; ++j) {
      FieldElem prod(1);
      for (std::size_t i = 0; i < s; ++i) prod *= torus_value(m, i, r + j).pow(chi[i]);
      trivial = prod.is_one();
    }
    std::vector<mpz_class> v(chi.begin(), chi.end());
    if (trivial && !lambda.contains(v)) {
      IntMatrix g2(s, lambda.rank() + 1);
      g2.set_block(0, 0, lambda.basis());
      for (std::size_t i = 0; i < s; ++i) g2(i, lambda.rank()) = v[i];
      lambda = Lattice::span(g2);
    }
    std::size_t i = 0;
    while (i < s && chi[i] + 1 == w) chi[i++] = 0;
    more = i < s;
    if (more) ++chi[i];
  }
  out.fr = m;
  out.fr.lattice_torsion.clear();
  out.fr.u_torus = FieldMatrix(s, r);
  for (std::size_t kcol = 0; kcol < s; ++kcol)
    for (std::size_t j = 0; j < r; ++j) {
      FieldElem v(1);
      for (std::size_t i = 0; i < s; ++i) v *= power(torus_value(m, i, j), lambda.basis()(i, kcol));
      out.fr.u_torus(kcol, j) = v;
    }
  return out;
}

ExtensionDims universal_extension_dims(const OneMotive& m) {
  validate(m);
  if (!m.is_free()) throw DomainError("universal extension needs a free motive; use torsion_parts first");
  return {m.genus() + m.lattice_rank, m.lattice_rank + m.torus_rank + 2 * m.genus()};
}

void register_symbols(const OneMotive& m, SymbolRegistry& registry) {
  validate(m);
  for (const auto& v : m.u_torus.data())
    if (v.is_rational())
      for (const auto& p : prime_support(v.rational())) registry.add_log_prime(p);
  if (!m.abelian) return;
  for (const auto& row : m.abelian->period_symbols)
    for (const auto& e : row) add_identifiers(e, SymbolKind::AbelianPeriod, registry);
  for (const auto& row : m.u_abelian)
    for (const auto& e : row) add_identifiers(e, SymbolKind::EllipticLog, registry);
  if (m.abelian->relations.empty()) return;
  const RegistryPtr view(std::shared_ptr<const SymbolRegistry>(), &registry);
  for (const auto& [lhs, rhs] : m.abelian->relations) {
    const PeriodScalar l = parse_scalar(lhs, view);
    if (!l.is_polynomial() || !l.numerator().is_monomial() || !l.numerator().leading_coefficient().is_one())
      throw SymbolError("relation left-hand side '" + lhs + "' must be a monomial with coefficient 1");
    const PeriodScalar rr = parse_scalar(rhs, view);
    if (!rr.is_polynomial()) throw SymbolError("relation right-hand side '" + rhs + "' must be a polynomial");
    registry.add_relation(l.numerator().leading_monomial(),
                          rr.numerator().scaled(rr.denominator().leading_coefficient().inverse()));
  }
}

PeriodTriple realize_bdr(const OneMotive& m, const RegistryPtr& registry) {
  validate(m);
  if (!m.is_free()) throw DomainError("realization needs a free motive; realize torsion_parts(M).fr instead");
  if (!registry) throw SymbolError("realization needs a symbol registry");
  const std::size_t s = m.torus_rank, g = m.genus(), r = m.lattice_rank, n = s + 2 * g + r;
  ScalarMatrix omega(n, n);
  const PeriodScalar two_pi_i = PeriodScalar::two_pi_i(registry);
  for (std::size_t i = 0; i < s; ++i) omega(i, i) = two_pi_i;
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = 0; j < 2 * g; ++j)
      omega(s + i, s + j) = parse_scalar(m.abelian->period_symbols[i][j], registry);
  for (std::size_t j = 0; j < r; ++j) {
    const std::size_t col = s + 2 * g + j;
    for (std::size_t i = 0; i < s; ++i) omega(i, col) = log_decompose(m.u_torus(i, j), registry);
    for (std::size_t i = 0; i < 2 * g; ++i) omega(s + i, col) = parse_scalar(m.u_abelian[j][i], registry);
    omega(col, col) = PeriodScalar(1);
  }
  TripleData d;
  d.free_rank = d.k_dim = n;
  d.matrix = std::move(omega);
  d.weights = weight_filtration(m).lattices;
  FieldMatrix hodge(n, g + r);
  for (std::size_t c = 0; c < g; ++c) hodge(s + m.abelian->hodge_cols[c], c) = 1;
  for (std::size_t j = 0; j < r; ++j) hodge(s + 2 * g + j, g + j) = 1;
  d.hodge = std::move(hodge);
  d.require_iso = true;
  return make_triple(std::move(d));
}

OneMotive cartier_dual_motive(const OneMotive& m) {
  validate(m);
  if (!m.is_free()) throw DomainError("Cartier dual of a motive with torsion is not supported");
  if (!m.is_torus_lattice())
    throw DomainError("Cartier dual of a motive with abelian part is only available on triples");
  return torus_lattice_motive(m.u_torus.transpose());
}

PeriodTriple realize_drb(const OneMotive& m, const RegistryPtr& registry) {
  if (m.is_torus_lattice()) return varsigma(realize_bdr(cartier_dual_motive(m), registry));
  return varsigma(cartier_dual_triple(realize_bdr(m, registry), registry));
}

bool is_motive_morphism(const MotiveMorphism& h, const OneMotive& m, const OneMotive& n) {
  if (!m.is_free() || !n.is_free() || !m.is_torus_lattice() || !n.is_torus_lattice())
    throw DomainError("motive morphisms are only checked between free torus-lattice motives");
  if (h.f.rows() != n.lattice_rank || h.f.cols() != m.lattice_rank || h.g.rows() != n.torus_rank ||
      h.g.cols() != m.torus_rank)
    throw DimensionError("motive morphism shape does not match the motives");
  for (std::size_t k = 0; k < n.torus_rank; ++k)
    for (std::size_t j = 0; j < m.lattice_rank; ++j) {
      FieldElem lhs(1), rhs(1);
      for (std::size_t i = 0; i < m.torus_rank; ++i) lhs *= power(m.u_torus(i, j), h.g(k, i));
      for (std::size_t l = 0; l < n.lattice_rank; ++l) rhs *= power(n.u_torus(k, l), h.f(l, j));
      if (lhs != rhs) return false;
    }
  return true;
}

MotiveMorphism compose(const MotiveMorphism& b, const MotiveMorphism& a) { return {b.f * a.f, b.g * a.g}; }

MotiveHomLattice hom_motives(const OneMotive& m, const OneMotive& n, const RegistryPtr& registry) {
  validate(m);
  validate(n);
  if (!m.is_free() || !n.is_free() || !m.is_torus_lattice() || !n.is_torus_lattice())
    throw DomainError("hom_motives needs free motives without abelian part");
  const std::size_t rm = m.lattice_rank, rn = n.lattice_rank, sm = m.torus_rank, sn = n.torus_rank;
  const std::size_t nf = rn * rm, ng = sn * sm;
  // One G_m equation per (k, j): prod_i a_ij^{g_ki} = prod_l b_kl^{f_lj}.
  std::vector<std::vector<Contribution>> eqs;
  for (std::size_t k = 0; k < sn; ++k)
    for (std::size_t j = 0; j < rm; ++j) {
      std::vector<Contribution> e;
      for (std::size_t i = 0; i < sm; ++i) e.push_back({nf + k * sm + i, 1, m.u_torus(i, j)});
      for (std::size_t l = 0; l < rn; ++l) e.push_back({l * rm + j, -1, n.u_torus(k, l)});
      eqs.push_back(std::move(e));
    }
  MotiveHomLattice out;
  const IntMatrix a = multiplicative_system(eqs, nf + ng, registry);
  out.lattice = project(kernel_or_all(a, nf + ng + eqs.size()), nf + ng);
  for (std::size_t c = 0; c < out.lattice.rank(); ++c) {
    const auto v = out.lattice.basis_vector(c);
    MotiveMorphism h{IntMatrix(rn, rm), IntMatrix(sn, sm)};
    for (std::size_t i = 0; i < nf; ++i) h.f(i / rm, i % rm) = v[i];
    for (std::size_t i = 0; i < ng; ++i) h.g(i / sm, i % sm) = v[nf + i];
    if (!is_motive_morphism(h, m, n)) throw Error("internal: hom_motives generator fails the square");
    out.generators.push_back(std::move(h));
  }
  return out;
}

TripleMorphism realize_morphism(const MotiveMorphism& h, const OneMotive& m, const OneMotive& n,
                                const RegistryPtr& registry) {
  if (!is_motive_morphism(h, m, n)) throw DomainError("(f, g) is not a morphism of motives");
  const std::size_t rm = m.lattice_rank, rn = n.lattice_rank, sm = m.torus_rank, sn = n.torus_rank;
  ScalarMatrix lm(sm, rm), ln(sn, rn);
  for (std::size_t i = 0; i < sm; ++i)
    for (std::size_t j = 0; j < rm; ++j) lm(i, j) = log_decompose(m.u_torus(i, j), registry);
  for (std::size_t i = 0; i < sn; ++i)
    for (std::size_t j = 0; j < rn; ++j) ln(i, j) = log_decompose(n.u_torus(i, j), registry);
  // Lift correction K = (g Lambda_M - Lambda_N f) / (2 pi i), integral.
  const ScalarMatrix diff = to_scalar(h.g) * lm - ln * to_scalar(h.f);
  const PeriodScalar two_pi_i = PeriodScalar::two_pi_i(registry);
  TripleMorphism out{IntMatrix(sn + rn, sm + rm), FieldMatrix(sn + rn, sm + rm)};
  out.phi_z.set_block(0, 0, h.g);
  out.phi_z.set_block(sn, sm, h.f);
  for (std::size_t k = 0; k < sn; ++k)
    for (std::size_t j = 0; j < rm; ++j) {
      const auto c = (diff(k, j) / two_pi_i).constant_value();
      if (!c || !c->is_rational() || c->rational().get_den() != 1)
        throw Error("internal: lift correction is not an integer multiple of 2 pi i");
      out.phi_z(k, sm + j) = c->rational().get_num();
    }
  out.phi_k.set_block(0, 0, to_field(h.g));
  out.phi_k.set_block(sn, sm, to_field(h.f));
  return out;
}

KerU ker_u(const OneMotive& m, const RegistryPtr& registry) {
  validate(m);
  KerU out;
  OneMotive free = m;
  if (!m.is_free()) {
    const TorsionParts parts = torsion_parts(m);
    out.torsion = parts.tor.lattice_torsion;
    free = parts.fr;
  }
  const std::size_t r = free.lattice_rank, s = free.torus_rank;
  std::vector<std::vector<Contribution>> eqs;
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<Contribution> e;
    for (std::size_t j = 0; j < r; ++j) e.push_back({j, 1, free.u_torus(i, j)});
    eqs.push_back(std::move(e));
  }
  const IntMatrix a = multiplicative_system(eqs, r, registry);
  out.free_part = project(kernel_or_all(a, r + eqs.size()), r);
  const bool abelian_points =
      std::any_of(free.u_abelian.begin(), free.u_abelian.end(), [](const auto& row) {
        return std::any_of(row.begin(), row.end(), [](const std::string& e) { return !is_zero_expression(e); });
      });
  if (abelian_points) {
    if (!free.abelian_kernel)
      throw DomainError("u has nonzero abelian points; declare abelian_kernel to compute ker u");
    const Lattice ka = free.abelian_kernel->cols() ? Lattice::span(*free.abelian_kernel) : Lattice(r);
    out.free_part = intersect(out.free_part, ka);
  }
  return out;
}

}  // namespace permot
