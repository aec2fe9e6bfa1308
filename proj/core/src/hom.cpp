#include "permot/perimod/hom.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "permot/error.hpp"
#include "permot/numfield/linear_algebra.hpp"

namespace permot {

namespace {

// One linear contribution coef * unknown to an entry of the square.
struct Term {
  bool is_k;          // unknown from phi_K (else phi_Z)
  std::size_t index;  // row-major position in its matrix
  PeriodScalar coef;
};
using Entry = std::vector<Term>;

RegistryPtr common_registry(const PeriodTriple& a, const PeriodTriple& b) {
  RegistryPtr ra = registry_of(a.matrix());
  RegistryPtr rb = registry_of(b.matrix());
  if (ra && rb && ra != rb) throw SymbolError("triples use different symbol registries");
  RegistryPtr r = ra ? ra : rb;
  if (r && !r->frozen()) throw RegistryStateError("the symbol registry must be frozen before solving");
  return r;
}

FieldPtr field_of(const RegistryPtr& reg, const std::vector<const ScalarMatrix*>& mats) {
  if (reg && reg->field()) return reg->field();
  for (const auto* m : mats)
    for (const auto& s : m->data()) {
      for (const auto& [mono, c] : s.numerator().terms())
        if (c.field()) return c.field();
      for (const auto& [mono, c] : s.denominator().terms())
        if (c.field()) return c.field();
    }
  return nullptr;
}

FieldElem from_coords(QPoly coords, const FieldPtr& field) {
  if (field) return FieldElem(std::move(coords), field);
  return coords.empty() ? FieldElem(0) : FieldElem(coords[0]);
}

// The square as entries sum(coef * unknown) = 0.
std::vector<Entry> square_entries(const PeriodTriple& s, const PeriodTriple& t) {
  const std::size_t m = s.free_rank(), mp = t.free_rank(), k = s.k_dim(), kp = t.k_dim();
  std::vector<Entry> out;
  if (s.side() == Side::Homological) {
    // omega' X - C omega, entry (i, j) with i < k', j < m.
    for (std::size_t i = 0; i < kp; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Entry e;
        for (std::size_t p = 0; p < mp; ++p)
          if (!t.matrix()(i, p).is_zero()) e.push_back({false, p * m + j, t.matrix()(i, p)});
        for (std::size_t q = 0; q < k; ++q)
          if (!s.matrix()(q, j).is_zero()) e.push_back({true, i * k + q, -s.matrix()(q, j)});
        out.push_back(std::move(e));
      }
  } else {
    // X eta - eta' C, entry (i, j) with i < m', j < k.
    for (std::size_t i = 0; i < mp; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Entry e;
        for (std::size_t p = 0; p < m; ++p)
          if (!s.matrix()(p, j).is_zero()) e.push_back({false, i * m + p, s.matrix()(p, j)});
        for (std::size_t q = 0; q < kp; ++q)
          if (!t.matrix()(i, q).is_zero()) e.push_back({true, q * k + j, -t.matrix()(i, q)});
        out.push_back(std::move(e));
      }
  }
  return out;
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  const Polynomial g = polynomial_gcd(a, b);
  Polynomial q;
  if (!a.divide_exact(g, q)) throw Error("internal: gcd does not divide its argument");
  return q * b;
}

// Q-matrix of the system: unknowns are the m'm entries of X followed by the
// d rational coordinates of each of the k'k entries of C.
QMatrix build_system(const std::vector<Entry>& entries, const RegistryPtr& reg, const FieldPtr& field,
                     std::size_t nx, std::size_t nk) {
  const std::size_t d = field ? static_cast<std::size_t>(field->degree()) : 1;
  Polynomial den(1);
  for (const auto& e : entries)
    for (const auto& t : e) den = lcm(den, t.coef.denominator());

  std::vector<FieldElem> alpha_pow(d, FieldElem(1));
  for (std::size_t i = 1; i < d; ++i) alpha_pow[i] = alpha_pow[i - 1] * FieldElem::generator(field);

  std::map<std::tuple<std::size_t, Monomial, std::size_t>, std::size_t> row_of;
  std::vector<std::map<std::size_t, mpq_class>> rows;
  auto add = [&](std::size_t entry, const Monomial& mono, const FieldElem& value, std::size_t col) {
    const QPoly& c = value.coords();
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (c[t] == 0) continue;
      auto [it, fresh] = row_of.try_emplace({entry, mono, t}, rows.size());
      if (fresh) rows.emplace_back();
      rows[it->second][col] += c[t];
    }
  };
  for (std::size_t ei = 0; ei < entries.size(); ++ei)
    for (const auto& term : entries[ei]) {
      Polynomial cofactor;
      if (!den.divide_exact(term.coef.denominator(), cofactor)) throw Error("internal: bad common denominator");
      Polynomial p = term.coef.numerator() * cofactor;
      if (reg) p = reg->normal_form(p);
      for (const auto& [mono, c] : p.terms()) {
        if (!term.is_k) {
          add(ei, mono, c, term.index);
        } else {
          for (std::size_t t = 0; t < d; ++t) add(ei, mono, c * alpha_pow[t], nx + term.index * d + t);
        }
      }
    }
  QMatrix a(rows.size(), nx + nk * d);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [col, v] : rows[r]) a(r, col) = v;
  return a;
}

std::vector<mpz_class> vectorize(const IntMatrix& x) { return x.data(); }

IntMatrix to_integer(const QMatrix& q) {
  IntMatrix out(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (q(i, j).get_den() != 1) throw Error("internal: expected an integral matrix");
      out(i, j) = q(i, j).get_num();
    }
  return out;
}

std::vector<mpz_class> torsion_of_hom(const PeriodTriple& s, const PeriodTriple& t) {
  std::vector<mpz_class> orders;
  for (const auto& tp : t.torsion()) {
    for (std::size_t i = 0; i < s.free_rank(); ++i) orders.push_back(tp);
    for (const auto& ts : s.torsion()) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), tp.get_mpz_t(), ts.get_mpz_t());
      orders.push_back(g);
    }
  }
  return invariant_factors_of_cyclic_sum(orders);
}

TripleMorphism combine(const HomLattice& h, const std::vector<mpq_class>& lambda, const PeriodTriple& s,
                       const PeriodTriple& t) {
  TripleMorphism f = zero_morphism(s, t);
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] == 0) continue;
    const auto& g = h.generators[j];
    for (std::size_t a = 0; a < f.phi_z.rows(); ++a)
      for (std::size_t b = 0; b < f.phi_z.cols(); ++b) {
        const mpq_class v = lambda[j] * g.phi_z(a, b);
        f.phi_z(a, b) += v.get_num();
      }
    f.phi_k += g.phi_k.scaled(FieldElem(lambda[j]));
  }
  return f;
}

}  // namespace

HomLattice hom_group(const PeriodTriple& source, const PeriodTriple& target) {
  if (source.side() != target.side()) throw DomainError("Hom between triples on different sides");
  if (!source.iso()) throw DomainError("Hom solver needs a source with invertible comparison map");
  const RegistryPtr reg = common_registry(source, target);
  const FieldPtr field = field_of(reg, {&source.matrix(), &target.matrix()});
  const std::size_t m = source.free_rank(), mp = target.free_rank();
  const std::size_t k = source.k_dim(), kp = target.k_dim();
  const std::size_t nx = m * mp, nk = k * kp;
  const std::size_t d = field ? static_cast<std::size_t>(field->degree()) : 1;

  HomLattice out;
  out.torsion = torsion_of_hom(source, target);
  out.lattice = Lattice(nx);
  if (nx == 0) return out;

  const QMatrix system = build_system(square_entries(source, target), reg, field, nx, nk);
  const QMatrix kernel = system.rows() ? kernel_basis(system) : QMatrix::identity(nx + nk * d);
  if (kernel.cols() == 0) return out;
  const QMatrix wx = kernel.block(0, 0, nx, kernel.cols());
  const QMatrix wk = kernel.block(nx, 0, nk * d, kernel.cols());
  out.lattice = saturate(wx);

  for (std::size_t g = 0; g < out.lattice.rank(); ++g) {
    const auto v = out.lattice.basis_vector(g);
    QMatrix rhs(nx, 1);
    for (std::size_t i = 0; i < nx; ++i) rhs(i, 0) = v[i];
    const auto sol = exact_solve(wx, rhs);
    if (!sol) throw Error("internal: saturated lattice vector outside the solution space");
    const QMatrix c = wk * sol->particular;
    TripleMorphism f;
    f.phi_z = IntMatrix(mp, m);
    for (std::size_t i = 0; i < nx; ++i) f.phi_z(i / m, i % m) = v[i];
    f.phi_k = FieldMatrix(kp, k);
    for (std::size_t i = 0; i < nk; ++i) {
      QPoly coords(d);
      for (std::size_t t = 0; t < d; ++t) coords[t] = c(i * d + t, 0);
      f.phi_k(i / k, i % k) = from_coords(std::move(coords), field);
    }
    if (!is_morphism(f, source, target)) throw Error("internal: Hom generator fails the commuting square");
    out.generators.push_back(std::move(f));
  }
  return out;
}

HomLattice period_cohomology(const PeriodTriple& h) {
  return hom_group(tate_object(0, nullptr, h.side()), h);
}

bool is_morphism(const TripleMorphism& f, const PeriodTriple& s, const PeriodTriple& t) {
  if (f.phi_z.rows() != t.free_rank() || f.phi_z.cols() != s.free_rank() || f.phi_k.rows() != t.k_dim() ||
      f.phi_k.cols() != s.k_dim())
    throw DimensionError("morphism shape does not match the triples");
  if (s.side() != t.side()) throw DomainError("morphism between triples on different sides");
  const ScalarMatrix z = to_scalar(f.phi_z);
  const ScalarMatrix kk = to_scalar(f.phi_k);
  if (s.side() == Side::Homological) return t.matrix() * z == kk * s.matrix();
  return z * s.matrix() == t.matrix() * kk;
}

TripleMorphism compose(const TripleMorphism& g, const TripleMorphism& f) {
  return {g.phi_z * f.phi_z, g.phi_k * f.phi_k};
}

TripleMorphism identity_morphism(const PeriodTriple& h) {
  return {IntMatrix::identity(h.free_rank()), FieldMatrix::identity(h.k_dim())};
}

TripleMorphism zero_morphism(const PeriodTriple& s, const PeriodTriple& t) {
  return {IntMatrix(t.free_rank(), s.free_rank()), FieldMatrix(t.k_dim(), s.k_dim())};
}

std::optional<Isomorphism> find_isomorphism(const PeriodTriple& a, const PeriodTriple& b, int coefficient_bound) {
  if (a.side() != b.side() || a.free_rank() != b.free_rank() || a.k_dim() != b.k_dim() ||
      a.torsion() != b.torsion() || a.iso() != b.iso())
    return std::nullopt;
  const std::size_t m = a.free_rank();
  if (m == 0) return Isomorphism{zero_morphism(a, b), zero_morphism(b, a)};
  const HomLattice h = hom_group(a, b);
  if (h.rank() == 0) return std::nullopt;
  const QMatrix basis = to_rational(h.lattice.basis());

  auto accept = [&](const TripleMorphism& f) -> std::optional<Isomorphism> {
    const mpz_class det = integer_determinant(f.phi_z);
    if (det != 1 && det != -1) return std::nullopt;
    if (determinant(f.phi_k).is_zero()) return std::nullopt;
    TripleMorphism g{to_integer(inverse(to_rational(f.phi_z))), inverse(f.phi_k)};
    if (!is_morphism(g, b, a)) return std::nullopt;
    return Isomorphism{f, g};
  };

  // Signed permutations first; these cover the canonical identifications.
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  if (m <= 6) {
    do {
      for (unsigned long signs = 0; signs < (1ul << m); ++signs) {
        IntMatrix p(m, m);
        for (std::size_t i = 0; i < m; ++i) p(perm[i], i) = (signs >> i) & 1 ? -1 : 1;
        if (!h.lattice.contains(vectorize(p))) continue;
        QMatrix rhs(m * m, 1);
        for (std::size_t i = 0; i < m * m; ++i) rhs(i, 0) = p.data()[i];
        const auto sol = exact_solve(basis, rhs);
        std::vector<mpq_class> lambda(h.rank());
        for (std::size_t j = 0; j < h.rank(); ++j) lambda[j] = sol->particular(j, 0);
        if (auto iso = accept(combine(h, lambda, a, b))) return iso;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  constexpr std::size_t kCandidateCap = 200000;
  for (int bound = 1; bound <= coefficient_bound; ++bound) {
    std::vector<long> c(h.rank(), -bound);
    std::size_t tried = 0;
    for (;;) {
      std::vector<mpq_class> lambda(c.begin(), c.end());
      if (auto iso = accept(combine(h, lambda, a, b))) return iso;
      if (++tried >= kCandidateCap) break;
      std::size_t i = 0;
      while (i < c.size() && c[i] == bound) c[i++] = -bound;
      if (i == c.size()) break;
      ++c[i];
    }
  }
  return std::nullopt;
}

bool check_weight_preservation(const TripleMorphism& f, const PeriodTriple& s, const PeriodTriple& t) {
  if (!s.weights() || !t.weights()) throw DomainError("weight preservation needs filtrations on both triples");
  for (const auto& step : *s.weights()) {
    const Lattice target = t.weight_at(step.weight);
    const IntMatrix image = f.phi_z * step.lattice.basis();
    for (std::size_t j = 0; j < image.cols(); ++j)
      if (!target.contains(image.column(j))) return false;
  }
  return true;
}

bool check_hodge_preservation(const TripleMorphism& f, const PeriodTriple& s, const PeriodTriple& t) {
  if (!s.hodge() || !t.hodge()) throw DomainError("Hodge preservation needs Hodge subspaces on both triples");
  return column_span_contains(*t.hodge(), f.phi_k * *s.hodge());
}

BiextensionGroup biext_group(const PeriodTriple& n, const PeriodTriple& m, const RegistryPtr& registry) {
  BiextensionGroup out;
  const PeriodTriple h = tensor(dual(n), tensor(dual(m), tate_object(1, registry, n.side())));
  out.group = period_cohomology(h);
  if (n == m) {
    const std::size_t r = n.free_rank();
    // Rows: v_ii and v_ij + v_ji (i < j) on vectors indexed i r + j.
    IntMatrix sym(r * (r + 1) / 2, r * r);
    std::size_t row = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j, ++row) {
        sym(row, i * r + j) += 1;
        if (i != j) sym(row, j * r + i) += 1;
      }
    const IntMatrix& b = out.group.lattice.basis();
    if (b.cols() == 0) {
      out.alternating = Lattice(r * r);
    } else {
      const Lattice coeffs = integer_kernel(sym * b);
      out.alternating = coeffs.rank() ? Lattice::span(b * coeffs.basis()) : Lattice(r * r);
    }
  }
  return out;
}

std::string to_string(const TripleMorphism& f) {
  return "phi_Z = " + to_string(f.phi_z) + ", phi_K = " + to_string(f.phi_k);
}

}  // namespace permot
