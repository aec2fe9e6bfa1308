#include "permot/numfield/lattice.hpp"

#include <algorithm>

#include "permot/error.hpp"
#include "permot/numfield/linear_algebra.hpp"

namespace permot {

namespace {

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// col_dst -= q * col_src
void axpy_col(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
  if (sgn(q) == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

void axpy_row(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
  if (sgn(q) == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

// Replaces columns (c, k) by the unimodular combination that puts
// gcd(m(i,c), m(i,k)) in column c and zero in column k.
void gcd_combine_cols(IntMatrix& m, IntMatrix& u, std::size_t i, std::size_t c, std::size_t k) {
  const mpz_class a = m(i, c), b = m(i, k);
  if (sgn(b) == 0) return;
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  const mpz_class ag = a / g, bg = b / g;
  auto apply = [&](IntMatrix& x) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const mpz_class xc = x(r, c), xk = x(r, k);
      x(r, c) = s * xc + t * xk;
      x(r, k) = -bg * xc + ag * xk;
    }
  };
  apply(m);
  apply(u);
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HnfWithTransform hnf_with_transform(const IntMatrix& m) {
  HnfWithTransform out;
  out.h = m;
  out.u = IntMatrix::identity(m.cols());
  IntMatrix& h = out.h;
  std::size_t c = 0;
  for (std::size_t i = 0; i < h.rows() && c < h.cols(); ++i) {
    for (std::size_t k = c + 1; k < h.cols(); ++k) gcd_combine_cols(h, out.u, i, c, k);
    if (sgn(h(i, c)) == 0) continue;
    if (sgn(h(i, c)) < 0) {
      for (std::size_t r = 0; r < h.rows(); ++r) h(r, c) = -h(r, c);
      for (std::size_t r = 0; r < out.u.rows(); ++r) out.u(r, c) = -out.u(r, c);
    }
    const mpz_class p = h(i, c);
    for (std::size_t j = 0; j < c; ++j) {
      const mpz_class q = floor_div(h(i, j), p);
      axpy_col(h, j, c, q);
      axpy_col(out.u, j, c, q);
    }
    ++c;
  }
  out.rank = c;
  return out;
}

IntMatrix hnf(const IntMatrix& m) { return hnf_with_transform(m).h; }

SmithForm snf(const IntMatrix& m) {
  SmithForm out;
  out.d = m;
  out.u = IntMatrix::identity(m.rows());
  out.v = IntMatrix::identity(m.cols());
  IntMatrix& d = out.d;
  const std::size_t n = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      bool found = false;
      std::size_t pi = t, pj = t;
      mpz_class best;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
          if (sgn(d(i, j)) == 0) continue;
          mpz_class a = abs(d(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) break;
      swap_rows(d, t, pi);
      swap_rows(out.u, t, pi);
      swap_cols(d, t, pj);
      swap_cols(out.v, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        const mpz_class q = d(i, t) / d(t, t);
        axpy_row(d, i, t, q);
        axpy_row(out.u, i, t, q);
        if (sgn(d(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        const mpz_class q = d(t, j) / d(t, t);
        axpy_col(d, j, t, q);
        axpy_col(out.v, j, t, q);
        if (sgn(d(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            axpy_row(d, t, i, mpz_class(-1));
            axpy_row(out.u, t, i, mpz_class(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (sgn(d(t, t)) < 0) {
      for (std::size_t j = 0; j < d.cols(); ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < out.u.cols(); ++j) out.u(t, j) = -out.u(t, j);
    }
  }
  return out;
}

std::vector<mpz_class> elementary_divisors(const IntMatrix& m) {
  const SmithForm s = snf(m);
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (sgn(s.d(i, i)) != 0) out.push_back(s.d(i, i));
  return out;
}

std::vector<mpz_class> invariant_factors_of_cyclic_sum(const std::vector<mpz_class>& orders) {
  IntMatrix diag(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (sgn(orders[i]) <= 0) throw DomainError("cyclic group order must be positive");
    diag(i, i) = orders[i];
  }
  std::vector<mpz_class> out;
  for (const auto& d : elementary_divisors(diag))
    if (d > 1) out.push_back(d);
  return out;
}

Lattice::Lattice(std::size_t ambient_rank) : ambient_(ambient_rank), basis_(ambient_rank, 0) {}

Lattice Lattice::span(const IntMatrix& generators) {
  Lattice l;
  l.ambient_ = generators.rows();
  HnfWithTransform h = hnf_with_transform(generators);
  l.basis_ = h.h.column_range(0, h.rank);
  return l;
}

Lattice Lattice::standard(std::size_t n) { return span(IntMatrix::identity(n)); }

bool Lattice::contains(const std::vector<mpz_class>& v) const {
  if (v.size() != ambient_) throw DimensionError("lattice membership: vector of wrong length");
  // Column echelon form allows forward substitution along pivot rows.
  std::vector<mpz_class> r = v;
  std::size_t c = 0;
  for (std::size_t i = 0; i < ambient_; ++i) {
    if (c < basis_.cols() && sgn(basis_(i, c)) != 0) {
      if (r[i] % basis_(i, c) != 0) return false;
      const mpz_class q = r[i] / basis_(i, c);
      for (std::size_t k = i; k < ambient_; ++k) r[k] -= q * basis_(k, c);
      ++c;
    } else if (sgn(r[i]) != 0) {
      return false;
    }
  }
  return true;
}

bool Lattice::contains(const Lattice& sub) const {
  if (sub.ambient_ != ambient_) throw DimensionError("lattice containment in different ambient spaces");
  for (std::size_t k = 0; k < sub.rank(); ++k)
    if (!contains(sub.basis_vector(k))) return false;
  return true;
}

bool Lattice::is_saturated() const {
  for (const auto& d : elementary_divisors(basis_))
    if (d != 1) return false;
  return true;
}

Lattice integer_kernel(const IntMatrix& a) {
  const HnfWithTransform h = hnf_with_transform(a);
  return Lattice::span(h.u.column_range(h.rank, a.cols() - h.rank));
}

IntMatrix primitive_columns(const QMatrix& w) {
  IntMatrix out(w.rows(), w.cols());
  for (std::size_t j = 0; j < w.cols(); ++j) {
    mpz_class den = 1;
    for (std::size_t i = 0; i < w.rows(); ++i)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w(i, j).get_den_mpz_t());
    mpz_class content = 0;
    for (std::size_t i = 0; i < w.rows(); ++i) {
      mpq_class v = w(i, j) * den;
      out(i, j) = v.get_num();
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), out(i, j).get_mpz_t());
    }
    if (content > 1)
      for (std::size_t i = 0; i < w.rows(); ++i) out(i, j) /= content;
  }
  return out;
}

Lattice saturate(const QMatrix& w) {
  const std::size_t n = w.rows();
  if (w.cols() == 0) return Lattice(n);
  // W cap Z^n is the integer kernel of the annihilator of W.
  const QMatrix annihilator = kernel_basis(w.transpose());
  if (annihilator.cols() == 0) return Lattice::standard(n);
  return integer_kernel(primitive_columns(annihilator).transpose());
}

mpz_class integer_determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square " + m.shape() + " matrix");
  if (m.rows() == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMatrix a = m;
  const std::size_t n = a.rows();
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return 0;
      swap_rows(a, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

QMatrix to_rational(const IntMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

FieldMatrix to_field(const IntMatrix& m) {
  FieldMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = FieldElem(m(i, j));
  return q;
}

namespace {
template <class M, class F>
std::string render(const M& m, F&& cell) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += cell(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}
}  // namespace

std::string to_string(const IntMatrix& m) {
  return render(m, [](const mpz_class& x) { return x.get_str(); });
}

std::string to_string(const FieldMatrix& m) {
  return render(m, [](const FieldElem& x) { return x.to_string(); });
}

}  // namespace permot
