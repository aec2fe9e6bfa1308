#pragma once

#include <gmpxx.h>

#include <vector>

#include "permot/numfield/matrix.hpp"

namespace permot {

// Column Hermite normal form H = M U with U unimodular.  H is in column
// echelon form: pivot rows strictly increase left to right, pivots are
// positive, entries left of a pivot in its row lie in [0, pivot), and zero
// columns come last.  The result has the shape of M and is unique for the
// column span of M.
IntMatrix hnf(const IntMatrix& m);

struct HnfWithTransform {
  IntMatrix h;
  IntMatrix u;  // unimodular, m * u == h
  std::size_t rank = 0;
};
HnfWithTransform hnf_with_transform(const IntMatrix& m);

// Smith normal form D = U M V with U, V unimodular, D diagonal with
// nonnegative entries and d_i | d_{i+1}.
struct SmithForm {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
};
SmithForm snf(const IntMatrix& m);

// Nonzero diagonal entries of the Smith form, in divisibility order.
std::vector<mpz_class> elementary_divisors(const IntMatrix& m);

// Canonical invariant factors (all > 1) of the finite abelian group
// Z/c_1 + ... + Z/c_k; zero entries are rejected, ones are dropped.
std::vector<mpz_class> invariant_factors_of_cyclic_sum(const std::vector<mpz_class>& orders);

// A full-rank sublattice of Z^n presented by a basis in column HNF.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::size_t ambient_rank);  // zero lattice

  // Z-span of the columns of `generators` (need not be independent).
  static Lattice span(const IntMatrix& generators);
  static Lattice standard(std::size_t n);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.cols(); }
  const IntMatrix& basis() const { return basis_; }
  std::vector<mpz_class> basis_vector(std::size_t k) const { return basis_.column(k); }

  bool contains(const std::vector<mpz_class>& v) const;
  bool contains(const Lattice& sub) const;
  // Saturated: L = (L tensor Q) cap Z^n.
  bool is_saturated() const;

  bool operator==(const Lattice& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

 private:
  std::size_t ambient_ = 0;
  IntMatrix basis_;
};

// Basis of {x in Z^m : A x = 0}; the result is saturated.
Lattice integer_kernel(const IntMatrix& a);

// W cap Z^n for the Q-span W of the columns of `w` (n x k).
Lattice saturate(const QMatrix& w);

// Scales each column of a rational matrix by the lcm of its denominators and
// divides out the column content.
IntMatrix primitive_columns(const QMatrix& w);

mpz_class integer_determinant(const IntMatrix& m);

}  // namespace permot
