#pragma once

#include <optional>
#include <vector>

#include "permot/numfield/lattice.hpp"
#include "permot/periodring/scalar.hpp"

namespace permot {

// Homological triples (H_Z, H_K, omega) with omega: H_Z -> H_K (x) C, or
// cohomological triples (H_K, H_Z, eta) with eta: H_K (x) C -> H_Z (x) C.
enum class Side { Homological, Cohomological };

// One step W_weight of an increasing filtration on the free part of H_Z.
struct WeightStep {
  int weight = 0;
  Lattice lattice;
};
using WeightFiltration = std::vector<WeightStep>;

// Raw description accepted by make_triple.
struct TripleData {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;  // orders of cyclic summands of H_Z
  std::size_t k_dim = 0;
  // Homological: k_dim x free_rank.  Cohomological: free_rank x k_dim.
  ScalarMatrix matrix;
  std::optional<WeightFiltration> weights;
  std::optional<FieldMatrix> hodge;  // k_dim x h, columns span F
  Side side = Side::Homological;
  // true: the comparison must be invertible (make_triple rejects otherwise).
  bool require_iso = false;
  // Known value of the iso flag; skips the determinant (used by tensor).
  std::optional<bool> iso_hint;
};

class PeriodTriple {
 public:
  PeriodTriple() = default;

  std::size_t free_rank() const { return free_rank_; }
  std::size_t k_dim() const { return k_dim_; }
  // Canonical invariant factors of the torsion of H_Z (all > 1).
  const std::vector<mpz_class>& torsion() const { return torsion_; }
  bool is_free() const { return torsion_.empty(); }
  Side side() const { return side_; }
  // omega_C (resp. eta) is an isomorphism.
  bool iso() const { return iso_; }
  const ScalarMatrix& matrix() const { return matrix_; }
  const std::optional<WeightFiltration>& weights() const { return weights_; }
  const std::optional<FieldMatrix>& hodge() const { return hodge_; }

  // W_w as a step function: the largest stored step of weight <= w, or the
  // zero lattice.  Requires weights().
  Lattice weight_at(int w) const;

  // Equality of canonical forms (ranks, torsion, side, matrix entries);
  // filtrations are not compared.
  bool operator==(const PeriodTriple& o) const;
  bool operator!=(const PeriodTriple& o) const { return !(*this == o); }

 private:
  friend PeriodTriple make_triple(TripleData data);

  std::size_t free_rank_ = 0;
  std::size_t k_dim_ = 0;
  std::vector<mpz_class> torsion_;
  ScalarMatrix matrix_;
  std::optional<WeightFiltration> weights_;
  std::optional<FieldMatrix> hodge_;
  Side side_ = Side::Homological;
  bool iso_ = false;
};

// Validates shapes and filtrations and computes the iso flag from
// det(matrix) != 0.  Throws DimensionError / DomainError.
PeriodTriple make_triple(TripleData data);

// Z(r) = (Z, K, (2 pi i)^r) with weight -2r; cohomological side gives
// varsigma(Z(r)).  `registry` may be null only for r = 0.
PeriodTriple tate_object(int r, const RegistryPtr& registry, Side side = Side::Homological);

PeriodTriple tensor(const PeriodTriple& a, const PeriodTriple& b);
PeriodTriple dual(const PeriodTriple& h);
// `registry` supplies 2*pi*i when h has only constant entries; otherwise it
// may be null.
PeriodTriple tate_twist(const PeriodTriple& h, int r, const RegistryPtr& registry = nullptr);
// H^* = H^dual(1), comparison 2 pi i (omega^{-1})^T.
PeriodTriple cartier_dual_triple(const PeriodTriple& h, const RegistryPtr& registry = nullptr);
// (H_Z, H_K, omega) -> (H_K, H_Z, omega_C^{-1}) and its inverse.
PeriodTriple varsigma(const PeriodTriple& h);
PeriodTriple unvarsigma(const PeriodTriple& h);

// Registry shared by the entries of m, or null when every entry is a
// constant.
RegistryPtr registry_of(const ScalarMatrix& m);

}  // namespace permot
