#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permot/perimod/hom.hpp"

namespace permot {

// Split abelian part A of G = T x A, described by formal period symbols.
struct AbelianDatum {
  std::size_t genus = 0;
  // 2g x 2g scalar expressions: rows follow the T_dr(A) basis, columns the
  // H_1(A) basis.
  std::vector<std::vector<std::string>> period_symbols;
  // Indices (into the T_dr(A) basis) spanning V(A); exactly g of them.
  std::vector<std::size_t> hodge_cols;
  // Rewrite rules "monomial -> expression", e.g. {"w1*e2", "w2*e1 + twopii"}.
  std::vector<std::pair<std::string, std::string>> relations;
};

// [u: L -> G] with L = Z^r + (torsion), G = G_m^s x A.
//
// Generators of L are ordered free first, then one per torsion invariant.
struct OneMotive {
  std::size_t lattice_rank = 0;
  std::vector<mpz_class> lattice_torsion;
  std::size_t torus_rank = 0;
  // s x (r + #torsion): u(generator j) in the i-th G_m coordinate.  Torsion
  // generators must map to roots of unity.
  FieldMatrix u_torus;
  std::optional<AbelianDatum> abelian;
  // One row of 2g elliptic-log expressions per free generator ("0" for the
  // origin).  Torsion generators map to 0 in A.
  std::vector<std::vector<std::string>> u_abelian;
  // Generators (columns, r rows) of the kernel of L_free -> A, when the
  // relations among the abelian points are known.
  std::optional<IntMatrix> abelian_kernel;

  std::size_t torsion_generators() const { return lattice_torsion.size(); }
  bool is_free() const { return lattice_torsion.empty(); }
  std::size_t genus() const { return abelian ? abelian->genus : 0; }
  bool is_torus_lattice() const { return !abelian || abelian->genus == 0; }
};

// Shape and value checks (root-of-unity condition on torsion generators,
// abelian block sizes).  Throws DimensionError / DomainError.
void validate(const OneMotive& m);

// Convenience constructors.
OneMotive lattice_motive(std::size_t rank);                     // [Z^r -> 0]
OneMotive torus_motive(std::size_t rank);                       // [0 -> G_m^s]
OneMotive torus_lattice_motive(const FieldMatrix& values);      // [Z^r -> G_m^s]

struct WeightData {
  OneMotive w2;  // [0 -> T]
  OneMotive w1;  // [0 -> G]
  OneMotive w0;  // M
  // Induced sublattices of T_Z(M) in the realization basis.
  WeightFiltration lattices;
};
WeightData weight_filtration(const OneMotive& m);

struct TorsionParts {
  OneMotive tor;  // [L_tor cap ker u -> 0]
  OneMotive fr;   // [L / L_tor -> G / u(L_tor)]
  OneMotive tf;   // [L / (L_tor cap ker u) -> G]
  std::vector<mpz_class> f_invariants;  // L_tor / (L_tor cap ker u)
};
TorsionParts torsion_parts(const OneMotive& m);

struct ExtensionDims {
  std::size_t v_dim = 0;   // dim V(M) = g + r
  std::size_t tdr_dim = 0; // r + s + 2g
};
ExtensionDims universal_extension_dims(const OneMotive& m);

// Adds every symbol the realization of m needs (log primes of u_torus
// values, abelian periods and elliptic logs, declared relations) to an
// unfrozen registry.
void register_symbols(const OneMotive& m, SymbolRegistry& registry);

// T_BdR(M) with weight and Hodge filtrations.  M must be free.
PeriodTriple realize_bdr(const OneMotive& m, const RegistryPtr& registry);

// T_dRB(M) = varsigma(T_BdR(M^*)); the Cartier dual is combinatorial for
// torus-lattice motives and taken on triples otherwise.
PeriodTriple realize_drb(const OneMotive& m, const RegistryPtr& registry);

// Torus-lattice motives only.
OneMotive cartier_dual_motive(const OneMotive& m);

// (f, g): f on free lattices (r_N x r_M), g on characters (s_N x s_M) so
// that v(f x) = g(u(x)) with g acting by monomials.
struct MotiveMorphism {
  IntMatrix f;
  IntMatrix g;
};
bool is_motive_morphism(const MotiveMorphism& h, const OneMotive& m, const OneMotive& n);
MotiveMorphism compose(const MotiveMorphism& b, const MotiveMorphism& a);

struct MotiveHomLattice {
  Lattice lattice;  // in Z^{r_N r_M + s_N s_M}: f row-major, then g
  std::vector<MotiveMorphism> generators;
  std::size_t rank() const { return lattice.rank(); }
};
// All morphisms of free torus-lattice motives, by multiplicative linear
// algebra on the values.  Number-field values are read in the log_unit
// coordinates of `registry`.
MotiveHomLattice hom_motives(const OneMotive& m, const OneMotive& n, const RegistryPtr& registry = nullptr);

// The induced morphism T_BdR(M) -> T_BdR(N) of free torus-lattice motives.
TripleMorphism realize_morphism(const MotiveMorphism& h, const OneMotive& m, const OneMotive& n,
                                const RegistryPtr& registry);

struct KerU {
  Lattice free_part;                // {n in Z^r : u(n) in u(L_tor)}
  std::vector<mpz_class> torsion;   // L_tor cap ker u
};
// Throws DomainError when abelian points are nonzero and abelian_kernel is
// not declared.
KerU ker_u(const OneMotive& m, const RegistryPtr& registry = nullptr);

}  // namespace permot
