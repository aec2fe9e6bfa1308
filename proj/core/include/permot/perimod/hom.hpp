#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permot/perimod/triple.hpp"

namespace permot {

// A pair (phi_Z, phi_K) on the free parts.  Homological square:
// omega' phi_Z = phi_K omega.  Cohomological square: phi_Z eta = eta' phi_K.
struct TripleMorphism {
  IntMatrix phi_z;    // free_rank' x free_rank
  FieldMatrix phi_k;  // k_dim' x k_dim
};

// Hom(H, H') = lattice (free-to-free maps) + finite part (maps into the
// torsion of H').  `lattice` lives in Z^{m' m} with phi_Z vectorized row by
// row; `generators` follow its HNF basis.
struct HomLattice {
  Lattice lattice;
  std::vector<TripleMorphism> generators;
  std::vector<mpz_class> torsion;  // invariant factors

  std::size_t rank() const { return lattice.rank(); }
};

// Complete Hom group under the algebraic-independence model of the symbols.
// Both triples must be on the same side, the source must have invertible
// comparison map and every registry involved must be frozen.
HomLattice hom_group(const PeriodTriple& source, const PeriodTriple& target);

// Hom(Z(0), H).
HomLattice period_cohomology(const PeriodTriple& h);

bool is_morphism(const TripleMorphism& f, const PeriodTriple& source, const PeriodTriple& target);
// g after f.
TripleMorphism compose(const TripleMorphism& g, const TripleMorphism& f);
TripleMorphism identity_morphism(const PeriodTriple& h);
TripleMorphism zero_morphism(const PeriodTriple& source, const PeriodTriple& target);

// An isomorphism H -> H' (phi_Z unimodular, phi_K invertible) with its
// inverse, found among signed permutations and then small combinations of
// the Hom lattice basis.  nullopt means none was found within the search
// bound, which does not prove non-isomorphism.
struct Isomorphism {
  TripleMorphism forward;
  TripleMorphism backward;
};
std::optional<Isomorphism> find_isomorphism(const PeriodTriple& a, const PeriodTriple& b, int coefficient_bound = 2);

// Throws DomainError when a filtration is missing.
bool check_weight_preservation(const TripleMorphism& f, const PeriodTriple& source, const PeriodTriple& target);
bool check_hodge_preservation(const TripleMorphism& f, const PeriodTriple& source, const PeriodTriple& target);

// (H_N^dual (x) H_M^dual (x) Z(1)) period cohomology.  When N and M are the
// same triple, `alternating` holds the sublattice of alternating tensors.
struct BiextensionGroup {
  HomLattice group;
  std::optional<Lattice> alternating;
};
BiextensionGroup biext_group(const PeriodTriple& n, const PeriodTriple& m, const RegistryPtr& registry);

std::string to_string(const TripleMorphism& f);

}  // namespace permot
