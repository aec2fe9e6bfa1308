#include <random>

#include "doctest.h"
#include "permot/error.hpp"
#include "permot/perimod/hom.hpp"

using namespace permot;

namespace {

RegistryPtr make_registry() {
  auto r = std::make_shared<SymbolRegistry>();
  r->add_log_prime(2);
  r->add_log_prime(3);
  r->add_log_prime(5);
  r->freeze();
  return r;
}

PeriodScalar sc(const std::string& text, const RegistryPtr& reg) { return parse_scalar(text, reg); }

PeriodTriple triple(std::size_t m, std::size_t k, ScalarMatrix omega, Side side = Side::Homological) {
  TripleData d;
  d.free_rank = m;
  d.k_dim = k;
  d.matrix = std::move(omega);
  d.side = side;
  return make_triple(std::move(d));
}

// [[2 pi i, log a], [0, 1]] with weights and the V(L) Hodge line.
PeriodTriple kummer(const std::string& log_a, const RegistryPtr& reg) {
  TripleData d;
  d.free_rank = d.k_dim = 2;
  d.matrix = ScalarMatrix{{sc("twopii", reg), sc(log_a, reg)}, {PeriodScalar(0), PeriodScalar(1)}};
  d.weights = WeightFiltration{{-2, Lattice::span(IntMatrix{{1}, {0}})}, {0, Lattice::standard(2)}};
  d.hodge = FieldMatrix{{FieldElem(0)}, {FieldElem(1)}};
  return make_triple(std::move(d));
}

ScalarMatrix scalar_matrix(std::initializer_list<std::initializer_list<const char*>> rows, const RegistryPtr& reg) {
  std::vector<std::vector<PeriodScalar>> v;
  for (const auto& r : rows) {
    v.emplace_back();
    for (const char* e : r) v.back().push_back(sc(e, reg));
  }
  ScalarMatrix m(v.size(), v.empty() ? 0 : v[0].size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v[i].size(); ++j) m(i, j) = v[i][j];
  return m;
}

PeriodTriple random_triple(std::mt19937& rng, const RegistryPtr& reg, std::size_t n) {
  static const char* pool[] = {"0", "1", "2", "-1", "twopii", "log2", "log3", "log2 + twopii", "1/2"};
  for (;;) {
    ScalarMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = sc(pool[rng() % 9], reg);
    TripleData d;
    d.free_rank = d.k_dim = n;
    d.matrix = m;
    PeriodTriple t = make_triple(std::move(d));
    if (t.iso()) return t;
  }
}

}  // namespace

TEST_CASE("make_triple") {
  const auto reg = make_registry();
  const PeriodTriple z1 = tate_object(1, reg);
  CHECK(z1.iso());
  CHECK(z1.matrix()(0, 0) == PeriodScalar::two_pi_i(reg));
  CHECK_THROWS_AS(triple(2, 2, ScalarMatrix{{PeriodScalar(1), PeriodScalar(0)}}), DimensionError);
  CHECK(triple(1, 1, scalar_matrix({{"log2"}}, reg)).iso());
  CHECK_FALSE(triple(2, 2, scalar_matrix({{"log2", "log3"}, {"2*log2", "2*log3"}}, reg)).iso());
  TripleData bad;
  bad.free_rank = bad.k_dim = 1;
  bad.matrix = ScalarMatrix(1, 1);
  bad.require_iso = true;
  CHECK_THROWS_AS(make_triple(bad), DomainError);
  TripleData unsat;
  unsat.free_rank = unsat.k_dim = 1;
  unsat.matrix = ScalarMatrix{{PeriodScalar(1)}};
  unsat.weights = WeightFiltration{{0, Lattice::span(IntMatrix{{2}})}};
  CHECK_THROWS_AS(make_triple(unsat), DomainError);
}

TEST_CASE("tensor") {
  const auto reg = make_registry();
  CHECK(tensor(tate_object(1, reg), tate_object(1, reg)) == tate_object(2, reg));
  const PeriodTriple h = kummer("log2", reg);
  CHECK(tensor(h, tate_object(0, reg)) == h);
  const PeriodTriple l2 = triple(1, 1, scalar_matrix({{"log2"}}, reg));
  CHECK(tensor(l2, tate_object(1, reg)).matrix() == scalar_matrix({{"twopii*log2"}}, reg));
  CHECK(tensor(tate_object(1, reg), tate_object(1, reg)).weights()->front().weight == -4);
}

TEST_CASE("dual") {
  const auto reg = make_registry();
  for (int r = -2; r <= 2; ++r) CHECK(dual(tate_object(r, reg)) == tate_object(-r, reg));
  CHECK(dual(triple(1, 1, scalar_matrix({{"3/4"}}, reg))).matrix() == scalar_matrix({{"4/3"}}, reg));
  const PeriodTriple h = kummer("log2", reg);
  CHECK(dual(h).matrix() == scalar_matrix({{"1/twopii", "0"}, {"-log2/twopii", "1"}}, reg));
  CHECK(dual(dual(h)) == h);
  // Weights -2 < 0 become 0 < 2 with W_0(H^dual) = ann W_{-1}(H) = <e2>.
  CHECK(dual(h).weight_at(-1).rank() == 0);
  CHECK(dual(h).weight_at(0) == Lattice::span(IntMatrix{{0}, {1}}));
  CHECK(dual(h).weight_at(1) == Lattice::span(IntMatrix{{0}, {1}}));
  CHECK(dual(h).weight_at(2) == Lattice::standard(2));
  CHECK(dual(h).weight_at(-2).rank() == 0);
}

TEST_CASE("tate_twist") {
  const auto reg = make_registry();
  CHECK(tate_twist(tate_object(0, reg), 1, reg) == tate_object(1, reg));
  CHECK(tate_twist(tate_object(1, reg), -1) == tate_object(0, reg));
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodTriple h = random_triple(rng, reg, 1 + rng() % 3);
    const int r = static_cast<int>(rng() % 5) - 2;
    CHECK(tate_twist(tate_twist(h, r, reg), -r, reg) == h);
    CHECK(dual(tate_twist(h, r, reg)) == tate_twist(dual(h), -r, reg));
  }
}

TEST_CASE("cartier_dual_triple") {
  const auto reg = make_registry();
  CHECK(cartier_dual_triple(tate_object(0, reg), reg) == tate_object(1, reg));
  CHECK(cartier_dual_triple(tate_object(1, reg)) == tate_object(0, reg));
  const PeriodTriple h = kummer("log2", reg);
  const PeriodTriple hs = cartier_dual_triple(h);
  CHECK(hs.matrix() == scalar_matrix({{"1", "0"}, {"-log2", "twopii"}}, reg));
  // Swapping both bases gives [[2 pi i, -log 2], [0, 1]].
  const PeriodTriple flipped = triple(2, 2, scalar_matrix({{"twopii", "-log2"}, {"0", "1"}}, reg));
  const auto iso = find_isomorphism(hs, flipped);
  REQUIRE(iso);
  CHECK(is_morphism(iso->forward, hs, flipped));
  CHECK(is_morphism(iso->backward, flipped, hs));
  CHECK(compose(iso->backward, iso->forward).phi_z == IntMatrix::identity(2));
  CHECK(cartier_dual_triple(hs) == h);
}

TEST_CASE("varsigma") {
  const auto reg = make_registry();
  const PeriodTriple s1 = varsigma(tate_object(1, reg));
  CHECK(s1.side() == Side::Cohomological);
  CHECK(s1.matrix()(0, 0) == sc("1/twopii", reg));
  CHECK(s1 == tate_object(1, reg, Side::Cohomological));
  CHECK(varsigma(tate_object(0, reg)) == tate_object(0, reg, Side::Cohomological));
  std::mt19937 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodTriple h = random_triple(rng, reg, 1 + rng() % 3);
    CHECK(unvarsigma(varsigma(h)) == h);
  }
  CHECK_THROWS_AS(varsigma(triple(1, 1, ScalarMatrix(1, 1))), DomainError);
}

TEST_CASE("hom_group examples") {
  const auto reg = make_registry();
  SUBCASE("Kummer 2 to Kummer 4") {
    const PeriodTriple a = kummer("log2", reg), b = kummer("2*log2", reg);
    const HomLattice h = hom_group(a, b);
    REQUIRE(h.rank() == 1);
    CHECK(h.torsion.empty());
    const auto& f = h.generators[0];
    // phi_Z fixes the G_m loop up to sign and sends the lift to half of
    // the target lift's multiple: the square forces diag(2, 1) up to sign.
    CHECK(abs(f.phi_z(0, 0)) == 2);
    CHECK(abs(f.phi_z(1, 1)) == 1);
    CHECK(f.phi_z(1, 0) == 0);
    CHECK(check_weight_preservation(f, a, b));
    CHECK(check_hodge_preservation(f, a, b));
  }
  SUBCASE("Z(0) to Z(1)") { CHECK(hom_group(tate_object(0, reg), tate_object(1, reg)).rank() == 0); }
  SUBCASE("Z(1) to Z(1)") {
    const HomLattice h = hom_group(tate_object(1, reg), tate_object(1, reg));
    REQUIRE(h.rank() == 1);
    CHECK(h.lattice.basis() == IntMatrix{{1}});
    CHECK(h.generators[0].phi_k == FieldMatrix{{FieldElem(1)}});
  }
  SUBCASE("Z(2) to a torus") {
    const PeriodTriple torus = triple(2, 2, scalar_matrix({{"twopii", "0"}, {"0", "twopii"}}, reg));
    CHECK(hom_group(tate_object(2, reg), torus).rank() == 0);
    CHECK(hom_group(tate_object(1, reg), torus).rank() == 2);
  }
  SUBCASE("side mismatch and unfrozen registry") {
    CHECK_THROWS_AS(hom_group(tate_object(0, reg), tate_object(0, reg, Side::Cohomological)), DomainError);
    auto open = std::make_shared<SymbolRegistry>();
    CHECK_THROWS_AS(hom_group(tate_object(1, open), tate_object(1, open)), RegistryStateError);
  }
  SUBCASE("torsion") {
    TripleData d;
    d.free_rank = d.k_dim = 1;
    d.matrix = ScalarMatrix{{PeriodScalar(1)}};
    d.torsion = {4};
    const PeriodTriple t4 = make_triple(d);
    d.torsion = {6};
    const PeriodTriple t6 = make_triple(d);
    const HomLattice h = hom_group(t4, t6);
    CHECK(h.rank() == 1);
    // Z -> Z/6 and Z/4 -> Z/6.
    CHECK(h.torsion == std::vector<mpz_class>{2, 6});
  }
}

TEST_CASE("cohomological hom agrees with homological") {
  const auto reg = make_registry();
  const PeriodTriple a = kummer("log2", reg), b = kummer("2*log2", reg);
  const HomLattice h = hom_group(a, b);
  const HomLattice c = hom_group(varsigma(a), varsigma(b));
  CHECK(h.lattice == c.lattice);
  for (const auto& f : c.generators) CHECK(is_morphism(f, varsigma(a), varsigma(b)));
}

TEST_CASE("period_cohomology examples") {
  const auto reg = make_registry();
  CHECK(period_cohomology(tate_object(0, reg)).rank() == 1);
  CHECK(period_cohomology(tate_object(1, reg)).rank() == 0);
  const PeriodTriple trivial = triple(2, 2, scalar_matrix({{"twopii", "0"}, {"0", "1"}}, reg));
  const HomLattice h = period_cohomology(trivial);
  REQUIRE(h.rank() == 1);
  CHECK(h.lattice.basis() == IntMatrix{{0}, {1}});
  CHECK(period_cohomology(kummer("log2", reg)).rank() == 0);
}

TEST_CASE("filtration checks") {
  const auto reg = make_registry();
  const PeriodTriple h = kummer("log3", reg);
  CHECK(check_weight_preservation(identity_morphism(h), h, h));
  CHECK(check_weight_preservation(zero_morphism(h, h), h, h));
  CHECK(check_hodge_preservation(identity_morphism(h), h, h));
  CHECK(check_hodge_preservation(zero_morphism(h, h), h, h));
  TripleMorphism swap{IntMatrix{{0, 1}, {1, 0}}, FieldMatrix{{FieldElem(0), FieldElem(1)}, {FieldElem(1), FieldElem(0)}}};
  CHECK_FALSE(check_weight_preservation(swap, h, h));
  CHECK_FALSE(check_hodge_preservation(swap, h, h));
  CHECK_THROWS_AS(check_hodge_preservation(swap, tate_object(1, reg), h), DomainError);
}

TEST_CASE("biext_group examples") {
  const auto reg = make_registry();
  const PeriodTriple gm = tate_object(1, reg);   // T_BdR([0 -> G_m])
  const PeriodTriple zl = tate_object(0, reg);   // T_BdR([Z -> 0])
  const auto b1 = biext_group(gm, gm, reg);
  CHECK(b1.group.rank() == 0);
  REQUIRE(b1.alternating);
  CHECK(b1.alternating->rank() == 0);
  CHECK(biext_group(zl, gm, reg).group.rank() == 1);
  CHECK_FALSE(biext_group(zl, gm, reg).alternating);
  CHECK(biext_group(zl, zl, reg).group.rank() == 0);
  // Z(-1)^2 as N = M: alternating part of Z^{2x2} twisted back to weight 0.
  const PeriodTriple gm2 = triple(2, 2, scalar_matrix({{"twopii", "0"}, {"0", "twopii"}}, reg));
  const auto b2 = biext_group(gm2, gm2, reg);
  CHECK(b2.group.rank() == 0);
  const PeriodTriple l2 = triple(2, 2, scalar_matrix({{"1", "0"}, {"0", "1"}}, reg));
  const auto b3 = biext_group(l2, l2, reg);
  CHECK(b3.group.rank() == 0);
  const PeriodTriple mixed = triple(2, 2, scalar_matrix({{"twopii", "0"}, {"0", "1"}}, reg));
  const auto b4 = biext_group(mixed, mixed, reg);
  // Only the (torus, lattice) and (lattice, torus) slots reach weight 0.
  CHECK(b4.group.rank() == 2);
  REQUIRE(b4.alternating);
  CHECK(b4.alternating->rank() == 1);
  CHECK(b4.alternating->basis() == IntMatrix{{0}, {1}, {-1}, {0}});
}

TEST_CASE("duality preserves Hom invariants") {
  const auto reg = make_registry();
  std::mt19937 rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    const PeriodTriple a = random_triple(rng, reg, 1 + rng() % 2);
    const PeriodTriple b = random_triple(rng, reg, 1 + rng() % 2);
    const HomLattice h = hom_group(a, b);
    const HomLattice hd = hom_group(dual(b), dual(a));
    CHECK(h.rank() == hd.rank());
    CHECK(h.torsion == hd.torsion);
    for (const auto& f : h.generators) CHECK(is_morphism(f, a, b));
  }
}

TEST_CASE("tensor is associative and unital up to reindexing") {
  const auto reg = make_registry();
  std::mt19937 rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const PeriodTriple a = random_triple(rng, reg, 1 + rng() % 2);
    const PeriodTriple b = random_triple(rng, reg, 1 + rng() % 2);
    const PeriodTriple c = random_triple(rng, reg, 1);
    const PeriodTriple l = tensor(tensor(a, b), c), r = tensor(a, tensor(b, c));
    const auto iso = find_isomorphism(l, r);
    REQUIRE(iso);
    CHECK(is_morphism(iso->backward, r, l));
    CHECK(tensor(a, tate_object(0, reg)) == a);
    CHECK(tensor(tate_object(0, reg), a) == a);
  }
}

TEST_CASE("twisting matches Hom from Z(-q)") {
  const auto reg = make_registry();
  std::mt19937 rng(35);
  for (int trial = 0; trial < 6; ++trial) {
    const PeriodTriple h = random_triple(rng, reg, 1 + rng() % 2);
    for (int q = -2; q <= 2; ++q) {
      const HomLattice lhs = period_cohomology(tate_twist(h, q, reg));
      const HomLattice rhs = hom_group(tate_object(-q, reg), h);
      CHECK(lhs.rank() == rhs.rank());
      CHECK(lhs.torsion == rhs.torsion);
    }
  }
}

TEST_CASE("Cartier dual is an involution up to isomorphism") {
  const auto reg = make_registry();
  std::mt19937 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const PeriodTriple h = random_triple(rng, reg, 1 + rng() % 3);
    const PeriodTriple back = cartier_dual_triple(cartier_dual_triple(h, reg), reg);
    const auto iso = find_isomorphism(h, back);
    REQUIRE(iso);
    CHECK(is_morphism(iso->forward, h, back));
  }
}
