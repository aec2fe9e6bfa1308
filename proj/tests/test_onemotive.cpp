#include <random>

#include "doctest.h"
#include "permot/numfield/linear_algebra.hpp"
#include "permot/onemotive/motive.hpp"
#include "support/modp_oracle.hpp"

using namespace permot;

namespace {

FieldMatrix values(std::initializer_list<std::initializer_list<long>> rows, std::size_t cols = 0) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : cols;
  FieldMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

OneMotive tl(std::initializer_list<std::initializer_list<long>> rows, std::size_t cols = 0) {
  return torus_lattice_motive(values(rows, cols));
}

RegistryPtr registry_for(const std::vector<OneMotive>& motives) {
  auto reg = std::make_shared<SymbolRegistry>();
  for (const auto& m : motives) register_symbols(m, *reg);
  reg->freeze();
  return reg;
}

// Free torus-lattice motives with values drawn from a small multiplicative
// pool, including -1 and fractions.
std::vector<OneMotive> motive_suite() {
  std::vector<OneMotive> out = {
      tl({{2}}),      tl({{4}}),           tl({{3}}),          tl({{1}}),        tl({{-1}}),
      tl({{-2}}),     tl({{6}}),           tl({}, 1),          torus_motive(1),  tl({{2, 4}}),
      tl({{2}, {3}}), tl({{2, 3}}),        tl({{2, 1}, {1, 3}}), tl({{-1, 2}}),  tl({{12}}),
  };
  FieldMatrix half(1, 1);
  half(0, 0) = mpq_class(1, 2);
  out.push_back(torus_lattice_motive(half));
  return out;
}

}  // namespace

TEST_CASE("weight_filtration") {
  const OneMotive m = tl({{2}});
  const WeightData w = weight_filtration(m);
  CHECK(w.w2.torus_rank == 1);
  CHECK(w.w2.lattice_rank == 0);
  CHECK(w.w1.torus_rank == 1);
  CHECK(w.w1.lattice_rank == 0);
  CHECK(w.w0.lattice_rank == 1);
  REQUIRE(w.lattices.size() == 3);
  CHECK(w.lattices[0].lattice.rank() == 1);
  CHECK(w.lattices[1].lattice.rank() == 1);
  CHECK(w.lattices[2].lattice.rank() == 2);

  const WeightData z = weight_filtration(lattice_motive(1));
  CHECK(z.w1.torus_rank == 0);
  CHECK(z.lattices[1].lattice.rank() == 0);

  OneMotive ga = torus_motive(1);
  ga.abelian = AbelianDatum{1, {{"w1", "w2"}, {"e1", "e2"}}, {0}, {}};
  const WeightData wa = weight_filtration(ga);
  CHECK(wa.lattices[0].lattice.rank() == 1);
  CHECK(wa.lattices[1].lattice.rank() - wa.lattices[0].lattice.rank() == 2);
}

TEST_CASE("torsion_parts") {
  SUBCASE("free motive") {
    const OneMotive m = tl({{2}});
    const TorsionParts p = torsion_parts(m);
    CHECK(p.tor.lattice_torsion.empty());
    CHECK(p.fr.u_torus == m.u_torus);
    CHECK(p.tf.u_torus == m.u_torus);
  }
  SUBCASE("Z/2 mapping to 0 in a trivial torus") {
    OneMotive m = lattice_motive(0);
    m.lattice_torsion = {2};
    m.u_torus = FieldMatrix(0, 1);
    const TorsionParts p = torsion_parts(m);
    CHECK(p.tor.lattice_torsion == std::vector<mpz_class>{2});
    CHECK(p.tf.lattice_torsion.empty());
    CHECK(p.tf.lattice_rank == 0);
    CHECK(p.f_invariants.empty());
  }
  SUBCASE("Z/2 onto -1") {
    OneMotive m;
    m.lattice_torsion = {2};
    m.torus_rank = 1;
    m.u_torus = values({{-1}});
    const TorsionParts p = torsion_parts(m);
    CHECK(p.tor.lattice_torsion.empty());
    CHECK(p.f_invariants == std::vector<mpz_class>{2});
    CHECK(p.fr.torus_rank == 1);
    CHECK(p.fr.lattice_rank == 0);
    CHECK(p.fr.is_free());
  }
  SUBCASE("mixed torsion with a free generator") {
    // L = Z + Z/4 with the torsion generator going to -1: kernel 2Z/4.
    OneMotive m;
    m.lattice_rank = 1;
    m.lattice_torsion = {4};
    m.torus_rank = 1;
    m.u_torus = values({{3, -1}});
    const TorsionParts p = torsion_parts(m);
    CHECK(p.tor.lattice_torsion == std::vector<mpz_class>{2});
    CHECK(p.f_invariants == std::vector<mpz_class>{2});
    // G_m / mu_2 via squaring: 3 becomes 9.
    CHECK(p.fr.u_torus(0, 0) == FieldElem(9));
  }
  SUBCASE("torsion values must be roots of unity of the right order") {
    OneMotive m;
    m.lattice_torsion = {2};
    m.torus_rank = 1;
    m.u_torus = values({{2}});
    CHECK_THROWS_AS(torsion_parts(m), DomainError);
  }
}

TEST_CASE("universal_extension_dims") {
  const auto a = universal_extension_dims(tl({{5}}));
  CHECK(a.v_dim == 1);
  CHECK(a.tdr_dim == 2);
  const auto b = universal_extension_dims(torus_motive(1));
  CHECK(b.v_dim == 0);
  CHECK(b.tdr_dim == 1);
  const auto c = universal_extension_dims(lattice_motive(2));
  CHECK(c.v_dim == 2);
  CHECK(c.tdr_dim == 2);
  OneMotive t;
  t.lattice_torsion = {3};
  t.u_torus = FieldMatrix(0, 1);
  CHECK_THROWS_AS(universal_extension_dims(t), DomainError);
}

TEST_CASE("realize_bdr examples") {
  const OneMotive gm = torus_motive(1), z2 = lattice_motive(2), k2 = tl({{2}});
  const auto reg = registry_for({gm, z2, k2});
  CHECK(realize_bdr(gm, reg).matrix() == ScalarMatrix(1, 1, PeriodScalar::two_pi_i(reg)));
  const PeriodTriple l = realize_bdr(z2, reg);
  CHECK(l.matrix() == to_scalar(IntMatrix::identity(2)));
  const PeriodTriple h = realize_bdr(k2, reg);
  CHECK(to_string(h.matrix()) == to_string(ScalarMatrix{{PeriodScalar::two_pi_i(reg), parse_scalar("log2", reg)},
                                                        {PeriodScalar(0), PeriodScalar(1)}}));
  CHECK(h.iso());
  CHECK(h.hodge()->cols() == 1);
  CHECK((*h.hodge())(1, 0) == FieldElem(1));

  OneMotive t;
  t.lattice_torsion = {2};
  t.u_torus = FieldMatrix(0, 1);
  CHECK_THROWS_AS(realize_bdr(t, reg), DomainError);

  const auto empty = std::make_shared<SymbolRegistry>();
  empty->freeze();
  CHECK_THROWS_AS(realize_bdr(tl({{3}}), empty), SymbolError);
}

TEST_CASE("realize_bdr with an abelian part") {
  OneMotive m = tl({{2}});
  m.abelian = AbelianDatum{1, {{"w1", "w2"}, {"e1", "e2"}}, {0}, {{"w1*e2", "w2*e1 + twopii"}}};
  m.u_abelian = {{"p1", "q1"}};
  auto reg = std::make_shared<SymbolRegistry>();
  register_symbols(m, *reg);
  reg->freeze();
  const PeriodTriple h = realize_bdr(m, reg);
  CHECK(h.free_rank() == 4);
  CHECK(h.iso());
  CHECK(h.hodge()->cols() == 2);
  CHECK(h.weights()->size() == 3);
  CHECK(universal_extension_dims(m).tdr_dim == 4);
  CHECK_THROWS_AS(ker_u(m), DomainError);
  m.abelian_kernel = IntMatrix(1, 0);
  CHECK(ker_u(m).free_part.rank() == 0);
}

TEST_CASE("cartier_dual_motive") {
  const OneMotive z = lattice_motive(1);
  const OneMotive zs = cartier_dual_motive(z);
  CHECK(zs.torus_rank == 1);
  CHECK(zs.lattice_rank == 0);
  const OneMotive back = cartier_dual_motive(zs);
  CHECK(back.torus_rank == 0);
  CHECK(back.lattice_rank == 1);
  const OneMotive k = tl({{5}});
  CHECK(cartier_dual_motive(k).u_torus == k.u_torus);
  OneMotive a = torus_motive(0);
  a.abelian = AbelianDatum{1, {{"w1", "w2"}, {"e1", "e2"}}, {0}, {}};
  CHECK_THROWS_AS(cartier_dual_motive(a), DomainError);
}

TEST_CASE("realize_drb examples") {
  const OneMotive z = lattice_motive(1), gm = torus_motive(1), k2 = tl({{2}});
  const auto reg = registry_for({z, gm, k2});
  const PeriodTriple a = realize_drb(z, reg);
  CHECK(a.side() == Side::Cohomological);
  CHECK(find_isomorphism(a, tate_object(1, reg, Side::Cohomological)).has_value());
  const PeriodTriple b = realize_drb(gm, reg);
  CHECK(find_isomorphism(b, tate_object(0, reg, Side::Cohomological)).has_value());
  const PeriodTriple c = realize_drb(k2, reg);
  const PeriodTriple d = varsigma(cartier_dual_triple(realize_bdr(k2, reg), reg));
  CHECK(find_isomorphism(c, d).has_value());
}

TEST_CASE("hom_motives examples") {
  const auto h24 = hom_motives(tl({{2}}), tl({{4}}));
  REQUIRE(h24.rank() == 1);
  const auto& gen = h24.generators[0];
  CHECK(abs(gen.f(0, 0)) == 1);
  CHECK(gen.g(0, 0) == 2 * gen.f(0, 0));
  CHECK(hom_motives(tl({{2}}), tl({{3}})).rank() == 0);
  const auto h = hom_motives(torus_motive(1), tl({{7}}));
  REQUIRE(h.rank() == 1);
  CHECK(abs(h.generators[0].g(0, 0)) == 1);
  // Sign constraint: g = f mod 2 between [Z -> -1] and itself.
  const auto hs = hom_motives(tl({{-1}}), tl({{-1}}));
  CHECK(hs.rank() == 2);
  CHECK(hs.lattice.contains(std::vector<mpz_class>{1, 1}));
  CHECK_FALSE(hs.lattice.contains(std::vector<mpz_class>{1, 0}));
}

TEST_CASE("hom_motives over a number field") {
  const QPoly minpoly{-2, 0, 1};
  const FieldPtr field = NumberField::make(minpoly, "s");
  const FieldElem s = FieldElem::generator(field);
  const FieldElem eps = s + FieldElem(1);
  auto reg = std::make_shared<SymbolRegistry>(field);
  reg->add_log_unit("logeps", eps);
  reg->freeze();
  FieldMatrix a(1, 1), b(1, 1);
  a(0, 0) = eps;
  b(0, 0) = eps.inverse();
  const OneMotive ma = torus_lattice_motive(a), mb = torus_lattice_motive(b);
  const auto h = hom_motives(ma, mb, reg);
  REQUIRE(h.rank() == 1);
  CHECK(h.generators[0].g(0, 0) == -h.generators[0].f(0, 0));
  CHECK_THROWS_AS(hom_motives(ma, mb), SymbolError);
  CHECK(hom_group(realize_bdr(ma, reg), realize_bdr(mb, reg)).rank() == 1);
}

TEST_CASE("ker_u examples") {
  CHECK(ker_u(tl({{2}})).free_part.rank() == 0);
  CHECK(ker_u(tl({{1}})).free_part.rank() == 1);
  const KerU k = ker_u(tl({{2, 4}}));
  REQUIRE(k.free_part.rank() == 1);
  const auto v = k.free_part.basis_vector(0);
  CHECK(abs(v[0]) == 2);
  CHECK(v[1] == -v[0] / 2);
  CHECK(ker_u(tl({{-1}})).free_part == Lattice::span(IntMatrix(1, 1, 2)));
  OneMotive t;
  t.lattice_rank = 1;
  t.lattice_torsion = {6};
  t.torus_rank = 1;
  t.u_torus = values({{5, -1}});
  CHECK(ker_u(t).torsion == std::vector<mpz_class>{3});
}

TEST_CASE("realization determinant and filtrations") {
  const auto suite = motive_suite();
  const auto reg = registry_for(suite);
  for (const auto& m : suite) {
    const PeriodTriple h = realize_bdr(m, reg);
    CHECK(h.iso());
    CHECK_FALSE(determinant(h.matrix()).is_zero());
  }
}

TEST_CASE("fullness: motive Hom equals triple Hom") {
  const auto suite = motive_suite();
  const auto reg = registry_for(suite);
  std::vector<PeriodTriple> real;
  for (const auto& m : suite) real.push_back(realize_bdr(m, reg));
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < suite.size(); ++i)
    for (std::size_t j = 0; j < suite.size(); ++j) {
      if ((i * 7 + j * 3) % 4 != 0 && i != j) continue;
      CAPTURE(i);
      CAPTURE(j);
      const auto hm = hom_motives(suite[i], suite[j]);
      const auto ht = hom_group(real[i], real[j]);
      CHECK(hm.rank() == ht.rank());
      CHECK(ht.torsion.empty());
      for (const auto& g : hm.generators) {
        const TripleMorphism t = realize_morphism(g, suite[i], suite[j], reg);
        CHECK(is_morphism(t, real[i], real[j]));
        std::vector<mpz_class> x(t.phi_z.data().begin(), t.phi_z.data().end());
        CHECK(ht.lattice.contains(x));
      }
      for (const auto& t : ht.generators) {
        CHECK(check_weight_preservation(t, real[i], real[j]));
        CHECK(check_hodge_preservation(t, real[i], real[j]));
      }
      ++pairs;
    }
  CHECK(pairs >= 20);
}

TEST_CASE("realized Hom agrees with brute force on small pairs") {
  const std::vector<OneMotive> small = {tl({{2}}), tl({{4}}), tl({{-1}}), tl({{6}}), torus_motive(1), tl({}, 1)};
  const auto reg = registry_for(small);
  for (const auto& a : small)
    for (const auto& b : small) {
      const PeriodTriple ra = realize_bdr(a, reg), rb = realize_bdr(b, reg);
      const auto brute = oracle::brute_force_hom(ra, rb, reg->size(), 4);
      const auto hm = hom_motives(a, b);
      IntMatrix gens(ra.free_rank() * rb.free_rank(), brute.size());
      for (std::size_t j = 0; j < brute.size(); ++j)
        for (std::size_t i = 0; i < gens.rows(); ++i) gens(i, j) = brute[j][i];
      CHECK(Lattice::span(gens).rank() == hm.rank());
    }
}

TEST_CASE("functoriality of realization") {
  const OneMotive a = tl({{2}}), b = tl({{4}}), c = tl({{16}});
  const auto reg = registry_for({a, b, c});
  const auto ab = hom_motives(a, b).generators.at(0);
  const auto bc = hom_motives(b, c).generators.at(0);
  const MotiveMorphism ac = compose(bc, ab);
  CHECK(is_motive_morphism(ac, a, c));
  const TripleMorphism lhs = realize_morphism(ac, a, c, reg);
  const TripleMorphism rhs = compose(realize_morphism(bc, b, c, reg), realize_morphism(ab, a, b, reg));
  CHECK(lhs.phi_z == rhs.phi_z);
  CHECK(lhs.phi_k == rhs.phi_k);

  const OneMotive n1 = tl({{-1}}), n2 = tl({{-2}});
  const auto reg2 = registry_for({n1, n2});
  for (const auto& g1 : hom_motives(n1, n1).generators)
    for (const auto& g2 : hom_motives(n1, n2).generators) {
      const TripleMorphism l = realize_morphism(compose(g2, g1), n1, n2, reg2);
      const TripleMorphism r = compose(realize_morphism(g2, n1, n2, reg2), realize_morphism(g1, n1, n1, reg2));
      CHECK(l.phi_z == r.phi_z);
    }
}

TEST_CASE("Cartier compatibility, ker u and twist vanishing over the suite") {
  const auto suite = motive_suite();
  std::vector<OneMotive> all = suite;
  for (const auto& m : suite) all.push_back(cartier_dual_motive(m));
  const auto reg = registry_for(all);
  for (const auto& m : suite) {
    const PeriodTriple h = realize_bdr(m, reg);
    CAPTURE(to_string(h.matrix()));
    CHECK(find_isomorphism(cartier_dual_triple(h, reg), realize_bdr(cartier_dual_motive(m), reg)).has_value());
    const HomLattice pc = period_cohomology(h);
    const KerU k = ker_u(m);
    CHECK(pc.rank() == k.free_part.rank());
    for (int q : {-2, 2, 3}) CHECK(hom_group(tate_object(q, reg), h).rank() == 0);
  }
}
