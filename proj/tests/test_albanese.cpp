#include <random>

#include "doctest.h"
#include "permot/albanese/curve.hpp"

using namespace permot;

namespace {

CurveModel elliptic(long a, long b, std::vector<ECPoint> punctures) {
  CurveModel c;
  c.kind = CurveModel::Kind::Elliptic;
  c.a = a;
  c.b = b;
  c.punctures = std::move(punctures);
  return c;
}

CurveModel p1(std::vector<ECPoint> punctures) {
  CurveModel c;
  c.punctures = std::move(punctures);
  return c;
}

const ECPoint O = ECPoint::at_infinity();

ECPoint pt(long x, long y) { return {x, y, false}; }

// Independent doubling via the division-free duplication formula
// x([2]P) = (x^4 - 2a x^2 - 8b x + a^2) / (4 y^2).
mpq_class doubled_x(const CurveModel& c, const ECPoint& p) {
  const mpq_class& x = p.x;
  return (x * x * x * x - 2 * c.a * x * x - 8 * c.b * x + c.a * c.a) / (4 * p.y * p.y);
}

}  // namespace

TEST_CASE("ec_add examples") {
  const CurveModel e = elliptic(0, 1, {});
  CHECK(ec_add(e, pt(2, 3), pt(2, 3)) == pt(0, 1));
  CHECK(ec_add(e, pt(2, 3), O) == pt(2, 3));
  CHECK(ec_add(e, pt(2, 3), ec_negate(pt(2, 3))).infinity);
  CHECK_THROWS_AS(ec_add(e, pt(1, 1), O), DomainError);
}

TEST_CASE("ec_order examples") {
  const CurveModel e = elliptic(0, 1, {});
  CHECK(ec_order(e, pt(2, 3)) == 6);
  CHECK(ec_order(e, O) == 1);
  CHECK(ec_order(e, pt(-1, 0)) == 2);
  const CurveModel f = elliptic(0, -2, {});
  CHECK_FALSE(ec_order(f, pt(3, 5)).has_value());
}

TEST_CASE("group law axioms on multiples of seed points") {
  const CurveModel e = elliptic(-2, 1, {});  // y^2 = x^3 - 2x + 1 has (0, 1) and (1, 0)
  const CurveModel f = elliptic(0, -2, {});
  std::mt19937 rng(11);
  for (const auto& [curve, seed] : {std::pair{e, pt(0, 1)}, std::pair{f, pt(3, 5)}}) {
    std::vector<ECPoint> pool;
    for (long n = -4; n <= 4; ++n) pool.push_back(ec_multiple(curve, n, seed));
    for (int t = 0; t < 50; ++t) {
      const ECPoint& p = pool[rng() % pool.size()];
      const ECPoint& q = pool[rng() % pool.size()];
      const ECPoint& r = pool[rng() % pool.size()];
      CHECK(ec_add(curve, ec_add(curve, p, q), r) == ec_add(curve, p, ec_add(curve, q, r)));
      CHECK(ec_add(curve, p, q) == ec_add(curve, q, p));
      CHECK(ec_add(curve, p, O) == p);
      CHECK(ec_add(curve, p, ec_negate(p)).infinity);
      CHECK(on_curve(curve, ec_add(curve, p, q)));
      if (!p.infinity && p.y != 0) CHECK(ec_add(curve, p, p).x == doubled_x(curve, p));
    }
  }
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(validate(elliptic(0, 0, {})), DomainError);
  CHECK_THROWS_AS(validate(elliptic(0, 1, {pt(1, 1)})), DomainError);
  CHECK_THROWS_AS(validate(elliptic(0, 1, {O, O})), DomainError);
  CHECK_THROWS_AS(validate(p1({pt(0, 0), pt(0, 0)})), DomainError);
  CHECK_NOTHROW(validate(p1({pt(0, 0), pt(1, 0), O})));
}

TEST_CASE("albanese_motive examples") {
  const auto a = albanese_motive(p1({pt(0, 0), pt(1, 0), O}));
  CHECK(a.lattice_rank == 2);
  CHECK(a.target_trivial);
  const auto b = albanese_motive(elliptic(0, 1, {O, pt(2, 3)}));
  CHECK(b.lattice_rank == 1);
  REQUIRE(b.images.size() == 1);
  CHECK(b.images[0] == pt(2, 3));
  CHECK(albanese_motive(elliptic(0, 1, {O})).lattice_rank == 0);
  CHECK_THROWS_AS(albanese_motive(elliptic(0, 1, {})), DomainError);
}

TEST_CASE("ker_u1_star examples") {
  const KerU1 a = ker_u1_star(p1({pt(0, 0), pt(1, 0), O}));
  CHECK(a.lattice.rank() == 2);
  CHECK(a.exact);

  const KerU1 b = ker_u1_star(elliptic(0, 1, {O, pt(2, 3)}));
  REQUIRE(b.lattice.rank() == 1);
  CHECK(b.exact);
  // 6((2,3)) - 6(O).
  CHECK(abs(b.divisors(0, 0)) == 6);
  CHECK(b.divisors(1, 0) == -b.divisors(0, 0));

  CurveModel c = elliptic(0, -2, {O, pt(3, 5)});
  c.relation_bound = 20;
  const KerU1 k = ker_u1_star(c);
  CHECK(k.lattice.rank() == 0);
  CHECK_FALSE(k.exact);
}

TEST_CASE("P1 minus S has rank |S| - 1") {
  std::vector<ECPoint> s = {O};
  for (long x = 0; x < 6; ++x) {
    s.push_back(pt(x, 0));
    CHECK(ker_u1_star(p1(s)).lattice.rank() == s.size() - 1);
  }
}

TEST_CASE("torsion punctures give bound-independent kernels") {
  // y^2 = x^3 + 1: (2, 3) order 6, (0, 1) order 3, (-1, 0) order 2.
  const std::vector<ECPoint> s = {O, pt(2, 3), pt(0, 1), pt(-1, 0)};
  CurveModel c = elliptic(0, 1, s);
  c.relation_bound = 6;
  const KerU1 small = ker_u1_star(c);
  c.relation_bound = 50;
  const KerU1 large = ker_u1_star(c);
  CHECK(small.exact);
  CHECK(small.lattice == large.lattice);
  CHECK(small.lattice.rank() == 3);
  // (0,1) = [2](2,3) and (-1,0) = [3](2,3): index 6 in Z^3.
  CHECK(abs(integer_determinant(small.lattice.basis())) == 6);
  for (std::size_t j = 0; j < small.divisors.cols(); ++j) {
    ECPoint sum = O;
    mpz_class degree = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      sum = ec_add(c, sum, ec_multiple(c, small.divisors(i, j), s[i]));
      degree += small.divisors(i, j);
    }
    CHECK(sum.infinity);
    CHECK(degree == 0);
  }
}

TEST_CASE("relation search finds relations between non-torsion points") {
  // (3, 5) and [2](3, 5) on y^2 = x^3 - 2.
  const CurveModel base = elliptic(0, -2, {});
  const ECPoint p = pt(3, 5), p2 = ec_multiple(base, 2, p);
  CurveModel c = elliptic(0, -2, {O, p, p2});
  c.relation_bound = 3;
  const KerU1 k = ker_u1_star(c);
  CHECK_FALSE(k.exact);
  REQUIRE(k.lattice.rank() == 1);
  CHECK(k.lattice.contains(std::vector<mpz_class>{2, -1}));
}

TEST_CASE("period_conjecture_report") {
  const auto rows = period_conjecture_report(p1({pt(0, 0), pt(1, 0), O}), -1, 2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rank == 0);
  CHECK(rows[1].rank == 0);
  CHECK(rows[2].rank == 2);
  CHECK(rows[3].rank == 0);
  const auto proper = period_conjecture_report(elliptic(0, 1, {}), 1, 1);
  CHECK(proper.at(0).rank == 0);
  const auto tors = period_conjecture_report(elliptic(0, 1, {O, pt(2, 3)}), 0, 1);
  CHECK(tors.at(0).rank == 0);
  CHECK(tors.at(1).rank == 1);
  CHECK(tors.at(1).exact);
}

TEST_CASE("realized Albanese motive with independent points has no periods") {
  CurveModel c = elliptic(0, -2, {O, pt(3, 5)});
  c.relation_bound = 10;
  const AlbaneseMotive alb = albanese_motive(c);
  OneMotive m = alb.motive;
  m.abelian_kernel = ker_u1_star(c).lattice.basis();
  auto reg = std::make_shared<SymbolRegistry>();
  register_symbols(m, *reg);
  reg->freeze();
  const PeriodTriple h = realize_bdr(m, reg);
  CHECK(h.iso());
  CHECK(period_cohomology(h).rank() == 0);
  CHECK(ker_u(m).free_part.rank() == 0);
}
