#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permot/onemotive/motive.hpp"

namespace permot {

// Rational point of y^2 = x^3 + ax + b, or the point at infinity O.  On P^1
// only x is used and "infinity" is the point at infinity.
struct ECPoint {
  mpq_class x;
  mpq_class y;
  bool infinity = false;

  static ECPoint at_infinity() { return {0, 0, true}; }
  bool operator==(const ECPoint& o) const {
    return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
  }
  std::string to_string() const;
};

struct CurveModel {
  enum class Kind { P1, Elliptic };
  Kind kind = Kind::P1;
  mpq_class a;
  mpq_class b;
  std::vector<ECPoint> punctures;
  long relation_bound = 50;
};

// Discriminant, punctures on the curve and pairwise distinct, bound >= 1.
void validate(const CurveModel& c);
bool on_curve(const CurveModel& c, const ECPoint& p);

ECPoint ec_negate(const ECPoint& p);
ECPoint ec_add(const CurveModel& c, const ECPoint& p, const ECPoint& q);
ECPoint ec_multiple(const CurveModel& c, const mpz_class& n, const ECPoint& p);
// Least n <= max with [n]P = O, or nullopt ("exceeds bound").
std::optional<long> ec_order(const CurveModel& c, const ECPoint& p, long max = 12);

// RA^1(X) = [Div^0_S -> Pic^0] for X = Xbar minus S.  The lattice basis is
// (P_i) - (P_0), i >= 1.
struct AlbaneseMotive {
  std::size_t lattice_rank = 0;
  bool target_trivial = true;       // Pic^0(P^1) = 0
  IntMatrix divisor_basis;          // |S| x rank, columns are divisors
  std::vector<ECPoint> images;      // u_1^* of each basis divisor
  OneMotive motive;                 // abelian part carries fresh elliptic-log symbols
};
AlbaneseMotive albanese_motive(const CurveModel& c);

struct KerU1 {
  Lattice lattice;      // in the (P_i) - (P_0) basis
  IntMatrix divisors;   // generators written on S
  bool exact = true;    // false: relations searched only up to the bound
  long bound = 0;
};
// For P^1 the whole divisor lattice.  For elliptic curves the exact relation
// lattice when every image is torsion, else the Z-span of relations with
// coefficients in [-B, B].
KerU1 ker_u1_star(const CurveModel& c);

struct ReportRow {
  int q = 0;
  std::size_t rank = 0;
  std::string tag;
  bool exact = true;
};
std::vector<ReportRow> period_conjecture_report(const CurveModel& c, int q_min, int q_max);

}  // namespace permot
