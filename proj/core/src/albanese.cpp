#include "permot/albanese/curve.hpp"

#include <map>

#include "permot/error.hpp"

namespace permot {

namespace {

constexpr std::size_t kMaxHalfBox = 2000000;

std::string key(const ECPoint& p) { return p.infinity ? "O" : p.x.get_str() + "," + p.y.get_str(); }

// All n in [-b, b]^k (or [0, orders) when given), visiting sum [n_i]Q_i.
template <class Visit>
void enumerate(const CurveModel& c, const std::vector<std::vector<ECPoint>>& multiples,
               const std::vector<long>& lows, Visit&& visit) {
  const std::size_t k = multiples.size();
  std::vector<std::size_t> idx(k, 0);
  std::vector<long> n(k);
  for (;;) {
    ECPoint sum = ECPoint::at_infinity();
    for (std::size_t i = 0; i < k; ++i) {
      n[i] = lows[i] + static_cast<long>(idx[i]);
      sum = ec_add(c, sum, multiples[i][idx[i]]);
    }
    visit(n, sum);
    std::size_t i = 0;
    while (i < k && idx[i] + 1 == multiples[i].size()) idx[i++] = 0;
    if (i == k) return;
    ++idx[i];
  }
}

std::vector<ECPoint> multiples_in(const CurveModel& c, const ECPoint& q, long lo, long hi) {
  std::vector<ECPoint> out;
  ECPoint cur = ec_multiple(c, lo, q);
  for (long n = lo; n <= hi; ++n) {
    out.push_back(cur);
    cur = ec_add(c, cur, q);
  }
  return out;
}

Lattice span_or_zero(const std::vector<std::vector<long>>& rels, std::size_t n) {
  if (rels.empty()) return Lattice(n);
  IntMatrix g(n, rels.size());
  for (std::size_t j = 0; j < rels.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) g(i, j) = rels[j][i];
  return Lattice::span(g);
}

}  // namespace

std::string ECPoint::to_string() const {
  if (infinity) return "O";
  return "(" + x.get_str() + "," + y.get_str() + ")";
}

bool on_curve(const CurveModel& c, const ECPoint& p) {
  if (p.infinity || c.kind == CurveModel::Kind::P1) return true;
  return p.y * p.y == p.x * p.x * p.x + c.a * p.x + c.b;
}

void validate(const CurveModel& c) {
  if (c.relation_bound < 1) throw DomainError("relation_bound must be positive");
  if (c.kind == CurveModel::Kind::Elliptic) {
    const mpq_class disc = -16 * (4 * c.a * c.a * c.a + 27 * c.b * c.b);
    if (disc == 0) throw DomainError("singular cubic: discriminant is 0");
  }
  for (std::size_t i = 0; i < c.punctures.size(); ++i) {
    if (!on_curve(c, c.punctures[i]))
      throw DomainError("puncture " + c.punctures[i].to_string() + " is not on the curve");
    for (std::size_t j = 0; j < i; ++j) {
      const bool same = c.kind == CurveModel::Kind::P1
                            ? (c.punctures[i].infinity == c.punctures[j].infinity &&
                               (c.punctures[i].infinity || c.punctures[i].x == c.punctures[j].x))
                            : c.punctures[i] == c.punctures[j];
      if (same) throw DomainError("puncture " + c.punctures[i].to_string() + " is listed twice");
    }
  }
}

ECPoint ec_negate(const ECPoint& p) {
  if (p.infinity) return p;
  return {p.x, -p.y, false};
}

ECPoint ec_add(const CurveModel& c, const ECPoint& p, const ECPoint& q) {
  if (c.kind != CurveModel::Kind::Elliptic) throw DomainError("group law needs an elliptic curve");
  if (!on_curve(c, p) || !on_curve(c, q)) throw DomainError("point not on curve");
  if (p.infinity) return q;
  if (q.infinity) return p;
  mpq_class lambda;
  if (p.x == q.x) {
    if (p.y != q.y || p.y == 0) return ECPoint::at_infinity();
    lambda = (3 * p.x * p.x + c.a) / (2 * p.y);
  } else {
    lambda = (q.y - p.y) / (q.x - p.x);
  }
  const mpq_class x3 = lambda * lambda - p.x - q.x;
  return {x3, lambda * (p.x - x3) - p.y, false};
}

ECPoint ec_multiple(const CurveModel& c, const mpz_class& n, const ECPoint& p) {
  ECPoint base = n < 0 ? ec_negate(p) : p;
  mpz_class e = abs(n);
  ECPoint acc = ECPoint::at_infinity();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = ec_add(c, acc, base);
    e >>= 1;
    if (e > 0) base = ec_add(c, base, base);
  }
  return acc;
}

std::optional<long> ec_order(const CurveModel& c, const ECPoint& p, long max) {
  ECPoint cur = p;
  for (long n = 1; n <= max; ++n) {
    if (cur.infinity) return n;
    cur = ec_add(c, cur, p);
  }
  return std::nullopt;
}

AlbaneseMotive albanese_motive(const CurveModel& c) {
  validate(c);
  if (c.punctures.empty()) throw DomainError("X is proper: no punctures, so Div^0_Y is 0");
  const std::size_t n = c.punctures.size(), r = n - 1;
  AlbaneseMotive out;
  out.lattice_rank = r;
  out.target_trivial = c.kind == CurveModel::Kind::P1;
  out.divisor_basis = IntMatrix(n, r);
  for (std::size_t i = 0; i < r; ++i) {
    out.divisor_basis(i + 1, i) = 1;
    out.divisor_basis(0, i) = -1;
  }
  if (out.target_trivial) {
    out.motive = lattice_motive(r);
    return out;
  }
  for (std::size_t i = 1; i < n; ++i)
    out.images.push_back(ec_add(c, c.punctures[i], ec_negate(c.punctures[0])));
  OneMotive m = lattice_motive(r);
  m.abelian = AbelianDatum{1, {{"om1", "om2"}, {"eta1", "eta2"}}, {0}, {{"om1*eta2", "om2*eta1 + twopii"}}};
  for (std::size_t i = 0; i < r; ++i)
    m.u_abelian.push_back({"elog" + std::to_string(i + 1), "ezeta" + std::to_string(i + 1)});
  out.motive = std::move(m);
  return out;
}

KerU1 ker_u1_star(const CurveModel& c) {
  const AlbaneseMotive alb = albanese_motive(c);
  const std::size_t r = alb.lattice_rank;
  KerU1 out;
  out.bound = c.relation_bound;
  if (alb.target_trivial) {
    out.lattice = Lattice::standard(r);
  } else {
    std::vector<std::optional<long>> orders;
    bool all_torsion = true;
    for (const auto& q : alb.images) {
      orders.push_back(ec_order(c, q));
      all_torsion = all_torsion && orders.back().has_value();
    }
    std::vector<std::vector<long>> rels;
    for (std::size_t i = 0; i < r; ++i)
      if (orders[i]) {
        std::vector<long> e(r, 0);
        e[i] = *orders[i];
        rels.push_back(std::move(e));
      }
    if (all_torsion) {
      // Exhaustive over the finite group generated by the images.
      std::vector<std::vector<ECPoint>> mult;
      for (std::size_t i = 0; i < r; ++i) mult.push_back(multiples_in(c, alb.images[i], 0, *orders[i] - 1));
      if (r > 0)
        enumerate(c, mult, std::vector<long>(r, 0), [&](const std::vector<long>& n, const ECPoint& s) {
          if (s.infinity) rels.push_back(n);
        });
    } else {
      out.exact = false;
      const long b = c.relation_bound;
      const std::size_t half = r / 2;
      double box = 1;
      for (std::size_t i = 0; i < r - half; ++i) box *= 2.0 * b + 1;
      if (box > kMaxHalfBox) throw DomainError("relation search box too large; lower relation_bound");
      std::vector<std::vector<ECPoint>> mult;
      for (const auto& q : alb.images) mult.push_back(multiples_in(c, q, -b, b));
      std::map<std::string, std::vector<std::vector<long>>> table;
      const std::vector<std::vector<ECPoint>> first(mult.begin(), mult.begin() + half),
          second(mult.begin() + half, mult.end());
      if (half > 0)
        enumerate(c, first, std::vector<long>(half, -b),
                  [&](const std::vector<long>& n, const ECPoint& s) { table[key(s)].push_back(n); });
      else
        table["O"].push_back({});
      enumerate(c, second, std::vector<long>(r - half, -b), [&](const std::vector<long>& n, const ECPoint& s) {
        const auto it = table.find(key(ec_negate(s)));
        if (it == table.end()) return;
        for (const auto& f : it->second) {
          std::vector<long> full = f;
          full.insert(full.end(), n.begin(), n.end());
          rels.push_back(std::move(full));
        }
      });
    }
    out.lattice = span_or_zero(rels, r);
  }
  out.divisors = out.lattice.rank() ? alb.divisor_basis * out.lattice.basis() : IntMatrix(c.punctures.size(), 0);
  return out;
}

std::vector<ReportRow> period_conjecture_report(const CurveModel& c, int q_min, int q_max) {
  validate(c);
  std::size_t h11 = 0;
  bool exact = true;
  if (!c.punctures.empty()) {
    const KerU1 k = ker_u1_star(c);
    h11 = k.lattice.rank();
    exact = k.exact;
  }
  std::vector<ReportRow> rows;
  for (int q = q_min; q <= q_max; ++q) {
    if (q == 1)
      rows.push_back({q, h11, c.punctures.empty() ? "h11-proper" : "h11-ker-u1", exact});
    else if (q == 0)
      rows.push_back({q, 0, "h10-normal", true});
    else
      rows.push_back({q, 0, "hq-vanishing", true});
  }
  return rows;
}

}  // namespace permot
