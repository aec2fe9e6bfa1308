#pragma once

// Brute-force Hom oracle: evaluates comparison matrices at random points
// modulo a 61-bit prime and enumerates integer matrices in a box by
// meet-in-the-middle.  Independent of the symbolic solver; only valid for
// triples over Q without declared relations.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "permot/perimod/triple.hpp"

namespace oracle {

using u64 = std::uint64_t;
constexpr u64 kP = (u64(1) << 61) - 1;

inline u64 mulmod(u64 a, u64 b) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % kP); }
inline u64 addmod(u64 a, u64 b) { return (a + b) % kP; }
inline u64 submod(u64 a, u64 b) { return (a + kP - b) % kP; }
inline u64 powmod(u64 a, u64 e) {
  u64 r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}
inline u64 invmod(u64 a) {
  if (a == 0) throw std::runtime_error("oracle: division by zero mod p");
  return powmod(a, kP - 2);
}
inline u64 from_mpz(const mpz_class& z) {
  mpz_class r = z % mpz_class(std::to_string(kP));
  if (r < 0) r += mpz_class(std::to_string(kP));
  return std::stoull(r.get_str());
}
inline u64 from_long(long v) { return v >= 0 ? u64(v) % kP : submod(0, u64(-v) % kP); }

inline u64 eval(const permot::Polynomial& p, const std::vector<u64>& point) {
  u64 acc = 0;
  for (const auto& [mono, c] : p.terms()) {
    if (!c.is_rational()) throw std::runtime_error("oracle: number field coefficients unsupported");
    const mpq_class q = c.rational();
    u64 t = mulmod(from_mpz(q.get_num()), invmod(from_mpz(q.get_den())));
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (mono[i]) t = mulmod(t, powmod(point.at(i), static_cast<u64>(mono[i])));
    acc = addmod(acc, t);
  }
  return acc;
}

inline u64 eval(const permot::PeriodScalar& s, const std::vector<u64>& point) {
  return mulmod(eval(s.numerator(), point), invmod(eval(s.denominator(), point)));
}

using ModMatrix = std::vector<std::vector<u64>>;

inline ModMatrix eval(const permot::ScalarMatrix& m, const std::vector<u64>& point) {
  ModMatrix out(m.rows(), std::vector<u64>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = eval(m(i, j), point);
  return out;
}

inline ModMatrix invert(ModMatrix a) {
  const std::size_t n = a.size();
  ModMatrix inv(n, std::vector<u64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw std::runtime_error("oracle: singular evaluation");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const u64 f = invmod(a[c][c]);
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] = mulmod(a[c][j], f);
      inv[c][j] = mulmod(inv[c][j], f);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const u64 g = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = submod(a[r][j], mulmod(g, a[c][j]));
        inv[r][j] = submod(inv[r][j], mulmod(g, inv[c][j]));
      }
    }
  }
  return inv;
}

struct VecHash {
  std::size_t operator()(const std::vector<u64>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (u64 x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// All X in [-bound, bound]^{m' x m} (row-major) with omega' X omega^{-1}
// independent of the evaluation point, for homological triples over Q.
inline std::vector<std::vector<long>> brute_force_hom(const permot::PeriodTriple& s, const permot::PeriodTriple& t,
                                                      std::size_t symbol_count, int bound, unsigned seed = 7,
                                                      int points = 3) {
  const std::size_t m = s.free_rank(), mp = t.free_rank(), kp = t.k_dim(), k = s.k_dim();
  const std::size_t n = m * mp;
  std::mt19937_64 rng(seed);
  std::vector<ModMatrix> lhs, rhs;  // omega'(pt), omega(pt)^{-1}
  for (int pt = 0; pt < points; ++pt) {
    std::vector<u64> point(symbol_count);
    for (auto& v : point) v = 2 + rng() % (kP - 3);
    lhs.push_back(eval(t.matrix(), point));
    rhs.push_back(invert(eval(s.matrix(), point)));
  }
  // Column c of L: image of the unit matrix E_{pq} under
  // X -> (F_t(X) - F_0(X))_{t >= 1}, F_t(X) = omega'_t X omega_t^{-1}.
  const std::size_t rows = static_cast<std::size_t>(points - 1) * kp * k;
  std::vector<std::vector<u64>> col(n, std::vector<u64>(rows, 0));
  for (std::size_t p = 0; p < mp; ++p)
    for (std::size_t q = 0; q < m; ++q) {
      auto& c = col[p * m + q];
      std::size_t r = 0;
      for (int pt = 1; pt < points; ++pt)
        for (std::size_t i = 0; i < kp; ++i)
          for (std::size_t j = 0; j < k; ++j, ++r)
            c[r] = submod(mulmod(lhs[pt][i][p], rhs[pt][q][j]), mulmod(lhs[0][i][p], rhs[0][q][j]));
    }
  const std::size_t half = n / 2;
  auto enumerate = [&](std::size_t first, std::size_t count, auto&& visit) {
    std::vector<long> x(count, -bound);
    for (;;) {
      std::vector<u64> acc(rows, 0);
      for (std::size_t i = 0; i < count; ++i) {
        const u64 coef = from_long(x[i]);
        if (coef == 0) continue;
        for (std::size_t r = 0; r < rows; ++r) acc[r] = addmod(acc[r], mulmod(coef, col[first + i][r]));
      }
      visit(x, acc);
      std::size_t i = 0;
      while (i < count && x[i] == bound) x[i++] = -bound;
      if (i == count) return;
      ++x[i];
    }
  };
  std::unordered_map<std::vector<u64>, std::vector<std::vector<long>>, VecHash> table;
  enumerate(0, half, [&](const std::vector<long>& x, const std::vector<u64>& acc) { table[acc].push_back(x); });
  std::vector<std::vector<long>> out;
  enumerate(half, n - half, [&](const std::vector<long>& y, std::vector<u64> acc) {
    for (auto& v : acc) v = submod(0, v);
    auto it = table.find(acc);
    if (it == table.end()) return;
    for (const auto& x : it->second) {
      std::vector<long> full = x;
      full.insert(full.end(), y.begin(), y.end());
      out.push_back(std::move(full));
    }
  });
  return out;
}

}  // namespace oracle
