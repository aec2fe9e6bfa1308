#include <set>

#include "doctest.h"
#include "permot/perimod/hom.hpp"
#include "support/modp_oracle.hpp"

using namespace permot;

namespace {

constexpr int kBox = 5;

RegistryPtr make_registry() {
  auto r = std::make_shared<SymbolRegistry>();
  r->add_log_prime(2);
  r->add_log_prime(3);
  r->add_symbol(SymbolKind::User, "x");
  r->freeze();
  return r;
}

PeriodTriple from_strings(const std::vector<std::vector<std::string>>& rows, const RegistryPtr& reg) {
  ScalarMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = parse_scalar(rows[i][j], reg);
  TripleData d;
  d.free_rank = d.k_dim = rows.size();
  d.matrix = m;
  d.require_iso = true;
  return make_triple(std::move(d));
}

void check_against_oracle(const PeriodTriple& a, const PeriodTriple& b, const RegistryPtr& reg) {
  const HomLattice h = hom_group(a, b);
  const auto brute = oracle::brute_force_hom(a, b, reg->size(), kBox);
  const std::size_t n = a.free_rank() * b.free_rank();
  std::set<std::vector<long>> found(brute.begin(), brute.end());
  IntMatrix gens(n, brute.size());
  for (std::size_t j = 0; j < brute.size(); ++j) {
    std::vector<mpz_class> v(brute[j].begin(), brute[j].end());
    CHECK(h.lattice.contains(v));
    for (std::size_t i = 0; i < n; ++i) gens(i, j) = brute[j][i];
  }
  CHECK(Lattice::span(gens) == h.lattice);
  // Small combinations of the solver basis that land in the box must have
  // been enumerated.
  const std::size_t r = h.rank();
  std::vector<long> c(r, -3);
  for (bool more = r > 0; more;) {
    std::vector<long> x(n, 0);
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
      mpz_class acc = 0;
      for (std::size_t j = 0; j < r; ++j) acc += c[j] * h.lattice.basis()(i, j);
      inside = abs(acc) <= kBox;
      if (inside) x[i] = acc.get_si();
    }
    if (inside) CHECK(found.count(x) == 1);
    std::size_t i = 0;
    while (i < r && c[i] == 3) c[i++] = -3;
    more = i < r;
    if (more) ++c[i];
  }
}

}  // namespace

TEST_CASE("hom_group matches brute-force enumeration") {
  const auto reg = make_registry();
  const PeriodTriple z0 = from_strings({{"1"}}, reg);
  const PeriodTriple z1 = from_strings({{"twopii"}}, reg);
  const PeriodTriple k2 = from_strings({{"twopii", "log2"}, {"0", "1"}}, reg);
  const PeriodTriple k4 = from_strings({{"twopii", "2*log2"}, {"0", "1"}}, reg);
  const PeriodTriple k3 = from_strings({{"twopii", "log3"}, {"0", "1"}}, reg);
  const PeriodTriple split = from_strings({{"twopii", "0"}, {"0", "1"}}, reg);
  const PeriodTriple kx = from_strings({{"twopii", "x"}, {"0", "1"}}, reg);
  const PeriodTriple two_gens = from_strings({{"twopii", "log2", "2*log2"}, {"0", "1", "0"}, {"0", "0", "1"}}, reg);
  const PeriodTriple torus2 = from_strings({{"twopii", "0", "log2"}, {"0", "twopii", "log3"}, {"0", "0", "1"}}, reg);
  const PeriodTriple mixed = from_strings({{"twopii", "log2", "0"}, {"0", "1", "0"}, {"0", "0", "twopii"}}, reg);

  const std::vector<std::pair<const PeriodTriple*, const PeriodTriple*>> suite = {
      {&z0, &z1},       {&z1, &z1},         {&z1, &z0},       {&k2, &k4},     {&k4, &k2},
      {&k2, &k3},       {&k2, &k2},         {&split, &split}, {&kx, &kx},     {&kx, &k2},
      {&split, &k2},    {&k2, &split},      {&two_gens, &two_gens},             {&torus2, &torus2},
      {&mixed, &mixed}, {&k2, &two_gens},   {&two_gens, &k4}, {&torus2, &k3}, {&mixed, &two_gens},
  };
  for (const auto& [a, b] : suite) {
    CAPTURE(to_string(a->matrix()));
    CAPTURE(to_string(b->matrix()));
    check_against_oracle(*a, *b, reg);
  }
}
