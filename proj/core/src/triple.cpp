#include "permot/perimod/triple.hpp"

#include <algorithm>
#include <map>

#include "permot/error.hpp"
#include "permot/numfield/linear_algebra.hpp"

namespace permot {

namespace {

// Sorted by weight, zero steps dropped, repeated lattices collapsed onto the
// lowest weight at which they appear.
WeightFiltration canonical_filtration(WeightFiltration steps) {
  std::stable_sort(steps.begin(), steps.end(),
                   [](const WeightStep& a, const WeightStep& b) { return a.weight < b.weight; });
  WeightFiltration out;
  for (auto& s : steps) {
    if (s.lattice.rank() == 0) continue;
    if (!out.empty() && out.back().weight == s.weight) {
      out.back().lattice = s.lattice;
      continue;
    }
    if (!out.empty() && out.back().lattice == s.lattice) continue;
    out.push_back(std::move(s));
  }
  return out;
}

Lattice annihilator(const Lattice& w) {
  if (w.rank() == 0) return Lattice::standard(w.ambient_rank());
  return integer_kernel(w.basis().transpose());
}

WeightFiltration dual_filtration(const WeightFiltration& f, std::size_t n) {
  WeightFiltration out;
  if (f.empty()) return out;
  // W_k(H^dual) = ann W_{-k-1}(H); ann W_{w_i} holds for -w_{i+1} <= k < -w_i.
  for (std::size_t i = 0; i + 1 < f.size(); ++i) out.push_back({-f[i + 1].weight, annihilator(f[i].lattice)});
  out.push_back({-f.front().weight, Lattice::standard(n)});
  return canonical_filtration(std::move(out));
}

WeightFiltration tensor_filtration(const WeightFiltration& a, const WeightFiltration& b) {
  std::map<int, std::vector<IntMatrix>> pieces;
  for (const auto& sa : a)
    for (const auto& sb : b) pieces[sa.weight + sb.weight].push_back(kronecker(sa.lattice.basis(), sb.lattice.basis()));
  const std::size_t n = a.empty() || b.empty() ? 0 : a.front().lattice.ambient_rank() * b.front().lattice.ambient_rank();
  WeightFiltration out;
  std::vector<IntMatrix> acc;
  for (auto& [w, mats] : pieces) {
    // Filtration steps are cumulative: W_k = sum over i + j <= k.
    for (auto& m : mats) acc.push_back(std::move(m));
    std::size_t cols = 0;
    for (const auto& m : acc) cols += m.cols();
    IntMatrix gens(n, cols);
    std::size_t c = 0;
    for (const auto& m : acc) {
      gens.set_block(0, c, m);
      c += m.cols();
    }
    out.push_back({w, Lattice::span(gens)});
  }
  return canonical_filtration(std::move(out));
}

WeightFiltration shift_filtration(const WeightFiltration& f, int by) {
  WeightFiltration out = f;
  for (auto& s : out) s.weight += by;
  return out;
}

void validate_filtration(const WeightFiltration& f, std::size_t free_rank) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].lattice.ambient_rank() != free_rank)
      throw DimensionError("weight step lattice lives in Z^" + std::to_string(f[i].lattice.ambient_rank()) +
                           " but the free part has rank " + std::to_string(free_rank));
    if (!f[i].lattice.is_saturated()) throw DomainError("weight step W_" + std::to_string(f[i].weight) + " is not saturated");
    if (i > 0) {
      if (f[i].weight <= f[i - 1].weight) throw DomainError("weight steps must have increasing weights");
      if (!f[i].lattice.contains(f[i - 1].lattice)) throw DomainError("weight steps are not nested");
    }
  }
  if (!f.empty() && f.back().lattice.rank() != free_rank)
    throw DomainError("the top weight step must be the whole free part");
}

}  // namespace

RegistryPtr registry_of(const ScalarMatrix& m) {
  for (const auto& x : m.data())
    if (x.registry()) return x.registry();
  return nullptr;
}

PeriodTriple make_triple(TripleData data) {
  const bool hom = data.side == Side::Homological;
  const std::size_t want_rows = hom ? data.k_dim : data.free_rank;
  const std::size_t want_cols = hom ? data.free_rank : data.k_dim;
  if (data.matrix.rows() != want_rows || data.matrix.cols() != want_cols)
    throw DimensionError("comparison matrix is " + data.matrix.shape() + " but free rank " +
                         std::to_string(data.free_rank) + " and K-dimension " + std::to_string(data.k_dim) +
                         " require " + std::to_string(want_rows) + "x" + std::to_string(want_cols));
  PeriodTriple t;
  t.free_rank_ = data.free_rank;
  t.k_dim_ = data.k_dim;
  t.side_ = data.side;
  t.torsion_ = invariant_factors_of_cyclic_sum(data.torsion);
  t.matrix_ = std::move(data.matrix);
  if (data.iso_hint) {
    t.iso_ = *data.iso_hint;
  } else {
    t.iso_ = t.free_rank_ == t.k_dim_ && (t.free_rank_ == 0 || !determinant(t.matrix_).is_zero());
  }
  if (data.require_iso && !t.iso_)
    throw DomainError("triple declared as an isomorphism but its comparison map is not invertible");
  if (data.weights) {
    WeightFiltration w = canonical_filtration(std::move(*data.weights));
    validate_filtration(w, t.free_rank_);
    t.weights_ = std::move(w);
  }
  if (data.hodge) {
    if (data.hodge->rows() != t.k_dim_)
      throw DimensionError("Hodge subspace basis has " + std::to_string(data.hodge->rows()) +
                           " rows but H_K has dimension " + std::to_string(t.k_dim_));
    // Keep an independent basis (nonzero rows of the reduced transpose).
    const auto e = rref(data.hodge->transpose());
    t.hodge_ = e.reduced.block(0, 0, e.pivots.size(), t.k_dim_).transpose();
  }
  return t;
}

Lattice PeriodTriple::weight_at(int w) const {
  if (!weights_) throw DomainError("triple carries no weight filtration");
  Lattice out(free_rank_);
  for (const auto& s : *weights_)
    if (s.weight <= w) out = s.lattice;
  return out;
}

bool PeriodTriple::operator==(const PeriodTriple& o) const {
  return free_rank_ == o.free_rank_ && k_dim_ == o.k_dim_ && side_ == o.side_ && torsion_ == o.torsion_ &&
         matrix_ == o.matrix_;
}

PeriodTriple tate_object(int r, const RegistryPtr& registry, Side side) {
  if (r != 0 && !registry) throw SymbolError("Z(r) with r != 0 needs a registry holding 2*pi*i");
  PeriodScalar value(1);
  if (r != 0) value = PeriodScalar::two_pi_i(registry).pow(side == Side::Homological ? r : -r);
  TripleData d;
  d.free_rank = d.k_dim = 1;
  d.matrix = ScalarMatrix(1, 1, value);
  d.side = side;
  d.weights = WeightFiltration{{-2 * r, Lattice::standard(1)}};
  d.iso_hint = true;
  return make_triple(std::move(d));
}

PeriodTriple tensor(const PeriodTriple& a, const PeriodTriple& b) {
  if (a.side() != b.side()) throw DomainError("tensor of triples on different sides");
  if (!a.is_free() || !b.is_free()) throw DomainError("tensor product with torsion is not supported");
  TripleData d;
  d.free_rank = a.free_rank() * b.free_rank();
  d.k_dim = a.k_dim() * b.k_dim();
  d.side = a.side();
  d.matrix = kronecker(a.matrix(), b.matrix());
  if (a.weights() && b.weights()) d.weights = tensor_filtration(*a.weights(), *b.weights());
  if (a.iso() && b.iso()) d.iso_hint = true;
  return make_triple(std::move(d));
}

PeriodTriple dual(const PeriodTriple& h) {
  if (!h.is_free()) throw DomainError("dual of a triple with torsion");
  if (!h.iso()) throw DomainError("dual requires an invertible comparison map");
  TripleData d;
  d.free_rank = h.free_rank();
  d.k_dim = h.k_dim();
  d.side = h.side();
  d.matrix = inverse(h.matrix()).transpose();
  if (h.weights()) d.weights = dual_filtration(*h.weights(), h.free_rank());
  d.iso_hint = true;
  return make_triple(std::move(d));
}

PeriodTriple tate_twist(const PeriodTriple& h, int r, const RegistryPtr& registry) {
  if (r == 0) return h;
  RegistryPtr reg = registry_of(h.matrix());
  if (!reg) reg = registry;
  if (!reg) throw SymbolError("Tate twist of a triple without symbols needs an explicit registry");
  if (!h.is_free()) {
    // Torsion is untouched by twisting; only the comparison is rescaled.
    TripleData d;
    d.free_rank = h.free_rank();
    d.k_dim = h.k_dim();
    d.side = h.side();
    d.torsion = h.torsion();
    const PeriodScalar s = PeriodScalar::two_pi_i(reg).pow(h.side() == Side::Homological ? r : -r);
    d.matrix = h.matrix().scaled(s);
    if (h.weights()) d.weights = shift_filtration(*h.weights(), -2 * r);
    d.hodge = h.hodge();
    d.iso_hint = h.iso();
    return make_triple(std::move(d));
  }
  return tensor(h, tate_object(r, reg, h.side()));
}

PeriodTriple cartier_dual_triple(const PeriodTriple& h, const RegistryPtr& registry) {
  return tate_twist(dual(h), 1, registry);
}

PeriodTriple varsigma(const PeriodTriple& h) {
  if (h.side() != Side::Homological) throw DomainError("varsigma expects a homological triple");
  if (!h.iso()) throw DomainError("varsigma requires an invertible comparison map");
  TripleData d;
  d.free_rank = h.free_rank();
  d.k_dim = h.k_dim();
  d.torsion = h.torsion();
  d.side = Side::Cohomological;
  d.matrix = h.free_rank() ? inverse(h.matrix()) : ScalarMatrix(0, 0);
  d.weights = h.weights();
  d.hodge = h.hodge();
  d.iso_hint = true;
  return make_triple(std::move(d));
}

PeriodTriple unvarsigma(const PeriodTriple& h) {
  if (h.side() != Side::Cohomological) throw DomainError("unvarsigma expects a cohomological triple");
  if (!h.iso()) throw DomainError("unvarsigma requires an invertible comparison map");
  TripleData d;
  d.free_rank = h.free_rank();
  d.k_dim = h.k_dim();
  d.torsion = h.torsion();
  d.side = Side::Homological;
  d.matrix = h.free_rank() ? inverse(h.matrix()) : ScalarMatrix(0, 0);
  d.weights = h.weights();
  d.hodge = h.hodge();
  d.iso_hint = true;
  return make_triple(std::move(d));
}

}  // namespace permot
