#include "permot/session/session.hpp"

#include <algorithm>
#include <future>
#include <regex>
#include <set>
#include <sstream>

#include "permot/error.hpp"
#include "permot/expr_lexer.hpp"

namespace permot::session {

namespace {

// --- parsing ---------------------------------------------------------------

class Ctx {
 public:
  void fail(const std::string& where, const std::string& what) { issues.push_back({where, what}); }
  bool ok() const { return issues.empty(); }
  std::vector<SchemaIssue> issues;
};

bool check_keys(Ctx& ctx, const Json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required = {}) {
  if (!obj.is_object()) {
    ctx.fail(where, "expected an object");
    return false;
  }
  bool good = true;
  for (const auto& [k, v] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      ctx.fail(where + "/" + k, "unknown field");
      good = false;
    }
  for (const char* r : required)
    if (!obj.contains(r)) {
      ctx.fail(where, std::string("missing required field '") + r + "'");
      good = false;
    }
  return good;
}

std::optional<std::string> get_string(Ctx& ctx, const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  ctx.fail(where, "expected a string");
  return std::nullopt;
}

// Integers may be JSON numbers or decimal strings (for big values).
std::optional<mpz_class> get_integer(Ctx& ctx, const Json& v, const std::string& where) {
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) == 0) return z;
  }
  ctx.fail(where, "expected an integer");
  return std::nullopt;
}

std::optional<long> get_small(Ctx& ctx, const Json& v, const std::string& where, long lo, long hi) {
  if (!v.is_number_integer()) {
    ctx.fail(where, "expected an integer");
    return std::nullopt;
  }
  const long long x = v.get<long long>();
  if (x < lo || x > hi) {
    ctx.fail(where, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return std::nullopt;
  }
  return static_cast<long>(x);
}

std::optional<mpq_class> get_rational(Ctx& ctx, const Json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(mpz_class(std::to_string(v.get<long long>())));
  if (v.is_string()) {
    mpq_class q;
    if (q.set_str(v.get<std::string>(), 10) == 0) {
      q.canonicalize();
      if (q.get_den() != 0) return q;
    }
  }
  ctx.fail(where, "expected a rational number (integer or \"p/q\")");
  return std::nullopt;
}

Json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json rational_json(const mpq_class& q) {
  if (q.get_den() == 1) return integer_json(q.get_num());
  return q.get_str();
}

std::string loc(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

std::vector<std::string> identifiers(const std::string& expr) {
  std::vector<std::string> out;
  ExprLexer lex(expr);
  while (lex.peek().kind != Token::End) {
    const Token t = lex.next();
    if (t.kind == Token::Ident) out.push_back(t.text);
  }
  return out;
}

const std::regex kTateRef(R"(Z\((-?[0-9]+)\))");

struct Parser {
  Ctx ctx;
  Document doc;
  std::shared_ptr<SymbolRegistry> reg;
  std::set<std::string> names;
  // Deferred until every symbol is registered.
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> relations;
  struct PendingTriple {
    std::string name, where;
    Json canon;
    TripleData data;
    std::vector<std::vector<std::string>> entries;
  };
  std::vector<PendingTriple> triples;

  bool claim_name(const std::string& name, const std::string& where) {
    if (name.empty() || std::regex_match(name, kTateRef)) {
      ctx.fail(where, "invalid object name '" + name + "'");
      return false;
    }
    if (!names.insert(name).second) {
      ctx.fail(where, "duplicate name '" + name + "'");
      return false;
    }
    return true;
  }

  void base_field(const Json& j, Json& canon) {
    const std::string w = "/base_field";
    if (!check_keys(ctx, j, w, {"type", "minpoly", "generator"}, {"type"})) return;
    const auto type = get_string(ctx, j["type"], w + "/type");
    if (!type) return;
    if (*type == "rational") {
      reg = std::make_shared<SymbolRegistry>();
      canon = {{"type", "rational"}};
      return;
    }
    if (*type != "number_field") {
      ctx.fail(w + "/type", "expected \"rational\" or \"number_field\"");
      return;
    }
    if (!j.contains("minpoly") || !j["minpoly"].is_array()) {
      ctx.fail(w + "/minpoly", "expected an array of rational coefficients, constant term first");
      return;
    }
    QPoly f;
    Json coeffs = Json::array();
    for (std::size_t i = 0; i < j["minpoly"].size(); ++i)
      if (auto q = get_rational(ctx, j["minpoly"][i], loc(w + "/minpoly", i))) {
        f.push_back(*q);
        coeffs.push_back(rational_json(*q));
      }
    std::string gen = "a";
    if (j.contains("generator"))
      if (auto g = get_string(ctx, j["generator"], w + "/generator")) gen = *g;
    if (!ctx.ok()) return;
    try {
      reg = std::make_shared<SymbolRegistry>(NumberField::make(f, gen));
      canon = {{"type", "number_field"}, {"minpoly", coeffs}, {"generator", gen}};
    } catch (const Error& e) {
      ctx.fail(w, e.what());
    }
  }

  void symbols(const Json& j, Json& canon) {
    if (!j.is_array()) return ctx.fail("/symbols", "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = loc("/symbols", i);
      const Json& s = j[i];
      if (!check_keys(ctx, s, w, {"name", "kind", "value", "prime"}, {"kind"})) continue;
      const auto kind_s = get_string(ctx, s["kind"], w + "/kind");
      if (!kind_s) continue;
      const auto kind = symbol_kind_from_string(*kind_s);
      if (!kind || *kind == SymbolKind::TwoPiI) {
        ctx.fail(w + "/kind", "unknown symbol kind '" + *kind_s + "'");
        continue;
      }
      try {
        if (*kind == SymbolKind::LogPrime) {
          const auto p = s.contains("prime") ? get_integer(ctx, s["prime"], w + "/prime") : std::nullopt;
          if (!p || mpz_probab_prime_p(p->get_mpz_t(), 30) == 0) {
            ctx.fail(w + "/prime", "log_prime needs a prime");
            continue;
          }
          reg->add_log_prime(*p);
          canon.push_back({{"kind", *kind_s}, {"prime", integer_json(*p)}});
          continue;
        }
        if (!s.contains("name")) {
          ctx.fail(w, "missing required field 'name'");
          continue;
        }
        const auto name = get_string(ctx, s["name"], w + "/name");
        if (!name) continue;
        if (*kind == SymbolKind::LogUnit) {
          const auto v = s.contains("value") ? get_string(ctx, s["value"], w + "/value") : std::nullopt;
          if (!v) {
            ctx.fail(w + "/value", "log_unit needs a field element value");
            continue;
          }
          const FieldElem u = parse_field_elem(*v, reg->field());
          reg->add_log_unit(*name, u);
          canon.push_back({{"name", *name}, {"kind", *kind_s}, {"value", u.to_string()}});
          continue;
        }
        reg->add_symbol(*kind, *name);
        canon.push_back({{"name", *name}, {"kind", *kind_s}});
      } catch (const Error& e) {
        ctx.fail(w, e.what());
      }
    }
  }

  std::optional<std::pair<std::string, std::string>> relation(const Json& r, const std::string& w) {
    if (!check_keys(ctx, r, w, {"lhs", "rhs"}, {"lhs", "rhs"})) return std::nullopt;
    const auto l = get_string(ctx, r["lhs"], w + "/lhs");
    const auto rh = get_string(ctx, r["rhs"], w + "/rhs");
    if (!l || !rh) return std::nullopt;
    return std::pair{*l, *rh};
  }

  std::optional<IntMatrix> int_columns(const Json& j, const std::string& w, std::size_t rows) {
    if (!j.is_array()) {
      ctx.fail(w, "expected an array of integer vectors");
      return std::nullopt;
    }
    IntMatrix m(rows, j.size());
    for (std::size_t c = 0; c < j.size(); ++c) {
      if (!j[c].is_array() || j[c].size() != rows) {
        ctx.fail(loc(w, c), "expected a vector of length " + std::to_string(rows));
        return std::nullopt;
      }
      for (std::size_t i = 0; i < rows; ++i) {
        const auto z = get_integer(ctx, j[c][i], loc(loc(w, c), i));
        if (!z) return std::nullopt;
        m(i, c) = *z;
      }
    }
    return m;
  }

  std::optional<std::vector<std::vector<std::string>>> string_matrix(const Json& j, const std::string& w,
                                                                    std::size_t rows, std::size_t cols) {
    if (!j.is_array() || j.size() != rows) {
      ctx.fail(w, "expected " + std::to_string(rows) + " rows");
      return std::nullopt;
    }
    std::vector<std::vector<std::string>> out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!j[i].is_array() || j[i].size() != cols) {
        ctx.fail(loc(w, i), "expected a row of " + std::to_string(cols) + " entries");
        return std::nullopt;
      }
      for (std::size_t c = 0; c < cols; ++c) {
        const Json& e = j[i][c];
        if (e.is_number_integer())
          out[i].push_back(std::to_string(e.get<long long>()));
        else if (auto s = get_string(ctx, e, loc(loc(w, i), c)))
          out[i].push_back(*s);
        else
          return std::nullopt;
      }
    }
    return out;
  }

  Json string_matrix_json(const std::vector<std::vector<std::string>>& m) {
    Json out = Json::array();
    for (const auto& row : m) out.push_back(row);
    return out;
  }

  void motives(const Json& j, Json& canon) {
    if (!j.is_array()) return ctx.fail("/motives", "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = loc("/motives", i);
      const Json& mj = j[i];
      if (!check_keys(ctx, mj, w,
                      {"name", "lattice_rank", "lattice_torsion", "torus_rank", "u_torus", "abelian", "u_abelian",
                       "abelian_kernel"},
                      {"name"}))
        continue;
      const auto name = get_string(ctx, mj["name"], w + "/name");
      if (!name || !claim_name(*name, w + "/name")) continue;
      OneMotive m;
      Json c = {{"name", *name}};
      if (mj.contains("lattice_rank"))
        if (auto r = get_small(ctx, mj["lattice_rank"], w + "/lattice_rank", 0, 64)) m.lattice_rank = *r;
      if (mj.contains("lattice_torsion")) {
        if (!mj["lattice_torsion"].is_array()) {
          ctx.fail(w + "/lattice_torsion", "expected an array of orders");
          continue;
        }
        for (std::size_t t = 0; t < mj["lattice_torsion"].size(); ++t)
          if (auto d = get_integer(ctx, mj["lattice_torsion"][t], loc(w + "/lattice_torsion", t)))
            m.lattice_torsion.push_back(*d);
      }
      if (mj.contains("torus_rank"))
        if (auto s = get_small(ctx, mj["torus_rank"], w + "/torus_rank", 0, 64)) m.torus_rank = *s;
      c["lattice_rank"] = m.lattice_rank;
      Json tors = Json::array();
      for (const auto& d : m.lattice_torsion) tors.push_back(integer_json(d));
      c["lattice_torsion"] = tors;
      c["torus_rank"] = m.torus_rank;
      const std::size_t gens = m.lattice_rank + m.lattice_torsion.size();
      m.u_torus = FieldMatrix(m.torus_rank, gens);
      if (m.torus_rank > 0 && gens > 0) {
        if (!mj.contains("u_torus")) {
          ctx.fail(w, "missing required field 'u_torus'");
          continue;
        }
        const auto vals = string_matrix(mj["u_torus"], w + "/u_torus", m.torus_rank, gens);
        if (!vals) continue;
        Json rows = Json::array();
        bool good = true;
        for (std::size_t r = 0; r < m.torus_rank && good; ++r) {
          Json row = Json::array();
          for (std::size_t g = 0; g < gens && good; ++g) {
            try {
              m.u_torus(r, g) = parse_field_elem((*vals)[r][g], reg->field());
              row.push_back(m.u_torus(r, g).to_string());
            } catch (const Error& e) {
              ctx.fail(loc(loc(w + "/u_torus", r), g), e.what());
              good = false;
            }
          }
          rows.push_back(row);
        }
        if (!good) continue;
        c["u_torus"] = rows;
      }
      if (mj.contains("abelian")) {
        const std::string wa = w + "/abelian";
        const Json& a = mj["abelian"];
        if (!check_keys(ctx, a, wa, {"genus", "period_symbols", "hodge_cols", "relations"},
                        {"genus", "period_symbols", "hodge_cols"}))
          continue;
        AbelianDatum ad;
        const auto g = get_small(ctx, a["genus"], wa + "/genus", 0, 8);
        if (!g) continue;
        ad.genus = *g;
        const auto ps = string_matrix(a["period_symbols"], wa + "/period_symbols", 2 * ad.genus, 2 * ad.genus);
        if (!ps) continue;
        ad.period_symbols = *ps;
        if (!a["hodge_cols"].is_array()) {
          ctx.fail(wa + "/hodge_cols", "expected an array of indices");
          continue;
        }
        for (std::size_t h = 0; h < a["hodge_cols"].size(); ++h)
          if (auto v = get_small(ctx, a["hodge_cols"][h], loc(wa + "/hodge_cols", h), 0, 2 * ad.genus - 1))
            ad.hodge_cols.push_back(*v);
        Json rels = Json::array();
        if (a.contains("relations")) {
          if (!a["relations"].is_array()) {
            ctx.fail(wa + "/relations", "expected an array");
            continue;
          }
          for (std::size_t r = 0; r < a["relations"].size(); ++r)
            if (auto rel = relation(a["relations"][r], loc(wa + "/relations", r))) {
              ad.relations.push_back(*rel);
              rels.push_back({{"lhs", rel->first}, {"rhs", rel->second}});
            }
        }
        c["abelian"] = {{"genus", ad.genus},
                        {"period_symbols", string_matrix_json(ad.period_symbols)},
                        {"hodge_cols", ad.hodge_cols},
                        {"relations", rels}};
        m.abelian = std::move(ad);
      }
      if (m.genus() > 0) {
        if (!mj.contains("u_abelian")) {
          ctx.fail(w, "missing required field 'u_abelian' (one row of 2g expressions per free generator)");
          continue;
        }
        const auto ua = string_matrix(mj["u_abelian"], w + "/u_abelian", m.lattice_rank, 2 * m.genus());
        if (!ua) continue;
        m.u_abelian = *ua;
        c["u_abelian"] = string_matrix_json(m.u_abelian);
      } else if (mj.contains("u_abelian")) {
        ctx.fail(w + "/u_abelian", "u_abelian needs an abelian part of positive genus");
        continue;
      }
      if (mj.contains("abelian_kernel")) {
        const auto k = int_columns(mj["abelian_kernel"], w + "/abelian_kernel", m.lattice_rank);
        if (!k) continue;
        m.abelian_kernel = *k;
        Json cols = Json::array();
        for (std::size_t col = 0; col < k->cols(); ++col) {
          Json v = Json::array();
          for (std::size_t r = 0; r < k->rows(); ++r) v.push_back(integer_json((*k)(r, col)));
          cols.push_back(v);
        }
        c["abelian_kernel"] = cols;
      }
      if (!ctx.ok()) continue;
      try {
        validate(m);
        register_symbols(m, *reg);
      } catch (const Error& e) {
        ctx.fail(w, e.what());
        continue;
      }
      doc.motives.emplace(*name, std::move(m));
      canon.push_back(c);
    }
  }

  void triples_section(const Json& j) {
    if (!j.is_array()) return ctx.fail("/triples", "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = loc("/triples", i);
      const Json& tj = j[i];
      if (!check_keys(ctx, tj, w, {"name", "side", "matrix", "torsion", "weights", "hodge"}, {"name", "matrix"}))
        continue;
      const auto name = get_string(ctx, tj["name"], w + "/name");
      if (!name || !claim_name(*name, w + "/name")) continue;
      PendingTriple p{*name, w, {{"name", *name}}, {}, {}};
      std::string side = "homological";
      if (tj.contains("side"))
        if (auto s = get_string(ctx, tj["side"], w + "/side")) side = *s;
      if (side != "homological" && side != "cohomological") {
        ctx.fail(w + "/side", "expected \"homological\" or \"cohomological\"");
        continue;
      }
      p.data.side = side == "homological" ? Side::Homological : Side::Cohomological;
      p.canon["side"] = side;
      const Json& mat = tj["matrix"];
      if (!mat.is_array() || mat.empty() || !mat[0].is_array()) {
        ctx.fail(w + "/matrix", "expected a non-empty array of rows");
        continue;
      }
      const auto entries = string_matrix(mat, w + "/matrix", mat.size(), mat[0].size());
      if (!entries) continue;
      p.entries = *entries;
      const std::size_t rows = mat.size(), cols = mat[0].size();
      p.data.k_dim = p.data.side == Side::Homological ? rows : cols;
      p.data.free_rank = p.data.side == Side::Homological ? cols : rows;
      p.canon["matrix"] = string_matrix_json(p.entries);
      Json tors = Json::array();
      if (tj.contains("torsion")) {
        if (!tj["torsion"].is_array()) {
          ctx.fail(w + "/torsion", "expected an array of orders");
          continue;
        }
        for (std::size_t t = 0; t < tj["torsion"].size(); ++t)
          if (auto d = get_integer(ctx, tj["torsion"][t], loc(w + "/torsion", t))) {
            p.data.torsion.push_back(*d);
            tors.push_back(integer_json(*d));
          }
      }
      p.canon["torsion"] = tors;
      if (tj.contains("weights")) {
        if (!tj["weights"].is_array()) {
          ctx.fail(w + "/weights", "expected an array of steps");
          continue;
        }
        WeightFiltration wf;
        Json steps = Json::array();
        const std::size_t amb = p.data.free_rank + p.data.torsion.size();
        for (std::size_t s = 0; s < tj["weights"].size(); ++s) {
          const std::string ws = loc(w + "/weights", s);
          const Json& st = tj["weights"][s];
          if (!check_keys(ctx, st, ws, {"weight", "basis"}, {"weight", "basis"})) continue;
          const auto wt = get_small(ctx, st["weight"], ws + "/weight", -64, 64);
          const auto basis = int_columns(st["basis"], ws + "/basis", p.data.free_rank);
          if (!wt || !basis) continue;
          if (amb != p.data.free_rank) {
            ctx.fail(ws, "weights are only supported on free triples");
            continue;
          }
          wf.push_back({static_cast<int>(*wt), basis->cols() ? Lattice::span(*basis) : Lattice(amb)});
          steps.push_back({{"weight", *wt}, {"basis", st["basis"]}});
        }
        p.data.weights = std::move(wf);
        p.canon["weights"] = steps;
      }
      if (tj.contains("hodge")) {
        const Json& hj = tj["hodge"];
        if (!hj.is_array()) {
          ctx.fail(w + "/hodge", "expected an array of column vectors");
          continue;
        }
        FieldMatrix h(p.data.k_dim, hj.size());
        Json cols = Json::array();
        bool good = true;
        for (std::size_t c = 0; c < hj.size() && good; ++c) {
          if (!hj[c].is_array() || hj[c].size() != p.data.k_dim) {
            ctx.fail(loc(w + "/hodge", c), "expected a vector of length " + std::to_string(p.data.k_dim));
            good = false;
            break;
          }
          Json col = Json::array();
          for (std::size_t r = 0; r < p.data.k_dim && good; ++r) {
            const Json& e = hj[c][r];
            const std::string text = e.is_number_integer() ? std::to_string(e.get<long long>())
                                     : e.is_string()       ? e.get<std::string>()
                                                           : "";
            try {
              h(r, c) = parse_field_elem(text, reg->field());
              col.push_back(h(r, c).to_string());
            } catch (const Error& err) {
              ctx.fail(loc(loc(w + "/hodge", c), r), err.what());
              good = false;
            }
          }
          cols.push_back(col);
        }
        if (!good) continue;
        p.data.hodge = std::move(h);
        p.canon["hodge"] = cols;
      }
      // Register identifiers of the form log<p>; others must be declared.
      static const std::regex log_prime(R"(log([0-9]+))");
      for (std::size_t r = 0; r < p.entries.size(); ++r)
        for (std::size_t c = 0; c < p.entries[r].size(); ++c) {
          try {
            for (const auto& id : identifiers(p.entries[r][c])) {
              if (reg->find(id) || (reg->field() && id == reg->field()->generator())) continue;
              std::smatch mm;
              const std::string copy = id;
              if (std::regex_match(copy, mm, log_prime) && mpz_class(mm[1].str()) > 1 &&
                  mpz_probab_prime_p(mpz_class(mm[1].str()).get_mpz_t(), 30) != 0) {
                reg->add_log_prime(mpz_class(mm[1].str()));
                continue;
              }
              ctx.fail(loc(loc(w + "/matrix", r), c), "undeclared symbol '" + id + "'");
            }
          } catch (const Error& e) {
            ctx.fail(loc(loc(w + "/matrix", r), c), e.what());
          }
        }
      triples.push_back(std::move(p));
    }
  }

  void curves(const Json& j, Json& canon) {
    if (!j.is_array()) return ctx.fail("/curves", "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = loc("/curves", i);
      const Json& cj = j[i];
      if (!check_keys(ctx, cj, w, {"name", "kind", "a", "b", "punctures", "relation_bound"}, {"name", "kind"}))
        continue;
      const auto name = get_string(ctx, cj["name"], w + "/name");
      if (!name || !claim_name(*name, w + "/name")) continue;
      const auto kind = get_string(ctx, cj["kind"], w + "/kind");
      if (!kind) continue;
      CurveModel c;
      Json out = {{"name", *name}, {"kind", *kind}};
      if (*kind == "elliptic") {
        c.kind = CurveModel::Kind::Elliptic;
        const auto a = cj.contains("a") ? get_rational(ctx, cj["a"], w + "/a") : std::nullopt;
        const auto b = cj.contains("b") ? get_rational(ctx, cj["b"], w + "/b") : std::nullopt;
        if (!a || !b) {
          ctx.fail(w, "elliptic curves need coefficients 'a' and 'b'");
          continue;
        }
        c.a = *a;
        c.b = *b;
        out["a"] = rational_json(c.a);
        out["b"] = rational_json(c.b);
      } else if (*kind != "p1") {
        ctx.fail(w + "/kind", "expected \"p1\" or \"elliptic\"");
        continue;
      } else if (cj.contains("a") || cj.contains("b")) {
        ctx.fail(w, "p1 curves take no coefficients");
        continue;
      }
      Json pts = Json::array();
      if (cj.contains("punctures")) {
        if (!cj["punctures"].is_array()) {
          ctx.fail(w + "/punctures", "expected an array of points");
          continue;
        }
        for (std::size_t k = 0; k < cj["punctures"].size(); ++k) {
          const Json& pj = cj["punctures"][k];
          const std::string wp = loc(w + "/punctures", k);
          if (pj.is_string() && (pj == "O" || pj == "inf")) {
            c.punctures.push_back(ECPoint::at_infinity());
            pts.push_back("O");
          } else if (c.kind == CurveModel::Kind::P1) {
            if (auto x = get_rational(ctx, pj, wp)) {
              c.punctures.push_back({*x, 0, false});
              pts.push_back(rational_json(*x));
            }
          } else if (pj.is_array() && pj.size() == 2) {
            const auto x = get_rational(ctx, pj[0], wp + "/0");
            const auto y = get_rational(ctx, pj[1], wp + "/1");
            if (x && y) {
              c.punctures.push_back({*x, *y, false});
              pts.push_back({rational_json(*x), rational_json(*y)});
            }
          } else {
            ctx.fail(wp, "expected \"O\" or an [x, y] pair");
          }
        }
      }
      out["punctures"] = pts;
      if (cj.contains("relation_bound"))
        if (auto b = get_small(ctx, cj["relation_bound"], w + "/relation_bound", 1, 100000)) c.relation_bound = *b;
      out["relation_bound"] = c.relation_bound;
      try {
        validate(c);
      } catch (const Error& e) {
        ctx.fail(w, e.what());
        continue;
      }
      doc.curves.emplace(*name, std::move(c));
      canon.push_back(out);
    }
  }

  enum class Arg { Object, Motive, Curve };

  void queries(const Json& j, Json& canon) {
    if (!j.is_array()) return ctx.fail("/queries", "expected an array");
    static const std::map<std::string, std::vector<Arg>> signatures = {
        {"realize", {Arg::Motive}},        {"hom", {Arg::Object, Arg::Object}},
        {"dual", {Arg::Object}},           {"cartier", {Arg::Object}},
        {"tensor", {Arg::Object, Arg::Object}}, {"twist", {Arg::Object}},
        {"hphi", {Arg::Object}},           {"keru", {Arg::Motive}},
        {"biext", {Arg::Object, Arg::Object}},  {"albanese", {Arg::Curve}},
        {"report", {Arg::Curve}},          {"fullnesscheck", {Arg::Motive, Arg::Motive}},
    };
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string w = loc("/queries", i);
      const Json& qj = j[i];
      if (!check_keys(ctx, qj, w, {"command", "args", "options"}, {"command"})) continue;
      const auto cmd = get_string(ctx, qj["command"], w + "/command");
      if (!cmd) continue;
      const auto sig = signatures.find(*cmd);
      if (sig == signatures.end()) {
        ctx.fail(w + "/command", "unknown command '" + *cmd + "'");
        continue;
      }
      Query q{*cmd, {}, Json::object()};
      if (qj.contains("args")) {
        if (!qj["args"].is_array()) {
          ctx.fail(w + "/args", "expected an array of object names");
          continue;
        }
        for (std::size_t a = 0; a < qj["args"].size(); ++a)
          if (auto s = get_string(ctx, qj["args"][a], loc(w + "/args", a))) q.args.push_back(*s);
      }
      if (q.args.size() != sig->second.size()) {
        ctx.fail(w + "/args", "'" + *cmd + "' takes " + std::to_string(sig->second.size()) + " argument(s)");
        continue;
      }
      for (std::size_t a = 0; a < q.args.size(); ++a) {
        const std::string& n = q.args[a];
        const std::string wa = loc(w + "/args", a);
        switch (sig->second[a]) {
          case Arg::Motive:
            if (!doc.motives.count(n)) ctx.fail(wa, "'" + n + "' is not a declared motive");
            break;
          case Arg::Curve:
            if (!doc.curves.count(n)) ctx.fail(wa, "'" + n + "' is not a declared curve");
            break;
          case Arg::Object:
            if (!doc.motives.count(n) && !std::any_of(triples.begin(), triples.end(),
                                                      [&](const auto& t) { return t.name == n; }) &&
                !std::regex_match(n, kTateRef))
              ctx.fail(wa, "'" + n + "' is not a declared motive, triple, or Z(r)");
            break;
        }
      }
      if (qj.contains("options")) {
        const Json& o = qj["options"];
        if (!check_keys(ctx, o, w + "/options", {"q", "q_min", "q_max", "side", "bound"})) continue;
        for (const char* k : {"q", "q_min", "q_max"})
          if (o.contains(k)) get_small(ctx, o[k], w + "/options/" + k, -16, 16);
        if (o.contains("bound")) get_small(ctx, o["bound"], w + "/options/bound", 1, 100000);
        if (o.contains("side") && o["side"] != "bdr" && o["side"] != "drb")
          ctx.fail(w + "/options/side", "expected \"bdr\" or \"drb\"");
        q.options = o;
      }
      canon.push_back({{"command", q.command}, {"args", q.args}, {"options", q.options}});
      doc.queries.push_back(std::move(q));
    }
  }

  void finish_triples(Json& canon) {
    for (auto& p : triples) {
      const std::size_t rows = p.entries.size(), cols = p.entries.at(0).size();
      ScalarMatrix m(rows, cols);
      bool good = true;
      for (std::size_t r = 0; r < rows && good; ++r)
        for (std::size_t c = 0; c < cols && good; ++c) {
          try {
            m(r, c) = parse_scalar(p.entries[r][c], doc.registry);
          } catch (const Error& e) {
            ctx.fail(loc(loc(p.where + "/matrix", r), c), e.what());
            good = false;
          }
        }
      if (!good) continue;
      p.data.matrix = std::move(m);
      try {
        doc.triples.emplace(p.name, make_triple(std::move(p.data)));
        canon.push_back(p.canon);
      } catch (const Error& e) {
        ctx.fail(p.where, e.what());
      }
    }
  }

  Document run(const Json& root) {
    if (!check_keys(ctx, root, "",
                    {"schema_version", "base_field", "symbols", "relations", "motives", "triples", "curves",
                     "queries"},
                    {"schema_version"}))
      throw SchemaError(ctx.issues);
    if (!root["schema_version"].is_number_integer() || root["schema_version"].get<long long>() != kSchemaVersion)
      ctx.fail("/schema_version", "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    Json canon = {{"schema_version", kSchemaVersion}};
    Json field = {{"type", "rational"}};
    if (root.contains("base_field"))
      base_field(root["base_field"], field);
    else
      reg = std::make_shared<SymbolRegistry>();
    if (!reg) throw SchemaError(ctx.issues);
    canon["base_field"] = field;
    Json syms = Json::array(), rels = Json::array(), mots = Json::array(), trips = Json::array(),
         crvs = Json::array(), qs = Json::array();
    if (root.contains("symbols")) symbols(root["symbols"], syms);
    if (root.contains("relations")) {
      if (!root["relations"].is_array()) {
        ctx.fail("/relations", "expected an array");
      } else {
        for (std::size_t i = 0; i < root["relations"].size(); ++i)
          if (auto r = relation(root["relations"][i], loc("/relations", i))) {
            relations.push_back({loc("/relations", i), *r});
            rels.push_back({{"lhs", r->first}, {"rhs", r->second}});
          }
      }
    }
    if (root.contains("motives")) motives(root["motives"], mots);
    if (root.contains("triples")) triples_section(root["triples"]);
    if (root.contains("curves")) curves(root["curves"], crvs);
    doc.registry = reg;
    // Relations refer to symbols from any section, so they go in last.
    const RegistryPtr view = reg;
    for (const auto& [where, rel] : relations) {
      try {
        const PeriodScalar l = parse_scalar(rel.first, view);
        const PeriodScalar r = parse_scalar(rel.second, view);
        if (!l.is_polynomial() || !l.numerator().is_monomial() || !l.numerator().leading_coefficient().is_one())
          throw SymbolError("left-hand side must be a monomial with coefficient 1");
        if (!r.is_polynomial()) throw SymbolError("right-hand side must be a polynomial");
        reg->add_relation(l.numerator().leading_monomial(),
                          r.numerator().scaled(r.denominator().leading_coefficient().inverse()));
      } catch (const Error& e) {
        ctx.fail(where, e.what());
      }
    }
    reg->freeze();
    finish_triples(trips);
    if (root.contains("queries")) queries(root["queries"], qs);
    if (!ctx.ok()) throw SchemaError(ctx.issues);
    canon["symbols"] = syms;
    canon["relations"] = rels;
    canon["motives"] = mots;
    canon["triples"] = trips;
    canon["curves"] = crvs;
    canon["queries"] = qs;
    doc.source = std::move(canon);
    return std::move(doc);
  }
};

// --- running ----------------------------------------------------------------

Json vector_json(const std::vector<mpz_class>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(integer_json(z));
  return out;
}

Json int_matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

Json hom_json(const HomLattice& h) {
  Json out = lattice_to_json(h.lattice);
  out["torsion"] = vector_json(h.torsion);
  return out;
}

struct Runner {
  const Document& doc;
  const RunOptions& opt;

  bool is_motive(const std::string& n) const { return doc.motives.count(n) > 0; }

  PeriodTriple object(const std::string& n) const {
    if (auto t = doc.triples.find(n); t != doc.triples.end()) return t->second;
    if (auto m = doc.motives.find(n); m != doc.motives.end()) return realize_bdr(free_part(m->second), doc.registry);
    std::smatch mm;
    if (std::regex_match(n, mm, kTateRef)) return tate_object(std::stoi(mm[1].str()), doc.registry);
    throw DomainError("unknown object '" + n + "'");
  }

  static OneMotive free_part(const OneMotive& m) { return m.is_free() ? m : torsion_parts(m).fr; }

  CurveModel curve(const std::string& n) const {
    CurveModel c = doc.curves.at(n);
    if (opt.bound_override > 0) c.relation_bound = opt.bound_override;
    return c;
  }

  QueryResult run(const Query& q, std::size_t index) const {
    QueryResult r{index, q.command, q.args, "", Json::object(), ""};
    try {
      dispatch(q, r);
    } catch (const std::exception& e) {
      r.result = Json::object();
      r.error = "query " + std::to_string(index) + " (" + q.command + "): " + e.what();
    }
    return r;
  }

  void dispatch(const Query& q, QueryResult& r) const {
    const auto& a = q.args;
    const std::string& c = q.command;
    if (c == "realize") {
      const OneMotive& m = doc.motives.at(a[0]);
      const std::string side = q.options.value("side", "bdr");
      r.tag = "realization";
      const OneMotive f = free_part(m);
      r.result = triple_to_json(side == "drb" ? realize_drb(f, doc.registry) : realize_bdr(f, doc.registry));
      if (!m.is_free()) r.result["realized_part"] = "free";
      const auto dims = universal_extension_dims(f);
      r.result["hodge_dim"] = dims.v_dim;
    } else if (c == "hom") {
      r.tag = "hom";
      const PeriodTriple s = object(a[0]), t = object(a[1]);
      r.result = hom_json(hom_group(s, t));
    } else if (c == "dual") {
      r.tag = "dual";
      r.result = triple_to_json(dual(object(a[0])));
    } else if (c == "cartier") {
      r.tag = "cartier";
      const PeriodTriple h = object(a[0]);
      const PeriodTriple hs = cartier_dual_triple(h, doc.registry);
      r.result = {{"triple", triple_to_json(hs)}};
      if (is_motive(a[0]) && doc.motives.at(a[0]).is_torus_lattice()) {
        const OneMotive md = cartier_dual_motive(free_part(doc.motives.at(a[0])));
        const bool iso = find_isomorphism(hs, realize_bdr(md, doc.registry)).has_value();
        r.result["isomorphic"] = iso ? "yes" : "no";
      } else {
        r.result["isomorphic"] = "not checked";
      }
    } else if (c == "tensor") {
      r.tag = "tensor";
      r.result = triple_to_json(tensor(object(a[0]), object(a[1])));
    } else if (c == "twist") {
      r.tag = "twist";
      const int tw = q.options.value("q", opt.default_twist);
      r.result = triple_to_json(tate_twist(object(a[0]), tw, doc.registry));
      r.result["q"] = tw;
    } else if (c == "hphi") {
      r.tag = "period-cohomology";
      r.result = hom_json(period_cohomology(object(a[0])));
    } else if (c == "keru") {
      r.tag = "ker-u";
      const OneMotive& m = doc.motives.at(a[0]);
      const KerU k = ker_u(m, doc.registry);
      r.result = lattice_to_json(k.free_part);
      r.result["torsion"] = vector_json(k.torsion);
      r.result["period_cohomology_rank"] = period_cohomology(object(a[0])).rank();
    } else if (c == "biext") {
      r.tag = "biext";
      const BiextensionGroup b = biext_group(object(a[0]), object(a[1]), doc.registry);
      r.result = hom_json(b.group);
      if (b.alternating) r.result["alternating"] = lattice_to_json(*b.alternating);
    } else if (c == "albanese") {
      r.tag = "albanese";
      const AlbaneseMotive alb = albanese_motive(curve(a[0]));
      Json images = Json::array();
      for (const auto& p : alb.images) images.push_back(p.to_string());
      r.result = {{"lattice_rank", alb.lattice_rank},
                  {"target", alb.target_trivial ? "0" : "E"},
                  {"divisor_basis", int_matrix_json(alb.divisor_basis)},
                  {"images", images}};
    } else if (c == "report") {
      r.tag = "period-conjecture";
      const CurveModel cm = curve(a[0]);
      const int lo = q.options.value("q_min", -1), hi = q.options.value("q_max", 2);
      Json rows = Json::array();
      for (const auto& row : period_conjecture_report(cm, lo, hi))
        rows.push_back({{"q", row.q},
                        {"rank", row.rank},
                        {"tag", row.tag},
                        {"completeness", row.exact ? "exact" : "bound-limited at " + std::to_string(cm.relation_bound)}});
      r.result = {{"rows", rows}};
      if (!cm.punctures.empty()) {
        const KerU1 k = ker_u1_star(cm);
        r.result["ker_u1_generators"] = int_matrix_json(k.divisors);
      }
    } else if (c == "fullnesscheck") {
      r.tag = "full-faithfulness";
      const OneMotive& m = doc.motives.at(a[0]);
      const OneMotive& n = doc.motives.at(a[1]);
      const auto hm = hom_motives(free_part(m), free_part(n), doc.registry);
      const auto ht = hom_group(object(a[0]), object(a[1]));
      r.result = {{"motive_rank", hm.rank()},
                  {"triple_rank", ht.rank()},
                  {"triple_torsion", vector_json(ht.torsion)},
                  {"agree", hm.rank() == ht.rank() && ht.torsion.empty()}};
    }
  }
};

std::string compact(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void table_lines(std::ostringstream& out, const Json& v, const std::string& indent) {
  for (const auto& [k, val] : v.items()) {
    if (val.is_object()) {
      out << indent << k << ":\n";
      table_lines(out, val, indent + "  ");
    } else if (val.is_array() && !val.empty() && val[0].is_object()) {
      out << indent << k << ":\n";
      for (const auto& e : val) {
        out << indent << "  -";
        for (const auto& [ek, ev] : e.items()) out << " " << ek << "=" << compact(ev);
        out << "\n";
      }
    } else {
      out << indent << k << ": " << compact(val) << "\n";
    }
  }
}

}  // namespace

SchemaError::SchemaError(std::vector<SchemaIssue> issues)
    : Error([&] {
        std::string msg = "invalid session document";
        for (const auto& i : issues) msg += "\n  " + (i.location.empty() ? "/" : i.location) + ": " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

Document parse_session(const Json& doc) { return Parser{}.run(doc); }

Document parse_session(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError({{"", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_session(j);
}

Json emit_session(const Document& doc) { return doc.source; }

Json lattice_to_json(const Lattice& l) {
  Json basis = Json::array();
  for (std::size_t c = 0; c < l.rank(); ++c) basis.push_back(vector_json(l.basis_vector(c)));
  return {{"rank", l.rank()}, {"basis", basis}};
}

Json triple_to_json(const PeriodTriple& h) {
  Json out = {{"side", h.side() == Side::Homological ? "homological" : "cohomological"},
              {"free_rank", h.free_rank()},
              {"torsion", vector_json(h.torsion())},
              {"k_dim", h.k_dim()},
              {"iso", h.iso()}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < h.matrix().rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < h.matrix().cols(); ++j) row.push_back(h.matrix()(i, j).to_string());
    rows.push_back(row);
  }
  out["matrix"] = rows;
  if (h.weights()) {
    Json steps = Json::array();
    for (const auto& s : *h.weights()) steps.push_back({{"weight", s.weight}, {"basis", lattice_to_json(s.lattice)["basis"]}});
    out["weights"] = steps;
  }
  if (h.hodge()) {
    Json cols = Json::array();
    for (std::size_t c = 0; c < h.hodge()->cols(); ++c) {
      Json col = Json::array();
      for (std::size_t r = 0; r < h.hodge()->rows(); ++r) col.push_back((*h.hodge())(r, c).to_string());
      cols.push_back(col);
    }
    out["hodge"] = cols;
  }
  return out;
}

QueryResult run_query(const Document& doc, const Query& q, std::size_t index, const RunOptions& options) {
  return Runner{doc, options}.run(q, index);
}

std::vector<QueryResult> run_session(const Document& doc, const RunOptions& options) {
  std::vector<QueryResult> out(doc.queries.size());
  const Runner runner{doc, options};
  if (options.jobs <= 1) {
    for (std::size_t i = 0; i < doc.queries.size(); ++i) out[i] = runner.run(doc.queries[i], i);
    return out;
  }
  for (std::size_t start = 0; start < doc.queries.size(); start += options.jobs) {
    std::vector<std::future<QueryResult>> batch;
    const std::size_t end = std::min(doc.queries.size(), start + options.jobs);
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(std::launch::async, [&runner, &doc, i] { return runner.run(doc.queries[i], i); }));
    for (std::size_t i = start; i < end; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

Json results_to_json(const std::vector<QueryResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) {
    Json e = {{"index", r.index}, {"command", r.command}, {"args", r.args}};
    if (r.error.empty()) {
      e["tag"] = r.tag;
      e["result"] = r.result;
    } else {
      e["error"] = r.error;
    }
    arr.push_back(e);
  }
  return {{"schema_version", kSchemaVersion}, {"results", arr}};
}

std::string results_to_table(const std::vector<QueryResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << "#" << r.index << " " << r.command;
    for (const auto& a : r.args) out << " " << a;
    if (!r.error.empty()) {
      out << "\n  error: " << r.error << "\n";
      continue;
    }
    out << "  [" << r.tag << "]\n";
    table_lines(out, r.result, "  ");
  }
  return out.str();
}

}  // namespace permot::session
