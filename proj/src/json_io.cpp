#include "motivic/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace motivic {

Json to_json(const Rat& r) { return rat_str(r); }

Json to_json(const Laurent& l) {
  Json a = Json::array();
  for (const auto& [e, c] : l.coeffs()) a.push_back(Json::array({e, c.str()}));
  return a;
}

Json to_json(const AtomicScalar& s) {
  Json j;
  j["num"] = to_json(s.num());
  Json den = Json::array();
  for (const auto& [i, m] : s.den())
    for (int k = 0; k < m; ++k) den.push_back(i);
  j["den"] = den;
  return j;
}

Json to_json(const Monomial& m) {
  Json a = Json::array();
  for (const auto& s : m.factors()) a.push_back(s);
  return a;
}

Json to_json(const MotClass& c) {
  Json terms = Json::array();
  for (const auto& [m, v] : c.terms())
    terms.push_back(Json{{"monomial", to_json(m)}, {"coeff", rat_str(v)}});
  return Json{{"terms", terms}};
}

Json to_json(const AtomicClass& c) {
  Json terms = Json::array();
  for (const auto& [m, s] : c.terms())
    terms.push_back(Json{{"monomial", to_json(m)}, {"scalar", to_json(s)}});
  return Json{{"terms", terms}};
}

Json to_json(const SncModel& m) {
  Json divisors = Json::array();
  for (const auto& d : m.divisors) divisors.push_back(Json{{"id", d.id}, {"a", rat_str(d.a)}});
  Json strata = Json::array();
  for (const auto& s : m.strata)
    strata.push_back(Json{{"I", s.I}, {"class", to_json(s.cls)}});
  Json ideals = Json::object();
  for (const auto& [id, orders] : m.ideals) {
    Json o = Json::object();
    for (const auto& [div, b] : orders) o[div] = rat_str(b);
    ideals[id] = o;
  }
  return Json{{"divisors", divisors}, {"strata", strata}, {"ideals", ideals}};
}

Json to_json(const FaceCone& c) {
  Json rays = Json::array();
  for (const auto& r : c.rays) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(rat_str(x));
    rays.push_back(row);
  }
  return Json{{"face", c.face}, {"rays", rays}};
}

Json to_json(const PolySet& s) {
  Json pieces = Json::array();
  for (const auto& p : s.pieces) pieces.push_back(to_json(p));
  return Json{{"pieces", pieces}};
}

Json to_json(const ExpDensity& d) {
  Json a = Json::array();
  for (const auto& t : d.terms()) {
    Json lin = Json::array();
    for (const auto& x : t.lin) lin.push_back(rat_str(x));
    Json e{{"coeff", rat_str(t.coeff)}, {"powers", t.powers}, {"linform", lin}};
    if (t.aff != 0) e["offset"] = rat_str(t.aff);
    a.push_back(e);
  }
  return a;
}

Json to_json(const MotivicFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms)
    terms.push_back(Json{{"coeff", to_json(t.coeff)},
                         {"face", t.piece.face},
                         {"rays", to_json(t.piece)["rays"]},
                         {"density", to_json(t.density)}});
  return Json{{"terms", terms}};
}

Json to_json(const FunctionV& g) {
  Json pieces = Json::array();
  for (const auto& p : g.pieces)
    pieces.push_back(Json{{"coeff", to_json(p.coeff)},
                          {"face", p.carrier.face},
                          {"rays", to_json(p.carrier)["rays"]},
                          {"density", to_json(p.density)}});
  return Json{{"pieces", pieces}};
}

Json to_json(const ModelMorphism& m) {
  Json rows = Json::array();
  for (const auto& r : m.matrix) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(static_cast<long>(num(x)));
    rows.push_back(row);
  }
  Json cm = Json::object();
  for (const auto& [a, b] : m.class_map) cm[a] = b;
  return Json{{"source", m.source_divisors}, {"target", m.target_divisors}, {"matrix", rows},
              {"classMap", cm}};
}

Json to_json(const LatticeCell& c) {
  Json off = Json::array();
  for (const auto& v : c.offset) off.push_back(v.str());
  Json gens = Json::array();
  for (const auto& g : c.gens) {
    Json row = Json::array();
    for (const auto& x : g) row.push_back(x.str());
    gens.push_back(row);
  }
  return Json{{"face", c.face}, {"offset", off}, {"generators", gens}};
}

Json to_json(const PresburgerSet& s) {
  Json cells = Json::array();
  for (const auto& c : s.cells) cells.push_back(to_json(c));
  return Json{{"cells", cells}};
}

Json to_json(const AtomicTerm& t) {
  Json lin = Json::array();
  for (const auto& x : t.beta.lin) lin.push_back(rat_str(x));
  return Json{{"coeff", to_json(t.coeff)},
              {"cell", to_json(t.cell)},
              {"beta", Json{{"lin", lin}, {"cst", rat_str(t.beta.cst)}}},
              {"powers", t.powers}};
}

Json to_json(const CheckReport& r) {
  return Json{{"equal", r.equal}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"detail", r.detail}};
}

Json to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues) issues.push_back(Json{{"path", i.path}, {"message", i.message}});
  return Json{{"valid", r.ok()}, {"issues", issues}};
}

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw ParseError("expected a rational as \"p/q\" string");
}

Laurent laurent_from_json(const Json& j) {
  Laurent l;
  for (const auto& pair : j) {
    long e = pair.at(0).get<long>();
    Int c(pair.at(1).is_string() ? pair.at(1).get<std::string>()
                                 : std::to_string(pair.at(1).get<long>()));
    l.set(e, l.coeff(e) + c);
  }
  return l;
}

AtomicScalar scalar_from_json(const Json& j) {
  std::map<long, int> den;
  if (j.contains("den"))
    for (const auto& i : j.at("den")) den[i.get<long>()] += 1;
  return AtomicScalar(laurent_from_json(j.at("num")), den);
}

MotClass motclass_from_json(const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "0") return MotClass();
    if (s == "1") return MotClass(Rat(1));
    return MotClass::sym(s);
  }
  MotClass c;
  for (const auto& t : j.at("terms")) {
    std::vector<Symbol> fs;
    for (const auto& f : t.at("monomial")) fs.push_back(f.get<std::string>());
    c.add_term(Monomial(std::move(fs)), rat_from_json(t.at("coeff")));
  }
  return c;
}

AtomicClass atomicclass_from_json(const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "0") return AtomicClass();
    if (s == "1") return AtomicClass(AtomicScalar::one());
    return AtomicClass::sym(s);
  }
  AtomicClass c;
  for (const auto& t : j.at("terms")) {
    std::vector<Symbol> fs;
    for (const auto& f : t.at("monomial")) fs.push_back(f.get<std::string>());
    c.add_term(Monomial(std::move(fs)), scalar_from_json(t.at("scalar")));
  }
  return c;
}

SncModel model_from_json(const Json& j) {
  SncModel m;
  for (const auto& d : j.at("divisors"))
    m.divisors.push_back({d.at("id").get<std::string>(), rat_from_json(d.at("a"))});
  for (const auto& s : j.at("strata")) {
    StratumData st;
    for (const auto& i : s.at("I")) st.I.push_back(i.get<std::string>());
    st.I = m.sorted_face(st.I);
    st.cls = atomicclass_from_json(s.at("class"));
    m.strata.push_back(std::move(st));
  }
  if (j.contains("ideals"))
    for (const auto& [id, orders] : j.at("ideals").items())
      for (const auto& [div, b] : orders.items()) m.ideals[id][div] = rat_from_json(b);
  return m;
}

FaceCone facecone_from_json(const Json& j) {
  FaceCone c;
  for (const auto& f : j.at("face")) c.face.push_back(f.get<std::string>());
  for (const auto& r : j.at("rays")) {
    QVec ray;
    for (const auto& x : r) ray.push_back(rat_from_json(x));
    c.rays.push_back(std::move(ray));
  }
  return c;
}

PolySet polyset_from_json(const Json& j, const SncModel& model) {
  if (j.contains("full") && j.at("full").get<bool>()) return full_skeleton(model);
  PolySet s;
  for (const auto& p : j.at("pieces")) {
    FaceCone c = facecone_from_json(p);
    c.face = model.sorted_face(c.face);
    s.pieces.push_back(std::move(c));
  }
  return s;
}

ExpDensity density_from_json(const Json& j, size_t dim) {
  ExpDensity d(dim);
  for (const auto& t : j) {
    ExpTerm e;
    e.coeff = rat_from_json(t.at("coeff"));
    e.powers = t.contains("powers") ? t.at("powers").get<std::vector<long>>()
                                    : std::vector<long>(dim, 0);
    if (e.powers.size() != dim) throw ParseError("density powers dimension mismatch");
    e.lin = QVec(dim, Rat(0));
    if (t.contains("linform")) {
      size_t i = 0;
      for (const auto& x : t.at("linform")) {
        if (i >= dim) throw ParseError("density linform dimension mismatch");
        e.lin[i++] = rat_from_json(x);
      }
    }
    e.aff = t.contains("offset") ? rat_from_json(t.at("offset")) : Rat(0);
    d.add_term(e);
  }
  return d;
}

MotivicFunction function_from_json(const Json& j, const SncModel& model) {
  MotivicFunction f;
  for (const auto& t : j.at("terms")) {
    MotivicTerm term;
    term.coeff = motclass_from_json(t.at("coeff"));
    for (const auto& i : t.at("face")) term.piece.face.push_back(i.get<std::string>());
    term.piece.face = model.sorted_face(term.piece.face);
    if (t.contains("rays")) {
      for (const auto& r : t.at("rays")) {
        QVec ray;
        for (const auto& x : r) ray.push_back(rat_from_json(x));
        term.piece.rays.push_back(std::move(ray));
      }
    } else {
      for (size_t i = 0; i < term.piece.face.size(); ++i) {
        QVec e(term.piece.face.size(), Rat(0));
        e[i] = 1;
        term.piece.rays.push_back(std::move(e));
      }
    }
    term.density = t.contains("density")
                       ? density_from_json(t.at("density"), term.piece.face.size())
                       : ExpDensity::constant(term.piece.face.size(), Rat(1));
    f.terms.push_back(std::move(term));
  }
  return f;
}

FunctionV functionv_from_json(const Json& j, const SncModel& model) {
  FunctionV g;
  for (const auto& t : j.at("pieces")) {
    FunctionPiece p;
    p.coeff = motclass_from_json(t.at("coeff"));
    for (const auto& i : t.at("face")) p.carrier.face.push_back(i.get<std::string>());
    p.carrier.face = model.sorted_face(p.carrier.face);
    for (const auto& r : t.at("rays")) {
      QVec ray;
      for (const auto& x : r) ray.push_back(rat_from_json(x));
      p.carrier.rays.push_back(std::move(ray));
    }
    p.density = density_from_json(t.at("density"), p.carrier.face.size());
    g.pieces.push_back(std::move(p));
  }
  return g;
}

BlowupSpec blowup_from_json(const Json& j, const SncModel& model) {
  BlowupSpec s;
  for (const auto& i : j.at("T")) s.T.push_back(i.get<std::string>());
  s.T = model.sorted_face(s.T);
  s.c = j.at("c").get<long>();
  if (j.contains("newId")) s.new_id = j.at("newId").get<std::string>();
  for (const auto& e : j.at("met")) {
    Face I;
    for (const auto& i : e.at("I")) I.push_back(i.get<std::string>());
    I = model.sorted_face(I);
    BlowupMet m;
    if (e.contains("inside")) m.inside = atomicclass_from_json(e.at("inside"));
    if (e.contains("outside")) m.outside = atomicclass_from_json(e.at("outside"));
    s.met[I] = std::move(m);
  }
  return s;
}

ModelMorphism morphism_from_json(const Json& j) {
  ModelMorphism m;
  for (const auto& i : j.at("source")) m.source_divisors.push_back(i.get<std::string>());
  for (const auto& i : j.at("target")) m.target_divisors.push_back(i.get<std::string>());
  for (const auto& r : j.at("matrix")) {
    QVec row;
    for (const auto& x : r) row.push_back(rat_from_json(x));
    m.matrix.push_back(std::move(row));
  }
  if (j.contains("classMap"))
    for (const auto& [a, b] : j.at("classMap").items()) m.class_map[a] = b.get<std::string>();
  return m;
}

LatticeCell cell_from_json(const Json& j) {
  LatticeCell c;
  for (const auto& i : j.at("face")) c.face.push_back(i.get<std::string>());
  for (const auto& v : j.at("offset"))
    c.offset.push_back(Int(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>())));
  if (j.contains("generators"))
    for (const auto& g : j.at("generators")) {
      std::vector<Int> col;
      for (const auto& x : g)
        col.push_back(Int(x.is_string() ? x.get<std::string>() : std::to_string(x.get<long>())));
      c.gens.push_back(std::move(col));
    }
  return c;
}

PresburgerSet presburger_from_json(const Json& j, const SncModel& model) {
  if (j.contains("full") && j.at("full").get<bool>()) return full_skeleton_cells(model);
  PresburgerSet s;
  for (const auto& c : j.at("cells")) {
    LatticeCell cell = cell_from_json(c);
    cell.face = model.sorted_face(cell.face);
    s.cells.push_back(std::move(cell));
  }
  return s;
}

std::vector<AtomicTerm> atomic_terms_from_json(const Json& j) {
  std::vector<AtomicTerm> out;
  for (const auto& t : j.at("terms")) {
    AtomicTerm a;
    a.coeff = t.contains("coeff") ? atomicclass_from_json(t.at("coeff"))
                                  : AtomicClass(AtomicScalar::one());
    a.cell = cell_from_json(t.at("cell"));
    size_t n = a.cell.face.size();
    a.beta = AffineForm::constant(n, Rat(0));
    if (t.contains("beta")) {
      const auto& b = t.at("beta");
      if (b.contains("lin")) {
        size_t i = 0;
        for (const auto& x : b.at("lin")) a.beta.lin[i++] = rat_from_json(x);
      }
      if (b.contains("cst")) a.beta.cst = rat_from_json(b.at("cst"));
    }
    a.powers = t.contains("powers") ? t.at("powers").get<std::vector<long>>()
                                    : std::vector<long>(n, 0);
    out.push_back(std::move(a));
  }
  return out;
}

std::map<Symbol, long> chi_table_from_json(const Json& j) {
  std::map<Symbol, long> table;
  for (const auto& [k, v] : j.items())
    table[k] = v.is_string() ? std::stol(v.get<std::string>()) : v.get<long>();
  return table;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

}  // namespace motivic
