#include "motivic/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace motivic {

long SncModel::divisor_index(const std::string& id) const {
  for (size_t i = 0; i < divisors.size(); ++i)
    if (divisors[i].id == id) return static_cast<long>(i);
  return -1;
}

const DivisorData* SncModel::divisor(const std::string& id) const {
  long i = divisor_index(id);
  return i < 0 ? nullptr : &divisors[static_cast<size_t>(i)];
}

const StratumData* SncModel::stratum(const Face& I) const {
  Face key = sorted_face(I);
  for (const auto& s : strata)
    if (s.I == key) return &s;
  return nullptr;
}

Face SncModel::sorted_face(Face I) const {
  std::sort(I.begin(), I.end(), [this](const std::string& a, const std::string& b) {
    return divisor_index(a) < divisor_index(b);
  });
  return I;
}

QVec SncModel::discrepancies(const Face& I) const {
  QVec a;
  a.reserve(I.size());
  for (const auto& id : I) {
    const DivisorData* d = divisor(id);
    if (!d) throw InvalidSpec("unknown divisor '" + id + "'");
    a.push_back(d->a);
  }
  return a;
}

bool SncModel::integer_discrepancies() const {
  return std::all_of(divisors.begin(), divisors.end(),
                     [](const DivisorData& d) { return den(d.a) == 1; });
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  if (issues.empty()) return "valid";
  for (const auto& i : issues) os << i.path << ": " << i.message << "\n";
  return os.str();
}

ValidationReport validate(const SncModel& model) {
  ValidationReport rep;
  auto issue = [&](const std::string& p, const std::string& m) { rep.issues.push_back({p, m}); };

  std::set<std::string> ids;
  for (size_t i = 0; i < model.divisors.size(); ++i) {
    const auto& d = model.divisors[i];
    std::string path = "divisors[" + std::to_string(i) + "]";
    if (d.id.empty()) issue(path, "empty divisor id");
    if (!ids.insert(d.id).second) issue(path, "duplicate divisor id '" + d.id + "'");
    if (d.a <= 0) issue(path, "discrepancy a must be > 0");
  }

  std::set<Face> family;
  for (size_t i = 0; i < model.strata.size(); ++i) {
    const auto& s = model.strata[i];
    std::string path = "strata[" + std::to_string(i) + "]";
    Face key = s.I;
    for (const auto& id : key)
      if (!ids.count(id)) issue(path, "unknown divisor '" + id + "'");
    if (model.sorted_face(key) != key) issue(path, "index set not in divisor order");
    if (std::set<std::string>(key.begin(), key.end()).size() != key.size())
      issue(path, "repeated divisor in index set");
    if (!family.insert(key).second) issue(path, "duplicate stratum");
  }
  if (!family.count(Face{})) issue("strata", "missing the empty index set");
  for (const auto& I : family) {
    // Downward closure: every subset obtained by removing one element.
    for (size_t k = 0; k < I.size(); ++k) {
      Face sub = I;
      sub.erase(sub.begin() + static_cast<long>(k));
      if (!family.count(sub))
        issue("strata", "family not downward closed at " + Monomial(I).str());
    }
  }
  for (const auto& d : model.divisors) {
    if (!family.count(Face{d.id}))
      issue("divisors", "divisor '" + d.id + "' appears in no stratum");
  }

  for (const auto& [iid, orders] : model.ideals) {
    for (const auto& [div, b] : orders) {
      if (!ids.count(div)) issue("ideals." + iid, "unknown divisor '" + div + "'");
      if (b < 0) issue("ideals." + iid, "vanishing order must be >= 0");
    }
  }
  return rep;
}

Face ModelMorphism::face_image(const Face& I) const {
  Face J;
  for (size_t j = 0; j < target_divisors.size(); ++j) {
    Rat s(0);
    for (const auto& id : I) {
      auto it = std::find(source_divisors.begin(), source_divisors.end(), id);
      if (it == source_divisors.end()) throw InvalidSpec("face uses a divisor outside the morphism");
      s += matrix[static_cast<size_t>(it - source_divisors.begin())][j];
    }
    if (s > 0) J.push_back(target_divisors[j]);
  }
  return J;
}

QMat ModelMorphism::face_matrix(const Face& I, const Face& J) const {
  QMat b = qmat(J.size(), I.size());
  for (size_t r = 0; r < J.size(); ++r) {
    size_t j = static_cast<size_t>(
        std::find(target_divisors.begin(), target_divisors.end(), J[r]) - target_divisors.begin());
    for (size_t c = 0; c < I.size(); ++c) {
      size_t i = static_cast<size_t>(
          std::find(source_divisors.begin(), source_divisors.end(), I[c]) - source_divisors.begin());
      b[r][c] = matrix[i][j];
    }
  }
  return b;
}

Symbol ModelMorphism::map_symbol(const Symbol& s) const {
  auto it = class_map.find(s);
  return it == class_map.end() ? s : it->second;
}

MotClass ModelMorphism::map_class(const MotClass& c) const {
  MotClass out;
  for (const auto& [m, v] : c.terms()) {
    std::vector<Symbol> fs;
    for (const auto& s : m.factors()) fs.push_back(map_symbol(s));
    out.add_term(Monomial(std::move(fs)), v);
  }
  return out;
}

AtomicClass ModelMorphism::map_class(const AtomicClass& c) const {
  AtomicClass out;
  for (const auto& [m, v] : c.terms()) {
    std::vector<Symbol> fs;
    for (const auto& s : m.factors()) fs.push_back(map_symbol(s));
    out.add_term(Monomial(std::move(fs)), v);
  }
  return out;
}

ModelMorphism ModelMorphism::compose(const ModelMorphism& then) const {
  if (target_divisors != then.source_divisors)
    throw InvalidSpec("morphisms do not compose: divisor lists disagree");
  ModelMorphism out;
  out.source_divisors = source_divisors;
  out.target_divisors = then.target_divisors;
  out.matrix = matmul(matrix, then.matrix);
  out.class_map = class_map;
  for (auto& [from, to] : out.class_map) to = then.map_symbol(to);
  for (const auto& [from, to] : then.class_map)
    if (!out.class_map.count(from)) out.class_map[from] = to;
  return out;
}

ValidationReport validate_morphism(const SncModel& source, const SncModel& target,
                                   const ModelMorphism& m) {
  ValidationReport rep;
  auto issue = [&](const std::string& p, const std::string& msg) { rep.issues.push_back({p, msg}); };
  for (const auto& id : m.source_divisors)
    if (!source.divisor(id)) issue("morphism.source", "unknown divisor '" + id + "'");
  for (const auto& id : m.target_divisors)
    if (!target.divisor(id)) issue("morphism.target", "unknown divisor '" + id + "'");
  if (m.matrix.size() != m.source_divisors.size())
    issue("morphism.matrix", "row count does not match source divisors");
  for (const auto& row : m.matrix) {
    if (row.size() != m.target_divisors.size())
      issue("morphism.matrix", "column count does not match target divisors");
    for (const auto& e : row)
      if (e < 0 || den(e) != 1) issue("morphism.matrix", "entries must be nonnegative integers");
  }
  if (!rep.ok()) return rep;
  for (size_t j = 0; j < m.target_divisors.size(); ++j) {
    bool nonzero = false;
    for (size_t i = 0; i < m.source_divisors.size(); ++i) nonzero |= m.matrix[i][j] != 0;
    if (!nonzero)
      issue("morphism.matrix", "target divisor '" + m.target_divisors[j] + "' has a zero column");
  }
  // Faces must map into faces: J(I) must be a stratum whenever I is.
  for (const auto& s : source.strata) {
    Face J = m.face_image(s.I);
    if (!target.has_stratum(J))
      issue("morphism", "image index set of " + Monomial(s.I).str() + " is not a stratum");
  }
  return rep;
}

void check_blowup_spec(const SncModel& model, const BlowupSpec& spec) {
  Face T = model.sorted_face(spec.T);
  for (const auto& id : T)
    if (!model.divisor(id)) throw InvalidSpec("blow-up: unknown divisor '" + id + "'");
  long t = static_cast<long>(T.size());
  if (spec.c < std::max<long>(t, 1)) throw InvalidSpec("blow-up: c must be >= max(|T|, 1)");
  if (spec.c == 1 && t == 1)
    throw InvalidSpec("blow-up: a codimension-one center inside D is the identity map");
  if (!T.empty() && !model.has_stratum(T))
    throw InvalidSpec("blow-up: T is not a stratum of the model");
  if (model.divisor(spec.new_id)) throw InvalidSpec("blow-up: new divisor id already in use");
  if (!spec.met.count(T)) throw InvalidSpec("blow-up: met must contain the index set T");
  auto contains_T = [&](const Face& I) {
    for (const auto& id : T)
      if (std::find(I.begin(), I.end(), id) == I.end()) return false;
    return true;
  };
  for (const auto& [I, met] : spec.met) {
    if (model.sorted_face(I) != I) throw InvalidSpec("blow-up: met key not in divisor order");
    if (!model.has_stratum(I)) throw InvalidSpec("blow-up: met key is not a stratum");
    if (!contains_T(I)) throw InvalidSpec("blow-up: met key does not contain T");
    // Relative downward closure between T and I.
    for (const auto& id : I) {
      if (std::find(T.begin(), T.end(), id) != T.end()) continue;
      Face sub;
      for (const auto& x : I)
        if (x != id) sub.push_back(x);
      if (model.has_stratum(sub) && !spec.met.count(sub))
        throw InvalidSpec("blow-up: met is not relatively downward closed at " + Monomial(sub).str());
    }
    if (spec.c == t) {
      if (!met.outside.is_zero())
        throw InvalidSpec("blow-up: stellar case (c = |T|) requires outside = 0");
      const StratumData* s = model.stratum(I);
      if (!met.inside.is_zero() && !met.inside.eq(s->cls))
        throw InvalidSpec("blow-up: stellar case requires inside = stratum class");
    } else if (met.inside.is_zero()) {
      throw InvalidSpec("blow-up: met entry with zero inside class");
    }
  }
  if (spec.c == t) {
    // Every stratum containing T must be met.
    for (const auto& s : model.strata) {
      if (!contains_T(s.I)) continue;
      if (!spec.met.count(s.I))
        throw InvalidSpec("blow-up: stellar case requires every stratum containing T to be met");
    }
  }
}

std::pair<SncModel, ModelMorphism> blow_up(const SncModel& model, const BlowupSpec& spec) {
  check_blowup_spec(model, spec);
  Face T = model.sorted_face(spec.T);
  long t = static_cast<long>(T.size());

  SncModel out;
  Rat a0 = Rat(spec.c - t);
  for (const auto& id : T) a0 += model.divisor(id)->a;
  out.divisors.push_back({spec.new_id, a0});
  for (const auto& d : model.divisors) out.divisors.push_back(d);

  auto in_T = [&](const std::string& id) { return std::find(T.begin(), T.end(), id) != T.end(); };

  // Old strata: untouched if not met, replaced by the outside class if met.
  std::map<Face, AtomicClass> new_strata;
  for (const auto& s : model.strata) {
    auto it = spec.met.find(s.I);
    if (it == spec.met.end()) {
      new_strata[s.I] += s.cls;
    } else if (!it->second.outside.is_zero()) {
      new_strata[s.I] += it->second.outside;
    }
  }

  // New strata {0} u J, aggregated over met strata I with I \ T <= J <= I.
  for (const auto& [I, met] : spec.met) {
    AtomicClass inside = met.inside;
    if (inside.is_zero()) inside = model.stratum(I)->cls;  // stellar shorthand
    Face fixed;                                            // I \ T
    Face free_part;                                        // I n T
    for (const auto& id : I) (in_T(id) ? free_part : fixed).push_back(id);
    size_t fn = free_part.size();
    long s = static_cast<long>(I.size());
    for (size_t mask = 0; mask < (size_t(1) << fn); ++mask) {
      Face J = fixed;
      for (size_t b = 0; b < fn; ++b)
        if (mask & (size_t(1) << b)) J.push_back(free_part[b]);
      J = model.sorted_face(J);
      long jn = static_cast<long>(J.size());
      AtomicScalar factor;
      if (jn == s) {
        long mdim = spec.c - t - 1;
        if (mdim < 0) continue;  // [P^{-1}] = 0
        factor = AtomicScalar(Laurent::projective_space(mdim));
      } else {
        Laurent lm1 = Laurent::mono(1) - Laurent::one();
        Laurent f = Laurent::mono(spec.c - t);
        for (long k = 0; k < s - 1 - jn; ++k) f = f * lm1;
        factor = AtomicScalar(f);
      }
      Face K;
      K.push_back(spec.new_id);
      for (const auto& id : J) K.push_back(id);
      new_strata[K] += inside * factor;
    }
  }

  for (auto& [I, cls] : new_strata) {
    if (cls.is_zero()) continue;
    out.strata.push_back({I, cls});
  }
  // Deterministic order: by size then by index sequence.
  std::sort(out.strata.begin(), out.strata.end(), [&](const StratumData& x, const StratumData& y) {
    if (x.I.size() != y.I.size()) return x.I.size() < y.I.size();
    auto key = [&](const Face& f) {
      std::vector<long> k;
      for (const auto& id : f) k.push_back(out.divisor_index(id));
      return k;
    };
    return key(x.I) < key(y.I);
  });

  // Ideal orders: b_0 = sum over T.
  for (const auto& [iid, orders] : model.ideals) {
    std::map<std::string, Rat> n = orders;
    Rat b0(0);
    for (const auto& id : T) {
      auto it = orders.find(id);
      if (it != orders.end()) b0 += it->second;
    }
    if (b0 != 0) n[spec.new_id] = b0;
    out.ideals[iid] = std::move(n);
  }

  ModelMorphism m;
  for (const auto& d : out.divisors) m.source_divisors.push_back(d.id);
  for (const auto& d : model.divisors) m.target_divisors.push_back(d.id);
  m.matrix = qmat(out.divisors.size(), model.divisors.size());
  for (size_t j = 0; j < model.divisors.size(); ++j) {
    if (in_T(model.divisors[j].id)) m.matrix[0][j] = 1;  // exceptional row
    m.matrix[j + 1][j] = 1;
  }
  return {std::move(out), std::move(m)};
}

std::pair<Face, QVec> valuation_map(const ModelMorphism& m, const Face& I, const QVec& point) {
  if (point.size() != I.size()) throw InvalidSpec("valuation_map: point dimension mismatch");
  for (const auto& x : point)
    if (x <= 0) throw InvalidSpec("valuation_map: point must be strictly positive on its face");
  Face J = m.face_image(I);
  QMat b = m.face_matrix(I, J);
  return {J, matvec(b, point)};
}

Rat mather_lct(const SncModel& model, const std::string& ideal_id) {
  auto it = model.ideals.find(ideal_id);
  if (it == model.ideals.end()) throw InvalidSpec("unknown ideal '" + ideal_id + "'");
  bool found = false;
  Rat best(0);
  for (const auto& [div, b] : it->second) {
    if (b <= 0) continue;
    const DivisorData* d = model.divisor(div);
    if (!d) throw InvalidSpec("ideal references unknown divisor '" + div + "'");
    Rat v = d->a / b;
    if (!found || v < best) best = v;
    found = true;
  }
  if (!found) throw TrivialIdeal("all vanishing orders are zero for '" + ideal_id + "'");
  return best;
}

PolySet full_skeleton(const SncModel& model) {
  PolySet s;
  for (const auto& st : model.strata) {
    FaceCone c;
    c.face = st.I;
    for (size_t i = 0; i < st.I.size(); ++i) {
      QVec e(st.I.size(), Rat(0));
      e[i] = 1;
      c.rays.push_back(std::move(e));
    }
    s.pieces.push_back(std::move(c));
  }
  return s;
}

std::vector<FaceCone> preimage_cones(const ModelMorphism& m, const FaceCone& target_piece,
                                     const Face& source_face) {
  QMat b = m.face_matrix(source_face, target_piece.face);
  size_t n = source_face.size();
  HSys target_h = cone_to_H(target_piece.rays, target_piece.face.size());
  HSys h;
  h.dim = n;
  for (const auto& r : target_h.eq) {
    QVec row(n, Rat(0));
    for (size_t c = 0; c < n; ++c)
      for (size_t k = 0; k < r.size(); ++k) row[c] += r[k] * b[k][c];
    h.eq.push_back(std::move(row));
  }
  auto push_pos = [&](const QVec& r) {
    QVec row(n, Rat(0));
    for (size_t c = 0; c < n; ++c)
      for (size_t k = 0; k < r.size(); ++k) row[c] += r[k] * b[k][c];
    h.pos.push_back(std::move(row));
  };
  for (const auto& r : target_h.pos) push_pos(r);
  for (size_t i = 0; i < n; ++i) {
    QVec row(n, Rat(0));
    row[i] = 1;
    h.pos.push_back(std::move(row));
  }
  if (target_piece.rays.empty()) {
    // Preimage of the vertex: y must vanish, i.e. Bx = 0 with x > 0.
    for (size_t k = 0; k < target_piece.face.size(); ++k) h.eq.push_back(b[k]);
  }
  std::vector<FaceCone> out;
  if (!strict_feasible(h)) return out;
  auto rays = cone_rays(h);
  for (auto& piece : triangulate_rays(rays)) {
    FaceCone c;
    c.face = source_face;
    c.rays = std::move(piece);
    out.push_back(std::move(c));
  }
  if (rays.empty()) {
    // The region is the origin alone; only meaningful for the empty face.
    if (n == 0) out.push_back({source_face, {}});
  }
  return out;
}

std::vector<FaceCone> image_cone(const ModelMorphism& m, const FaceCone& cone) {
  Face J = m.face_image(cone.face);
  QMat b = m.face_matrix(cone.face, J);
  std::vector<QVec> images;
  for (const auto& r : cone.rays) {
    QVec y = matvec(b, r);
    if (!is_zero(y)) images.push_back(std::move(y));
  }
  std::vector<FaceCone> out;
  if (images.empty()) {
    out.push_back({J, {}});
    return out;
  }
  for (auto& piece : triangulate_rays(images)) out.push_back({J, std::move(piece)});
  return out;
}

PolySet preimage_set(const SncModel& source, const ModelMorphism& m, const PolySet& target_set) {
  PolySet out;
  for (const auto& s : source.strata) {
    Face J = m.face_image(s.I);
    for (const auto& piece : target_set.pieces) {
      if (piece.face != J) continue;
      for (auto& c : preimage_cones(m, piece, s.I)) out.pieces.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace motivic
