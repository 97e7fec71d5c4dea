#include "motivic/measure.hpp"

#include <sstream>

namespace motivic {

MotivicFunction MotivicFunction::one(const SncModel& model) {
  MotivicFunction f;
  for (const auto& piece : full_skeleton(model).pieces)
    f.terms.push_back({MotClass(Rat(1)), piece, ExpDensity::constant(piece.face.size(), Rat(1))});
  return f;
}

MotClass measure(const SncModel& model, const PolySet& s, std::vector<std::string>* warnings) {
  MotClass total;
  for (const auto& piece : s.pieces) {
    const StratumData* st = model.stratum(piece.face);
    if (!st) throw InvalidSpec("set references a missing stratum " + Monomial(piece.face).str());
    if (piece.dim() < piece.ambient()) {
      if (warnings)
        warnings->push_back("piece of dimension " + std::to_string(piece.dim()) + " in face " +
                            Monomial(piece.face).str() + " has measure zero; skipped");
      continue;
    }
    ExpDensity dens = ExpDensity::exponential(scale(model.discrepancies(piece.face), Rat(-1)));
    Rat v = integrate_cone(dens, piece.rays);
    total += st->cls.limit_L1() * v;
  }
  return total;
}

MotClass integrate(const SncModel& model, const MotivicFunction& f) {
  MotClass total;
  for (const auto& term : f.terms) {
    const StratumData* st = model.stratum(term.piece.face);
    if (!st) throw InvalidSpec("function references a missing stratum");
    if (term.piece.dim() != term.piece.ambient())
      throw InvalidSpec("motivic function pieces must be full-dimensional in their faces");
    QVec a = model.discrepancies(term.piece.face);
    ExpDensity dens = term.density.shift_exponent(scale(a, Rat(-1)));
    Rat v = integrate_cone(dens, term.piece.rays);
    total += (term.coeff * st->cls.limit_L1()) * v;
  }
  return total;
}

MotClass integrate_ideal_power(const SncModel& model, const std::string& ideal_id, const Rat& s) {
  auto it = model.ideals.find(ideal_id);
  if (it == model.ideals.end()) throw InvalidSpec("unknown ideal '" + ideal_id + "'");
  auto order = [&](const std::string& div) {
    auto o = it->second.find(div);
    return o == it->second.end() ? Rat(0) : o->second;
  };
  for (const auto& d : model.divisors)
    if (d.a + s * order(d.id) <= 0)
      throw NonConvergent("a_i + s b_i <= 0 at divisor '" + d.id + "'");
  MotClass total;
  for (const auto& st : model.strata) {
    Rat w(1);
    for (const auto& id : st.I) w *= model.divisor(id)->a + s * order(id);
    total += st.cls.limit_L1() * (Rat(1) / w);
  }
  return total;
}

MotClass stringy_class(const SncModel& model) { return measure(model, full_skeleton(model)); }

Rat euler_measure(const SncModel& model, const PolySet& s, const std::map<Symbol, long>& table) {
  return chi_specialize(measure(model, s), table);
}

MotivicFunction pullback(const SncModel& source, const ModelMorphism& m, const MotivicFunction& f) {
  MotivicFunction out;
  for (const auto& st : source.strata) {
    Face J = m.face_image(st.I);
    QMat b = m.face_matrix(st.I, J);
    for (const auto& term : f.terms) {
      if (term.piece.face != J) continue;
      // Compose the density with the valuation map y = B x.
      ExpDensity dens = term.density.substitute(b, QVec(J.size(), Rat(0)));
      for (const auto& cone : preimage_cones(m, term.piece, st.I)) {
        if (cone.dim() != cone.ambient()) continue;  // measure-zero preimage piece
        out.terms.push_back({term.coeff, cone, dens});
      }
    }
  }
  return out;
}

CheckReport check_blowup_invariance(const SncModel& model, const BlowupSpec& spec, const PolySet& s,
                                    const MotivicFunction* f) {
  auto [blown, morph] = blow_up(model, spec);
  MotClass lhs, rhs;
  if (f) {
    lhs = integrate(model, *f);
    rhs = integrate(blown, pullback(blown, morph, *f));
  } else {
    lhs = measure(model, s);
    PolySet pre = preimage_set(blown, morph, s);
    std::vector<std::string> warn;
    rhs = measure(blown, pre, &warn);
  }
  CheckReport rep;
  rep.lhs = lhs.str();
  rep.rhs = rhs.str();
  rep.equal = lhs == rhs;
  rep.detail = rep.equal ? "measures agree" : "measures differ";
  return rep;
}

CheckReport change_of_variables_check(const SncModel& model_over_y, const std::string& jacobian_ideal,
                                      const MotivicFunction* f) {
  auto it = model_over_y.ideals.find(jacobian_ideal);
  if (it == model_over_y.ideals.end()) throw InvalidSpec("unknown ideal '" + jacobian_ideal + "'");
  auto order = [&](const std::string& div) {
    auto o = it->second.find(div);
    return o == it->second.end() ? Rat(0) : o->second;
  };
  MotivicFunction base = f ? *f : MotivicFunction::one(model_over_y);

  // Left side: integrate f * e^{-sum j_i x_i} against the Y-discrepancies.
  MotivicFunction weighted = base;
  for (auto& term : weighted.terms) {
    QVec j(term.piece.face.size(), Rat(0));
    for (size_t k = 0; k < term.piece.face.size(); ++k) j[k] = -order(term.piece.face[k]);
    term.density = term.density.shift_exponent(j);
  }
  MotClass lhs = integrate(model_over_y, weighted);

  // Right side: integrate f on the model with a_i shifted by j_i.
  SncModel shifted = model_over_y;
  for (auto& d : shifted.divisors) d.a += order(d.id);
  MotClass rhs = integrate(shifted, base);

  CheckReport rep;
  rep.lhs = lhs.str();
  rep.rhs = rhs.str();
  rep.equal = lhs == rhs;
  rep.detail = rep.equal ? "change-of-variables identity holds" : "identity fails";
  return rep;
}

}  // namespace motivic
