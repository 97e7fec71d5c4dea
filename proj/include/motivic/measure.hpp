#ifndef MOTIVIC_MEASURE_HPP
#define MOTIVIC_MEASURE_HPP

#include "motivic/expdensity.hpp"
#include "motivic/model.hpp"

namespace motivic {

struct MotivicTerm {
  MotClass coeff;
  FaceCone piece;      // full-dimensional in its face
  ExpDensity density;  // on the face coordinates
};

struct MotivicFunction {
  std::vector<MotivicTerm> terms;

  static MotivicFunction one(const SncModel& model);  // the constant function 1
};

// Motivic measure of a polyhedral set. Lower-dimensional pieces contribute
// zero; a structured warning is appended for each.
MotClass measure(const SncModel& model, const PolySet& s, std::vector<std::string>* warnings = nullptr);

MotClass integrate(const SncModel& model, const MotivicFunction& f);

// Integral of |ideal|^s: sum over strata of [D_I]/(prod a_i + s b_i).
MotClass integrate_ideal_power(const SncModel& model, const std::string& ideal_id, const Rat& s);

MotClass stringy_class(const SncModel& model);

Rat euler_measure(const SncModel& model, const PolySet& s, const std::map<Symbol, long>& table);

struct CheckReport {
  bool equal = false;
  std::string lhs;
  std::string rhs;
  std::string detail;
};

// Pull-back of a motivic function along a model morphism (source above target).
MotivicFunction pullback(const SncModel& source, const ModelMorphism& m, const MotivicFunction& f);

// Computes the measure (or the integral of f, when given) on the model and on
// its blow-up with the pulled-back data, and compares exactly.
CheckReport check_blowup_invariance(const SncModel& model, const BlowupSpec& spec, const PolySet& s,
                                    const MotivicFunction* f = nullptr);

// Data-level change-of-variables identity: integrating against the Jacobian
// weight equals integrating on the model with shifted discrepancies.
CheckReport change_of_variables_check(const SncModel& model_over_y, const std::string& jacobian_ideal,
                                      const MotivicFunction* f = nullptr);

}  // namespace motivic

#endif
