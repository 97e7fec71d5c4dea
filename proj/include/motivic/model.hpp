#ifndef MOTIVIC_MODEL_HPP
#define MOTIVIC_MODEL_HPP

#include <map>
#include <string>
#include <vector>

#include "motivic/classes.hpp"
#include "motivic/cones.hpp"

namespace motivic {

using Face = std::vector<std::string>;  // divisor ids, in model order

struct DivisorData {
  std::string id;
  Rat a;  // Mather log discrepancy of the divisorial valuation
};

struct StratumData {
  Face I;
  AtomicClass cls;
};

struct SncModel {
  std::vector<DivisorData> divisors;
  std::vector<StratumData> strata;
  std::map<std::string, std::map<std::string, Rat>> ideals;  // id -> divisor -> b_i

  long divisor_index(const std::string& id) const;  // -1 when absent
  const DivisorData* divisor(const std::string& id) const;
  const StratumData* stratum(const Face& I) const;
  bool has_stratum(const Face& I) const { return stratum(I) != nullptr; }
  Face sorted_face(Face I) const;  // canonical order = divisor order
  QVec discrepancies(const Face& I) const;
  bool integer_discrepancies() const;
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string str() const;
};

ValidationReport validate(const SncModel& model);

struct BlowupMet {
  AtomicClass inside;   // class of C intersected with the stratum
  AtomicClass outside;  // class of the stratum minus C
};

struct BlowupSpec {
  Face T;          // divisors containing the center
  long c = 0;      // codimension of the center
  std::string new_id = "E0";
  std::map<Face, BlowupMet> met;  // strata meeting the center
};

struct ModelMorphism {
  std::vector<std::string> source_divisors;
  std::vector<std::string> target_divisors;
  QMat matrix;  // rows by source divisor, columns by target divisor; b*E_j = sum_i a_ij D_i
  std::map<Symbol, Symbol> class_map;  // symbol renaming under push-forward

  Face face_image(const Face& I) const;                    // J(I)
  QMat face_matrix(const Face& I, const Face& J) const;    // x on I -> y on J
  Symbol map_symbol(const Symbol& s) const;
  MotClass map_class(const MotClass& c) const;
  AtomicClass map_class(const AtomicClass& c) const;
  ModelMorphism compose(const ModelMorphism& then) const;  // this: X->Y, then: Y->Z
};

ValidationReport validate_morphism(const SncModel& source, const SncModel& target,
                                   const ModelMorphism& m);

// Validates the spec against the model; throws InvalidSpec on failure.
void check_blowup_spec(const SncModel& model, const BlowupSpec& spec);

// Smooth transversal blow-up: returns the new model (exceptional divisor
// first) and the morphism from the new model onto the old one.
std::pair<SncModel, ModelMorphism> blow_up(const SncModel& model, const BlowupSpec& spec);

// Image of a face-interior point under the induced map of skeleta.
std::pair<Face, QVec> valuation_map(const ModelMorphism& m, const Face& I, const QVec& point);

// min over divisors with b_i > 0 of a_i / b_i; throws TrivialIdeal.
Rat mather_lct(const SncModel& model, const std::string& ideal_id);

// The full skeleton as a PolySet: one full orthant per stratum.
PolySet full_skeleton(const SncModel& model);

// Preimage of a target-model set under the morphism, as source-model pieces.
PolySet preimage_set(const SncModel& source, const ModelMorphism& m, const PolySet& target_set);

// Preimage of one relatively open piece inside a chosen source face.
std::vector<FaceCone> preimage_cones(const ModelMorphism& m, const FaceCone& target_piece,
                                     const Face& source_face);

// Images of a cone's rays, triangulated in the target face.
std::vector<FaceCone> image_cone(const ModelMorphism& m, const FaceCone& cone);

}  // namespace motivic

#endif
