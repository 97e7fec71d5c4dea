#ifndef MOTIVIC_JSON_IO_HPP
#define MOTIVIC_JSON_IO_HPP

#include <nlohmann/json_fwd.hpp>

#include "motivic/atomic.hpp"
#include "motivic/functions.hpp"

namespace motivic {

using Json = nlohmann::json;

Json to_json(const Rat& r);
Json to_json(const Laurent& l);
Json to_json(const AtomicScalar& s);
Json to_json(const Monomial& m);
Json to_json(const MotClass& c);
Json to_json(const AtomicClass& c);
Json to_json(const SncModel& m);
Json to_json(const FaceCone& c);
Json to_json(const PolySet& s);
Json to_json(const ExpDensity& d);
Json to_json(const MotivicFunction& f);
Json to_json(const FunctionV& g);
Json to_json(const ModelMorphism& m);
Json to_json(const LatticeCell& c);
Json to_json(const PresburgerSet& s);
Json to_json(const AtomicTerm& t);
Json to_json(const CheckReport& r);
Json to_json(const ValidationReport& r);

Rat rat_from_json(const Json& j);
Laurent laurent_from_json(const Json& j);
AtomicScalar scalar_from_json(const Json& j);
MotClass motclass_from_json(const Json& j);
AtomicClass atomicclass_from_json(const Json& j);
SncModel model_from_json(const Json& j);
FaceCone facecone_from_json(const Json& j);
PolySet polyset_from_json(const Json& j, const SncModel& model);
ExpDensity density_from_json(const Json& j, size_t dim);
MotivicFunction function_from_json(const Json& j, const SncModel& model);
FunctionV functionv_from_json(const Json& j, const SncModel& model);
BlowupSpec blowup_from_json(const Json& j, const SncModel& model);
ModelMorphism morphism_from_json(const Json& j);
LatticeCell cell_from_json(const Json& j);
PresburgerSet presburger_from_json(const Json& j, const SncModel& model);
std::vector<AtomicTerm> atomic_terms_from_json(const Json& j);
std::map<Symbol, long> chi_table_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace motivic

#endif
