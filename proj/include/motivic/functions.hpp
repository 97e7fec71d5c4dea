#ifndef MOTIVIC_FUNCTIONS_HPP
#define MOTIVIC_FUNCTIONS_HPP

#include "motivic/measure.hpp"

namespace motivic {

// One piece of a vector Function. The carrier may have any codimension inside
// its face; the density lives on the ambient face coordinates. The motivic
// coefficient is stored in absorbed form: the stratum-class weight enters a
// piece once, at lift time, and is never applied again (this is what makes
// push-forward a plain coefficient map and Fubini exact).
struct FunctionPiece {
  MotClass coeff;
  FaceCone carrier;
  ExpDensity density;
};

struct FunctionV {
  std::vector<FunctionPiece> pieces;

  FunctionV& operator+=(const FunctionV& o);
  friend FunctionV operator+(FunctionV a, const FunctionV& b) { return a += b; }
};

// Relative-codimension-0 embedding of a motivic function; integral-preserving.
FunctionV lift(const SncModel& model, const MotivicFunction& f);

// Fiber integration along the morphism with the relative form; output pieces
// carry the chamber cones on which the fiber bounds are a fixed affine
// structure. Throws NonIntegrable when a piece fails relative integrability.
FunctionV pushforward(const SncModel& source, const SncModel& target, const ModelMorphism& m,
                      const FunctionV& g);

// t_X: total integral; lower-dimensional carriers contribute with their own
// lattice-normalized volume.
MotClass integrate_V(const SncModel& model, const FunctionV& g);

// Pointwise product with a motivic function on the same model.
FunctionV multiply(const SncModel& model, const MotivicFunction& f, const FunctionV& g);

// Exact almost-everywhere equality, by common refinement per face and span.
bool functions_equal(const FunctionV& a, const FunctionV& b, std::string* why = nullptr);

CheckReport projection_formula_check(const SncModel& source, const SncModel& target,
                                     const ModelMorphism& m, const MotivicFunction& f,
                                     const FunctionV& g);

// Compares (q o b)_! g against q_!(b_! g), and the Fubini identity
// integrate_V(Y, b_! g) = class-pushforward of integrate_V(X, g).
CheckReport functoriality_check(const SncModel& model_x, const SncModel& model_y,
                                const SncModel& model_z, const ModelMorphism& m_xy,
                                const ModelMorphism& m_yz, const FunctionV& g);

}  // namespace motivic

#endif
