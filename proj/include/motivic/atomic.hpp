#ifndef MOTIVIC_ATOMIC_HPP
#define MOTIVIC_ATOMIC_HPP

#include "motivic/measure.hpp"

namespace motivic {

// Shifted lattice cone {offset + sum_k lambda_k gens_k : lambda in Z^d_{>=0}}
// inside the integer points of a face.
struct LatticeCell {
  Face face;
  std::vector<Int> offset;              // entries >= 1
  std::vector<std::vector<Int>> gens;   // generator columns, entries >= 0, independent

  size_t dim() const { return gens.size(); }
  size_t ambient() const { return face.size(); }
};

struct PresburgerSet {
  std::vector<LatticeCell> cells;
};

// coeff (x) prod x^powers * L^{beta(x)} supported on a cell.
struct AtomicTerm {
  AtomicClass coeff;
  LatticeCell cell;
  AffineForm beta;           // exponent of L; must be integral on the cell
  std::vector<long> powers;  // monomial exponents in the face coordinates
};

ValidationReport validate_cell(const SncModel& model, const LatticeCell& cell);

// Exact membership of an integer point in a cell.
bool cell_contains(const LatticeCell& cell, const std::vector<Int>& point);

// Brute-force disjointness validation on the box [1, bound]^{|face|}.
ValidationReport validate_cells(const SncModel& model, const PresburgerSet& s, long bound = 50);

// Sum over the cell of prod x^powers * L^{beta(x)} in closed form.
AtomicScalar cell_sum(const LatticeCell& cell, const AffineForm& beta,
                      const std::vector<long>& powers);

PresburgerSet full_skeleton_cells(const SncModel& model);

AtomicClass atomic_measure(const SncModel& model, const PresburgerSet& s);

AtomicClass atomic_integrate(const SncModel& model, const std::vector<AtomicTerm>& terms);

// Preimage of a set of diagonal cells under a blow-up morphism, constructed
// from the explicit retraction coordinates y_i = x_i + x_0 on T.
PresburgerSet atomic_preimage_cells(const SncModel& blown, const ModelMorphism& m, const Face& t_set,
                                    const PresburgerSet& s);

CheckReport atomic_blowup_check(const SncModel& model, const BlowupSpec& spec, const PresburgerSet& s);

// Lattice-compatible push-forward (injective on cell lattices, monomial-free
// densities); everything else is Unsupported.
std::vector<AtomicTerm> atomic_pushforward(const SncModel& source, const SncModel& target,
                                           const ModelMorphism& m,
                                           const std::vector<AtomicTerm>& terms);

// limit_L1 of the atomic full-skeleton measure against the real one.
CheckReport cross_check_L1(const SncModel& model);

// theta_q of a cell sum by brute-force truncation, with an exact geometric
// tail bound; used by oracles and exposed for the CLI.
Rat cell_sum_truncated(const LatticeCell& cell, const AffineForm& beta,
                       const std::vector<long>& powers, const Rat& q, long per_coord_bound,
                       Rat* tail_bound = nullptr);

}  // namespace motivic

#endif
