#ifndef MOTIVIC_EXPDENSITY_HPP
#define MOTIVIC_EXPDENSITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motivic/linalg.hpp"

namespace motivic {

// Affine form <lin, x> + cst on the current variable space.
struct AffineForm {
  QVec lin;
  Rat cst;

  static AffineForm constant(size_t dim, const Rat& c) { return {QVec(dim, Rat(0)), c}; }
  bool operator==(const AffineForm&) const = default;
};

// One term coeff * prod x_k^{powers_k} * e^{<lin, x> + aff}. The constant
// offset in the exponent is kept symbolic so all arithmetic stays exact.
struct ExpTerm {
  Rat coeff;
  std::vector<long> powers;
  QVec lin;
  Rat aff;
};

// Finite sum of terms, canonicalized: one entry per (powers, lin, aff).
class ExpDensity {
 public:
  ExpDensity() = default;
  explicit ExpDensity(size_t dim) : dim_(dim) {}

  static ExpDensity constant(size_t dim, const Rat& c);
  // e^{<lin, x>}
  static ExpDensity exponential(QVec lin, const Rat& coeff = Rat(1));
  static ExpDensity monomial(size_t dim, size_t var, long power, const Rat& coeff = Rat(1));

  size_t dim() const { return dim_; }
  bool is_zero() const { return t_.empty(); }
  void add_term(const ExpTerm& t);
  std::vector<ExpTerm> terms() const;

  ExpDensity& operator+=(const ExpDensity& o);
  ExpDensity& operator-=(const ExpDensity& o);
  friend ExpDensity operator+(ExpDensity a, const ExpDensity& b) { return a += b; }
  friend ExpDensity operator-(ExpDensity a, const ExpDensity& b) { return a -= b; }
  friend ExpDensity operator*(const ExpDensity& a, const ExpDensity& b);
  ExpDensity operator*(const Rat& c) const;
  bool operator==(const ExpDensity& o) const { return dim_ == o.dim_ && t_ == o.t_; }

  // Multiply by e^{<delta, x>}.
  ExpDensity shift_exponent(const QVec& delta) const;

  // Substitute x = A z + b; A has dim() rows, result lives in A's column count.
  ExpDensity substitute(const QMat& a, const QVec& b) const;

  std::string str() const;

 private:
  struct Key {
    std::vector<long> powers;
    QVec lin;
    Rat aff;
    bool operator<(const Key& o) const {
      if (powers != o.powers) return powers < o.powers;
      if (lin != o.lin) return std::lexicographical_compare(lin.begin(), lin.end(), o.lin.begin(),
                                                            o.lin.end());
      return aff < o.aff;
    }
    bool operator==(const Key& o) const {
      return powers == o.powers && lin == o.lin && aff == o.aff;
    }
  };
  size_t dim_ = 0;
  std::map<Key, Rat> t_;
};

// Exact integral over the open positive orthant R^dim_{>0}. Requires every
// term to have all exponent components < 0 and zero constant offset.
Rat integrate_orthant(const ExpDensity& d);

// Integral of the density over the relatively open simplicial cone with the
// given designated generators, in the lattice normalization (|det| when the
// generator matrix is square).
Rat integrate_carrier(const ExpDensity& d, const std::vector<QVec>& rays);

// Spec-facing form: full-dimensional simplicial cone, |det(generators)| factor.
Rat integrate_cone(const ExpDensity& d, const std::vector<QVec>& rays);

// Integrates out one variable between affine bounds (in the same variable
// space; the bound forms must not involve `var`). A missing bound means the
// corresponding infinite endpoint. The result still lives in the same space,
// with the eliminated slot unused.
ExpDensity integrate_var(const ExpDensity& d, size_t var, const std::optional<AffineForm>& lower,
                         const std::optional<AffineForm>& upper);

// As integrate_var, then reindexes the remaining variables densely.
ExpDensity eliminate_variable(const ExpDensity& d, size_t var, const std::optional<AffineForm>& lower,
                              const std::optional<AffineForm>& upper);

}  // namespace motivic

#endif
