#ifndef MOTIVIC_CLASSES_HPP
#define MOTIVIC_CLASSES_HPP

#include <map>
#include <string>
#include <vector>

#include "motivic/laurent.hpp"
#include "motivic/rational.hpp"

namespace motivic {

using Symbol = std::string;

// Formal fiber product of class symbols; empty product is the unit class 1.
// Factors are kept sorted, so equal monomials compare equal.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(Symbol s) : f_{std::move(s)} {}
  explicit Monomial(std::vector<Symbol> fs);

  static Monomial unit() { return Monomial(); }
  bool is_unit() const { return f_.empty(); }
  const std::vector<Symbol>& factors() const { return f_; }
  Monomial operator*(const Monomial& o) const;
  auto operator<=>(const Monomial& o) const = default;
  std::string str() const;  // "[A.B]" or "1"

 private:
  std::vector<Symbol> f_;
};

// Element of MM_X: rational combination of class monomials, with L already set to 1.
class MotClass {
 public:
  MotClass() = default;
  explicit MotClass(const Rat& c) { add_term(Monomial::unit(), c); }
  static MotClass sym(const Symbol& s, const Rat& c = Rat(1)) {
    MotClass m;
    m.add_term(Monomial(s), c);
    return m;
  }

  void add_term(const Monomial& m, const Rat& c);
  bool is_zero() const { return t_.empty(); }
  const std::map<Monomial, Rat>& terms() const { return t_; }

  MotClass& operator+=(const MotClass& o);
  MotClass& operator-=(const MotClass& o);
  friend MotClass operator+(MotClass a, const MotClass& b) { return a += b; }
  friend MotClass operator-(MotClass a, const MotClass& b) { return a -= b; }
  friend MotClass operator*(const MotClass& a, const MotClass& b);
  MotClass operator*(const Rat& c) const;
  bool operator==(const MotClass& o) const { return t_ == o.t_; }

  std::string str() const;

 private:
  std::map<Monomial, Rat> t_;
};

// Element of A_X = Z[L, L^-1, (1-L^-i)^-1]: Laurent numerator over a multiset
// of (1 - L^-i) factors. No canonical form; equality is by cross-multiplication.
class AtomicScalar {
 public:
  AtomicScalar() = default;
  explicit AtomicScalar(Laurent num) : num_(std::move(num)) {}
  explicit AtomicScalar(const Int& c) : num_(Laurent(c)) {}
  AtomicScalar(Laurent num, std::map<long, int> den);

  static AtomicScalar one() { return AtomicScalar(Laurent::one()); }
  static AtomicScalar L(long exp = 1) { return AtomicScalar(Laurent::mono(exp)); }
  // 1 / (1 - L^-i)
  static AtomicScalar inv_one_minus_Linv(long i);

  bool is_zero() const { return num_.is_zero(); }
  const Laurent& num() const { return num_; }
  const std::map<long, int>& den() const { return den_; }
  Laurent den_poly() const;  // expanded product of the denominator factors

  AtomicScalar& operator+=(const AtomicScalar& o);
  AtomicScalar& operator-=(const AtomicScalar& o);
  AtomicScalar operator-() const;
  friend AtomicScalar operator+(AtomicScalar a, const AtomicScalar& b) { return a += b; }
  friend AtomicScalar operator-(AtomicScalar a, const AtomicScalar& b) { return a -= b; }
  friend AtomicScalar operator*(const AtomicScalar& a, const AtomicScalar& b);

  // True iff equal as rational functions (cross-multiplied Laurent comparison).
  bool eq(const AtomicScalar& o) const;

  // Evaluate L -> q for rational q > 1.
  Rat theta(const Rat& q) const;

  // Limit at L -> 1 after cancelling all (L-1) factors; throws PoleAtOne.
  Rat limit_L1() const;

  std::string str() const;

 private:
  Laurent num_;
  std::map<long, int> den_;  // factor index i -> multiplicity of (1 - L^-i)
};

// Element of MA_X: class monomials with AtomicScalar coefficients.
class AtomicClass {
 public:
  AtomicClass() = default;
  explicit AtomicClass(AtomicScalar s) { add_term(Monomial::unit(), std::move(s)); }
  static AtomicClass sym(const Symbol& s, AtomicScalar c = AtomicScalar::one()) {
    AtomicClass m;
    m.add_term(Monomial(s), std::move(c));
    return m;
  }

  void add_term(const Monomial& m, AtomicScalar s);
  bool is_zero() const { return t_.empty(); }
  const std::map<Monomial, AtomicScalar>& terms() const { return t_; }

  AtomicClass& operator+=(const AtomicClass& o);
  AtomicClass& operator-=(const AtomicClass& o);
  friend AtomicClass operator+(AtomicClass a, const AtomicClass& b) { return a += b; }
  friend AtomicClass operator-(AtomicClass a, const AtomicClass& b) { return a -= b; }
  friend AtomicClass operator*(const AtomicClass& a, const AtomicClass& b);
  AtomicClass operator*(const AtomicScalar& s) const;

  // Term-wise cross-multiplied equality.
  bool eq(const AtomicClass& o) const;

  MotClass limit_L1() const;          // throws PoleAtOne on a genuine pole
  MotClass theta(const Rat& q) const;  // coefficients evaluated at L = q

  std::string str() const;

 private:
  std::map<Monomial, AtomicScalar> t_;
};

// Closed form of sum_{lambda >= 1} lambda^p L^{c lambda}; requires c <= -1.
AtomicScalar poly_sum(long p, long c);
// Same sum starting at lambda = 0.
AtomicScalar poly_sum_from_zero(long p, long c);

// Substitute Euler characteristics multiplicatively on monomials.
Rat chi_specialize(const MotClass& x, const std::map<Symbol, long>& table);

// On-demand substitution of symbols by classes (e.g. [P1] -> L + 1).
AtomicClass apply_rules(const AtomicClass& x, const std::map<Symbol, AtomicClass>& rules);

}  // namespace motivic

#endif
