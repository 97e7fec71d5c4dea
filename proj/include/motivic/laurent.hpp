#ifndef MOTIVIC_LAURENT_HPP
#define MOTIVIC_LAURENT_HPP

#include <map>
#include <string>

#include "motivic/rational.hpp"

namespace motivic {

// Laurent polynomial in L with integer coefficients. No zero coefficients stored.
class Laurent {
 public:
  Laurent() = default;
  explicit Laurent(const Int& c) {
    if (c != 0) c_[0] = c;
  }

  static Laurent mono(long exp, Int coeff = Int(1));
  static Laurent one() { return Laurent(Int(1)); }
  // 1 - L^{-i}
  static Laurent one_minus_Linv(long i);
  // [P^m] = 1 + L + ... + L^m; m = -1 gives 0.
  static Laurent projective_space(long m);

  bool is_zero() const { return c_.empty(); }
  Int coeff(long exp) const;
  const std::map<long, Int>& coeffs() const { return c_; }
  void set(long exp, const Int& v);

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  Laurent operator-() const;
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  bool operator==(const Laurent& o) const { return c_ == o.c_; }
  bool operator!=(const Laurent& o) const { return c_ != o.c_; }

  // Exact evaluation at a nonzero rational.
  Rat eval(const Rat& q) const;

  // Multiplicity of (L - 1) as a factor; 0 when the value at 1 is nonzero.
  // Stores the cofactor in `rest` when non-null.
  int multiplicity_at_one(Laurent* rest = nullptr) const;

  // Exact division by (L - 1); requires eval(1) == 0.
  Laurent div_L_minus_one() const;

  std::string str() const;

 private:
  std::map<long, Int> c_;  // exponent -> coefficient
};

}  // namespace motivic

#endif
