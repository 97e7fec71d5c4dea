#include "motivic/laurent.hpp"

#include <sstream>

namespace motivic {

Laurent Laurent::mono(long exp, Int coeff) {
  Laurent r;
  if (coeff != 0) r.c_[exp] = std::move(coeff);
  return r;
}

Laurent Laurent::one_minus_Linv(long i) {
  Laurent r = one();
  r -= mono(-i);
  return r;
}

Laurent Laurent::projective_space(long m) {
  Laurent r;
  for (long k = 0; k <= m; ++k) r.c_[k] = 1;
  return r;
}

Int Laurent::coeff(long exp) const {
  auto it = c_.find(exp);
  return it == c_.end() ? Int(0) : it->second;
}

void Laurent::set(long exp, const Int& v) {
  if (v == 0)
    c_.erase(exp);
  else
    c_[exp] = v;
}

Laurent& Laurent::operator+=(const Laurent& o) {
  for (const auto& [e, c] : o.c_) {
    auto it = c_.find(e);
    if (it == c_.end()) {
      c_[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) c_.erase(it);
    }
  }
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  for (const auto& [e, c] : o.c_) {
    auto it = c_.find(e);
    if (it == c_.end()) {
      c_[e] = -c;
    } else {
      it->second -= c;
      if (it->second == 0) c_.erase(it);
    }
  }
  return *this;
}

Laurent Laurent::operator-() const {
  Laurent r;
  for (const auto& [e, c] : c_) r.c_[e] = -c;
  return r;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
  Laurent r;
  for (const auto& [ea, ca] : a.c_)
    for (const auto& [eb, cb] : b.c_) {
      long e = ea + eb;
      auto it = r.c_.find(e);
      if (it == r.c_.end()) {
        Int v = ca * cb;
        if (v != 0) r.c_[e] = std::move(v);
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.c_.erase(it);
      }
    }
  return r;
}

Rat Laurent::eval(const Rat& q) const {
  Rat acc(0);
  for (const auto& [e, c] : c_) acc += Rat(c) * rat_pow(q, e);
  return acc;
}

Laurent Laurent::div_L_minus_one() const {
  // Shift to an honest polynomial, divide, shift back.
  if (c_.empty()) return Laurent();
  if (eval(Rat(1)) != 0) throw PoleAtOne("not divisible by (L - 1)");
  long lo = c_.begin()->first, hi = c_.rbegin()->first;
  long n = hi - lo;
  std::vector<Int> p(static_cast<size_t>(n) + 1, Int(0));
  for (const auto& [e, c] : c_) p[static_cast<size_t>(e - lo)] = c;
  // Synthetic division by (x - 1): q_i = p_{i+1} + q_{i+1}.
  std::vector<Int> q(static_cast<size_t>(n), Int(0));
  Int carry(0);
  for (long i = n; i >= 1; --i) {
    carry += p[static_cast<size_t>(i)];
    q[static_cast<size_t>(i - 1)] = carry;
  }
  Laurent r;
  for (long i = 0; i < n; ++i)
    if (q[static_cast<size_t>(i)] != 0) r.c_[i + lo] = q[static_cast<size_t>(i)];
  return r;
}

int Laurent::multiplicity_at_one(Laurent* rest) const {
  if (is_zero()) {
    if (rest) *rest = Laurent();
    return -1;  // zero divides everything; callers treat -1 as "infinite"
  }
  Laurent cur = *this;
  int m = 0;
  while (cur.eval(Rat(1)) == 0) {
    cur = cur.div_L_minus_one();
    ++m;
  }
  if (rest) *rest = cur;
  return m;
}

std::string Laurent::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    Int c = it->second;
    long e = it->first;
    bool neg = c < 0;
    Int a = neg ? Int(-c) : c;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (e == 0) {
      os << a.str();
    } else {
      if (a != 1) os << a.str() << "*";
      os << "L";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace motivic
