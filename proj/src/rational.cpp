#include "motivic/rational.hpp"

namespace motivic {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rat(p, q);
  } catch (const std::exception& e) {
    throw ParseError("bad rational literal '" + s + "'");
  }
}

std::string rat_str(const Rat& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  if (r == 0) {
    if (e < 0) throw std::domain_error("0 to a negative power");
    return Rat(0);
  }
  bool inv = e < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rat base = r, acc(1);
  while (k) {
    if (k & 1u) acc *= base;
    base *= base;
    k >>= 1u;
  }
  if (inv) acc = Rat(den(acc) * (num(acc) < 0 ? -1 : 1), boost::multiprecision::abs(num(acc)));
  return acc;
}

Int rat_floor(const Rat& r) {
  Int p = num(r), q = den(r);
  Int d = p / q;
  if (p < 0 && d * q != p) d -= 1;
  return d;
}

}  // namespace motivic
