#include "motivic/classes.hpp"

#include <algorithm>
#include <sstream>

namespace motivic {

Monomial::Monomial(std::vector<Symbol> fs) : f_(std::move(fs)) {
  std::sort(f_.begin(), f_.end());
}

Monomial Monomial::operator*(const Monomial& o) const {
  std::vector<Symbol> m;
  m.reserve(f_.size() + o.f_.size());
  std::merge(f_.begin(), f_.end(), o.f_.begin(), o.f_.end(), std::back_inserter(m));
  Monomial r;
  r.f_ = std::move(m);
  return r;
}

std::string Monomial::str() const {
  if (f_.empty()) return "1";
  std::string s = "[";
  for (size_t i = 0; i < f_.size(); ++i) {
    if (i) s += ".";
    s += f_[i];
  }
  return s + "]";
}

void MotClass::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

MotClass& MotClass::operator+=(const MotClass& o) {
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

MotClass& MotClass::operator-=(const MotClass& o) {
  for (const auto& [m, c] : o.t_) add_term(m, -c);
  return *this;
}

MotClass operator*(const MotClass& a, const MotClass& b) {
  MotClass r;
  for (const auto& [ma, ca] : a.t_)
    for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
  return r;
}

MotClass MotClass::operator*(const Rat& c) const {
  MotClass r;
  for (const auto& [m, v] : t_) r.add_term(m, v * c);
  return r;
}

std::string MotClass::str() const {
  if (t_.empty()) return "0";
  // Deterministic order: monomial degree, then name.
  std::vector<const std::pair<const Monomial, Rat>*> v;
  for (const auto& t : t_) v.push_back(&t);
  std::stable_sort(v.begin(), v.end(), [](auto* a, auto* b) {
    if (a->first.factors().size() != b->first.factors().size())
      return a->first.factors().size() < b->first.factors().size();
    return a->first < b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (auto* t : v) {
    Rat c = t->second;
    bool neg = c < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    if (t->first.is_unit()) {
      os << rat_str(c);
    } else if (c == 1) {
      os << t->first.str();
    } else {
      os << rat_str(c) << "*" << t->first.str();
    }
  }
  return os.str();
}

AtomicScalar::AtomicScalar(Laurent num, std::map<long, int> den)
    : num_(std::move(num)), den_(std::move(den)) {
  for (auto& [i, m] : den_)
    if (i < 1 || m < 1) throw InvalidSpec("denominator factor indices and multiplicities must be >= 1");
  if (num_.is_zero()) den_.clear();
}

AtomicScalar AtomicScalar::inv_one_minus_Linv(long i) {
  return AtomicScalar(Laurent::one(), {{i, 1}});
}

Laurent AtomicScalar::den_poly() const {
  Laurent d = Laurent::one();
  for (const auto& [i, m] : den_)
    for (int k = 0; k < m; ++k) d = d * Laurent::one_minus_Linv(i);
  return d;
}

namespace {
// Expands the part of denominator `target` missing from `have`.
Laurent den_complement(const std::map<long, int>& target, const std::map<long, int>& have) {
  Laurent d = Laurent::one();
  for (const auto& [i, m] : target) {
    int h = 0;
    if (auto it = have.find(i); it != have.end()) h = it->second;
    for (int k = h; k < m; ++k) d = d * Laurent::one_minus_Linv(i);
  }
  return d;
}
}  // namespace

AtomicScalar& AtomicScalar::operator+=(const AtomicScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  std::map<long, int> lcm = den_;
  for (const auto& [i, m] : o.den_) {
    auto it = lcm.find(i);
    if (it == lcm.end())
      lcm[i] = m;
    else
      it->second = std::max(it->second, m);
  }
  Laurent n = num_ * den_complement(lcm, den_) + o.num_ * den_complement(lcm, o.den_);
  num_ = std::move(n);
  den_ = std::move(lcm);
  if (num_.is_zero()) den_.clear();
  return *this;
}

AtomicScalar& AtomicScalar::operator-=(const AtomicScalar& o) { return *this += -o; }

AtomicScalar AtomicScalar::operator-() const {
  AtomicScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

AtomicScalar operator*(const AtomicScalar& a, const AtomicScalar& b) {
  if (a.is_zero() || b.is_zero()) return AtomicScalar();
  AtomicScalar r;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_;
  for (const auto& [i, m] : b.den_) r.den_[i] += m;
  return r;
}

bool AtomicScalar::eq(const AtomicScalar& o) const {
  return num_ * o.den_poly() == o.num_ * den_poly();
}

Rat AtomicScalar::theta(const Rat& q) const {
  if (q <= 1) throw InvalidSpec("theta_q requires q > 1");
  Rat v = num_.eval(q);
  for (const auto& [i, m] : den_) {
    Rat f = Rat(1) - rat_pow(q, -i);
    for (int k = 0; k < m; ++k) v /= f;
  }
  return v;
}

Rat AtomicScalar::limit_L1() const {
  if (num_.is_zero()) return Rat(0);
  Laurent rest;
  int m = num_.multiplicity_at_one(&rest);
  int k = 0;
  Rat dprod(1);
  for (const auto& [i, mult] : den_) {
    k += mult;
    dprod *= rat_pow(Rat(i), mult);
  }
  if (m < k) throw PoleAtOne("scalar " + str() + " has a pole at L = 1");
  if (m > k) return Rat(0);
  return rest.eval(Rat(1)) / dprod;
}

std::string AtomicScalar::str() const {
  std::string n = num_.str();
  if (den_.empty()) return n;
  std::ostringstream os;
  bool paren = num_.coeffs().size() > 1;
  os << (paren ? "(" + n + ")" : n) << " / ";
  for (const auto& [i, m] : den_) {
    os << "(1-L^-" << i << ")";
    if (m > 1) os << "^" << m;
  }
  return os.str();
}

void AtomicClass::add_term(const Monomial& m, AtomicScalar s) {
  if (s.is_zero()) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = std::move(s);
  } else {
    it->second += s;
    if (it->second.is_zero()) t_.erase(it);
  }
}

AtomicClass& AtomicClass::operator+=(const AtomicClass& o) {
  for (const auto& [m, s] : o.t_) add_term(m, s);
  return *this;
}

AtomicClass& AtomicClass::operator-=(const AtomicClass& o) {
  for (const auto& [m, s] : o.t_) add_term(m, -s);
  return *this;
}

AtomicClass operator*(const AtomicClass& a, const AtomicClass& b) {
  AtomicClass r;
  for (const auto& [ma, sa] : a.t_)
    for (const auto& [mb, sb] : b.t_) r.add_term(ma * mb, sa * sb);
  return r;
}

AtomicClass AtomicClass::operator*(const AtomicScalar& s) const {
  AtomicClass r;
  for (const auto& [m, v] : t_) r.add_term(m, v * s);
  return r;
}

bool AtomicClass::eq(const AtomicClass& o) const {
  // Terms with equal monomials must agree; missing terms must be zero.
  for (const auto& [m, s] : t_) {
    auto it = o.t_.find(m);
    if (it == o.t_.end()) {
      if (!s.eq(AtomicScalar())) return false;
    } else if (!s.eq(it->second)) {
      return false;
    }
  }
  for (const auto& [m, s] : o.t_)
    if (t_.find(m) == t_.end() && !s.eq(AtomicScalar())) return false;
  return true;
}

MotClass AtomicClass::limit_L1() const {
  MotClass r;
  for (const auto& [m, s] : t_) r.add_term(m, s.limit_L1());
  return r;
}

MotClass AtomicClass::theta(const Rat& q) const {
  MotClass r;
  for (const auto& [m, s] : t_) r.add_term(m, s.theta(q));
  return r;
}

std::string AtomicClass::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, s] : t_) {
    if (!first) os << " + ";
    first = false;
    if (m.is_unit()) {
      os << s.str();
    } else {
      bool paren = !s.den().empty() || s.num().coeffs().size() > 1;
      if (s.num() == Laurent::one() && s.den().empty())
        os << m.str();
      else
        os << (paren ? "(" + s.str() + ")" : s.str()) << "*" << m.str();
    }
  }
  return os.str();
}

AtomicScalar poly_sum(long p, long c) {
  if (p < 0) throw InvalidSpec("poly_sum requires p >= 0");
  if (c >= 0) throw NonConvergent("poly_sum requires a negative step exponent");
  // S_p(t) = sum_{k>=1} k^p t^k = N_p(t) / (1-t)^{p+1}, via N_p = t(N'(1-t) + pN).
  // N is a plain polynomial in t with N(0) = 0.
  std::vector<Int> n = {Int(0), Int(1)};  // N_0 = t
  for (long step = 1; step <= p; ++step) {
    std::vector<Int> d(n.size(), Int(0));  // N'
    for (size_t k = 1; k < n.size(); ++k) d[k - 1] = n[k] * Int(static_cast<long>(k));
    std::vector<Int> out(n.size() + 2, Int(0));
    for (size_t k = 0; k < d.size(); ++k) {
      out[k + 1] += d[k];      // t * N'
      out[k + 2] -= d[k];      // t * N' * (-t)
    }
    for (size_t k = 0; k < n.size(); ++k) out[k + 1] += n[k] * Int(step);  // t * p * N
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    n = std::move(out);
  }
  long a = -c;
  Laurent num;
  for (size_t k = 0; k < n.size(); ++k)
    if (n[k] != 0) num += Laurent::mono(-a * static_cast<long>(k), n[k]);
  return AtomicScalar(std::move(num), {{a, static_cast<int>(p + 1)}});
}

AtomicScalar poly_sum_from_zero(long p, long c) {
  AtomicScalar s = poly_sum(p, c);
  if (p == 0) s += AtomicScalar::one();
  return s;
}

Rat chi_specialize(const MotClass& x, const std::map<Symbol, long>& table) {
  Rat acc(0);
  for (const auto& [m, c] : x.terms()) {
    Rat v = c;
    for (const auto& s : m.factors()) {
      auto it = table.find(s);
      if (it == table.end()) throw MissingSymbol("no Euler characteristic for '" + s + "'");
      v *= Rat(it->second);
    }
    acc += v;
  }
  return acc;
}

AtomicClass apply_rules(const AtomicClass& x, const std::map<Symbol, AtomicClass>& rules) {
  AtomicClass out;
  for (const auto& [m, s] : x.terms()) {
    AtomicClass acc(s);
    for (const auto& sym : m.factors()) {
      auto it = rules.find(sym);
      if (it == rules.end())
        acc = acc * AtomicClass::sym(sym);
      else
        acc = acc * it->second;
    }
    out += acc;
  }
  return out;
}

}  // namespace motivic
