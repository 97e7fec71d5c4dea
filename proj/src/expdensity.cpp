#include "motivic/expdensity.hpp"

#include <algorithm>
#include <sstream>

namespace motivic {

namespace {

using Mono = std::vector<long>;
using Poly = std::map<Mono, Rat>;

Poly poly_const(size_t dim, const Rat& c) {
  Poly p;
  if (c != 0) p[Mono(dim, 0)] = c;
  return p;
}

Poly poly_from_affine(const AffineForm& a) {
  size_t dim = a.lin.size();
  Poly p;
  if (a.cst != 0) p[Mono(dim, 0)] = a.cst;
  for (size_t i = 0; i < dim; ++i) {
    if (a.lin[i] == 0) continue;
    Mono m(dim, 0);
    m[i] = 1;
    p[m] = a.lin[i];
  }
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m = ma;
      for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      auto it = r.find(m);
      if (it == r.end()) {
        Rat v = ca * cb;
        if (v != 0) r[m] = v;
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.erase(it);
      }
    }
  return r;
}

Poly poly_pow(const Poly& p, long k, size_t dim) {
  Poly r = poly_const(dim, Rat(1));
  for (long i = 0; i < k; ++i) r = poly_mul(r, p);
  return r;
}

Rat factorial(long n) {
  Rat r(1);
  for (long k = 2; k <= n; ++k) r *= Rat(k);
  return r;
}

}  // namespace

ExpDensity ExpDensity::constant(size_t dim, const Rat& c) {
  ExpDensity d(dim);
  d.add_term({c, std::vector<long>(dim, 0), QVec(dim, Rat(0)), Rat(0)});
  return d;
}

ExpDensity ExpDensity::exponential(QVec lin, const Rat& coeff) {
  ExpDensity d(lin.size());
  size_t n = lin.size();
  d.add_term({coeff, std::vector<long>(n, 0), std::move(lin), Rat(0)});
  return d;
}

ExpDensity ExpDensity::monomial(size_t dim, size_t var, long power, const Rat& coeff) {
  ExpDensity d(dim);
  std::vector<long> p(dim, 0);
  p[var] = power;
  d.add_term({coeff, std::move(p), QVec(dim, Rat(0)), Rat(0)});
  return d;
}

void ExpDensity::add_term(const ExpTerm& t) {
  if (t.coeff == 0) return;
  Key k{t.powers, t.lin, t.aff};
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_[std::move(k)] = t.coeff;
  } else {
    it->second += t.coeff;
    if (it->second == 0) t_.erase(it);
  }
}

std::vector<ExpTerm> ExpDensity::terms() const {
  std::vector<ExpTerm> out;
  out.reserve(t_.size());
  for (const auto& [k, c] : t_) out.push_back({c, k.powers, k.lin, k.aff});
  return out;
}

ExpDensity& ExpDensity::operator+=(const ExpDensity& o) {
  for (const auto& [k, c] : o.t_) add_term({c, k.powers, k.lin, k.aff});
  return *this;
}

ExpDensity& ExpDensity::operator-=(const ExpDensity& o) {
  for (const auto& [k, c] : o.t_) add_term({-c, k.powers, k.lin, k.aff});
  return *this;
}

ExpDensity operator*(const ExpDensity& a, const ExpDensity& b) {
  ExpDensity r(a.dim());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      ExpTerm t;
      t.coeff = ta.coeff * tb.coeff;
      t.powers = ta.powers;
      for (size_t i = 0; i < t.powers.size(); ++i) t.powers[i] += tb.powers[i];
      t.lin = add(ta.lin, tb.lin);
      t.aff = ta.aff + tb.aff;
      r.add_term(t);
    }
  return r;
}

ExpDensity ExpDensity::operator*(const Rat& c) const {
  ExpDensity r(dim_);
  for (const auto& [k, v] : t_) r.add_term({v * c, k.powers, k.lin, k.aff});
  return r;
}

ExpDensity ExpDensity::shift_exponent(const QVec& delta) const {
  ExpDensity r(dim_);
  for (const auto& [k, v] : t_) r.add_term({v, k.powers, add(k.lin, delta), k.aff});
  return r;
}

ExpDensity ExpDensity::substitute(const QMat& a, const QVec& b) const {
  size_t m = a.empty() ? 0 : a[0].size();
  ExpDensity r(m);
  for (const auto& [k, coeff] : t_) {
    // Polynomial part: product over variables of (row_i . z + b_i)^{p_i}.
    Poly poly = poly_const(m, Rat(1));
    for (size_t i = 0; i < dim_; ++i) {
      if (k.powers[i] == 0) continue;
      AffineForm row{a[i], b[i]};
      poly = poly_mul(poly, poly_pow(poly_from_affine(row), k.powers[i], m));
    }
    // Exponential part: lin' = A^T lin, aff' = aff + <lin, b>.
    QVec lin2(m, Rat(0));
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < dim_; ++i) lin2[j] += k.lin[i] * a[i][j];
    Rat aff2 = k.aff + dot(k.lin, b);
    for (const auto& [mono, c] : poly) r.add_term({coeff * c, mono, lin2, aff2});
  }
  return r;
}

std::string ExpDensity::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (size_t i = 0; i < k.powers.size(); ++i)
      if (k.powers[i] != 0) {
        os << "*x" << i;
        if (k.powers[i] != 1) os << "^" << k.powers[i];
      }
    bool has_lin = !motivic::is_zero(k.lin) || k.aff != 0;
    if (has_lin) {
      os << "*exp(";
      bool f2 = true;
      for (size_t i = 0; i < k.lin.size(); ++i) {
        if (k.lin[i] == 0) continue;
        if (!f2) os << "+";
        f2 = false;
        os << rat_str(k.lin[i]) << "*x" << i;
      }
      if (k.aff != 0) {
        if (!f2) os << "+";
        os << rat_str(k.aff);
      }
      os << ")";
    }
  }
  return os.str();
}

Rat integrate_orthant(const ExpDensity& d) {
  Rat acc(0);
  for (const auto& t : d.terms()) {
    if (t.aff != 0) throw InvalidSpec("nonzero exponent constant in a cone integral");
    Rat v = t.coeff;
    for (size_t j = 0; j < d.dim(); ++j) {
      if (t.lin[j] >= 0) throw NonConvergent("nonnegative exponent along a generator");
      v *= factorial(t.powers[j]) / rat_pow(-t.lin[j], t.powers[j] + 1);
    }
    acc += v;
  }
  return acc;
}

Rat integrate_carrier(const ExpDensity& d, const std::vector<QVec>& rays) {
  if (rays.empty()) {
    // Zero-dimensional carrier: the density must be constant.
    Rat acc(0);
    for (const auto& t : d.terms()) {
      if (t.aff != 0) throw InvalidSpec("nonzero exponent constant at a point carrier");
      acc += t.coeff;
    }
    return acc;
  }
  size_t n = rays[0].size();
  QMat a = qmat(n, rays.size());
  for (size_t j = 0; j < rays.size(); ++j)
    for (size_t i = 0; i < n; ++i) a[i][j] = rays[j][i];
  ExpDensity sub = d.substitute(a, QVec(n, Rat(0)));
  return lattice_norm(rays) * integrate_orthant(sub);
}

Rat integrate_cone(const ExpDensity& d, const std::vector<QVec>& rays) {
  if (!rays.empty() && rays.size() != rays[0].size())
    throw InvalidSpec("integrate_cone expects a full-dimensional simplicial cone");
  return integrate_carrier(d, rays);
}

namespace {

// F for the antiderivative of t^p e^{lambda t} evaluated at an affine bound,
// multiplied into the ambient factors of `t` (without its var-dependence).
void accumulate_eval(ExpDensity& out, const ExpTerm& base, size_t var, long p, const Rat& lambda,
                     const AffineForm& bound, const Rat& sign) {
  size_t dim = base.powers.size();
  // Ambient part: base without the integrated variable.
  ExpTerm amb = base;
  amb.powers[var] = 0;
  amb.lin[var] = 0;
  Poly bpoly = poly_from_affine(bound);
  if (lambda == 0) {
    // t^{p+1} / (p+1)
    Poly ppoly = poly_pow(bpoly, p + 1, dim);
    for (const auto& [mono, c] : ppoly) {
      ExpTerm t = amb;
      t.coeff = amb.coeff * sign * c / Rat(p + 1);
      for (size_t i = 0; i < dim; ++i) t.powers[i] += mono[i];
      out.add_term(t);
    }
    return;
  }
  // e^{lambda b(z)} * sum_j (-1)^j p!/(p-j)! b(z)^{p-j} / lambda^{j+1}
  QVec elin = scale(bound.lin, lambda);
  Rat eaff = lambda * bound.cst;
  for (long j = 0; j <= p; ++j) {
    Rat cj = (j % 2 ? Rat(-1) : Rat(1)) * factorial(p) / factorial(p - j) / rat_pow(lambda, j + 1);
    Poly ppoly = poly_pow(bpoly, p - j, dim);
    for (const auto& [mono, c] : ppoly) {
      ExpTerm t = amb;
      t.coeff = amb.coeff * sign * cj * c;
      for (size_t i = 0; i < dim; ++i) t.powers[i] += mono[i];
      t.lin = add(t.lin, elin);
      t.aff += eaff;
      out.add_term(t);
    }
  }
}

}  // namespace

ExpDensity integrate_var(const ExpDensity& d, size_t var, const std::optional<AffineForm>& lower,
                         const std::optional<AffineForm>& upper) {
  if (lower && lower->lin[var] != 0) throw InvalidSpec("lower bound involves the eliminated variable");
  if (upper && upper->lin[var] != 0) throw InvalidSpec("upper bound involves the eliminated variable");
  ExpDensity out(d.dim());
  for (const auto& t : d.terms()) {
    long p = t.powers[var];
    Rat lambda = t.lin[var];
    if (!upper) {
      if (lambda >= 0) throw NonConvergent("unbounded above with nonnegative exponent");
    }
    if (!lower) {
      if (lambda <= 0) throw NonConvergent("unbounded below with nonpositive exponent");
    }
    if (upper) accumulate_eval(out, t, var, p, lambda, *upper, Rat(1));
    if (lower) accumulate_eval(out, t, var, p, lambda, *lower, Rat(-1));
  }
  return out;
}

ExpDensity eliminate_variable(const ExpDensity& d, size_t var, const std::optional<AffineForm>& lower,
                              const std::optional<AffineForm>& upper) {
  ExpDensity full = integrate_var(d, var, lower, upper);
  // Drop the now-unused slot.
  size_t n = d.dim();
  QMat a = qmat(n, n - 1);
  size_t col = 0;
  for (size_t i = 0; i < n; ++i) {
    if (i == var) continue;
    a[i][col++] = 1;
  }
  return full.substitute(a, QVec(n, Rat(0)));
}

}  // namespace motivic
