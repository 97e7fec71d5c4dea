#include "motivic/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace motivic {

QVec qvec(size_t n, const Rat& v) { return QVec(n, v); }
QMat qmat(size_t r, size_t c, const Rat& v) { return QMat(r, QVec(c, v)); }

QMat identity(size_t n) {
  QMat m = qmat(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Rat dot(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVec add(const QVec& a, const QVec& b) {
  QVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

QVec scale(const QVec& a, const Rat& s) {
  QVec r(a);
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero(const QVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

QMat transpose(const QMat& m) {
  if (m.empty()) return {};
  QMat t = qmat(m[0].size(), m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

QMat matmul(const QMat& a, const QMat& b) {
  if (a.empty() || b.empty()) return qmat(a.size(), b.empty() ? 0 : b[0].size());
  QMat r = qmat(a.size(), b[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

QVec matvec(const QMat& a, const QVec& x) {
  QVec r(a.size(), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

std::vector<size_t> rref(QMat& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rat inv = m[r][c];
    for (auto& x : m[r]) x /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(QMat m) { return rref(m).size(); }

Rat det(QMat m) {
  size_t n = m.size();
  if (n == 0) return Rat(1);
  assert(m[0].size() == n);
  Rat d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    Rat inv = m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

QMat nullspace(const QMat& m) {
  if (m.empty()) return {};
  QMat a = m;
  auto pivots = rref(a);
  size_t cols = m[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  QMat basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVec v(cols, Rat(0));
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solve(const QMat& m, const QVec& b) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  QMat aug = m;
  for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  auto pivots = rref(aug);
  for (size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == cols) return std::nullopt;  // pivot in the constants column
  QVec x(cols, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

QVec primitive(const QVec& v) {
  Int l(1);
  for (const auto& x : v) l = boost::multiprecision::lcm(l, den(x));
  Int g(0);
  QVec r(v);
  for (auto& x : r) {
    x *= Rat(l);
    g = boost::multiprecision::gcd(g, num(x));
  }
  if (g == 0) return r;
  for (auto& x : r) x /= Rat(g);
  return r;
}

Rat lattice_norm(const std::vector<QVec>& cols) {
  size_t s = cols.size();
  if (s == 0) return Rat(1);
  size_t n = cols[0].size();
  if (s > n) throw InvalidSpec("more generators than ambient dimension");
  // Clear denominators: cols = A / scale with A integral.
  Int scale(1);
  for (const auto& c : cols)
    for (const auto& x : c) scale = boost::multiprecision::lcm(scale, den(x));
  std::vector<std::vector<Int>> a(n, std::vector<Int>(s));
  for (size_t j = 0; j < s; ++j)
    for (size_t i = 0; i < n; ++i) {
      Rat v = cols[j][i] * Rat(scale);
      a[i][j] = num(v);
    }
  // gcd of all s x s minors = index of the column lattice in its saturation.
  Int g(0);
  std::vector<size_t> c(s);
  for (size_t i = 0; i < s; ++i) c[i] = i;
  auto minor_det = [&](const std::vector<size_t>& rows) {
    QMat sub = qmat(s, s);
    for (size_t i = 0; i < s; ++i)
      for (size_t j = 0; j < s; ++j) sub[i][j] = Rat(a[rows[i]][j]);
    return num(det(sub));
  };
  while (true) {
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(minor_det(c)));
    long i = static_cast<long>(s) - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == static_cast<size_t>(i) + n - s) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (size_t j = static_cast<size_t>(i) + 1; j < s; ++j) c[j] = c[j - 1] + 1;
  }
  if (g == 0) throw InvalidSpec("generators are linearly dependent");
  return Rat(g) / rat_pow(Rat(scale), static_cast<long>(s));
}

}  // namespace motivic
