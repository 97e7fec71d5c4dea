#include "motivic/cones.hpp"

#include <algorithm>
#include <set>

namespace motivic {

namespace {

// Projects a system onto the nullspace of its equalities: returns the basis
// (rows) and the transformed strict rows.
std::pair<QMat, QMat> reduce_equalities(const HSys& h) {
  QMat basis;
  if (h.eq.empty()) {
    basis = identity(h.dim);
  } else {
    basis = nullspace(h.eq);
  }
  QMat rows;
  for (const auto& p : h.pos) {
    QVec r(basis.size(), Rat(0));
    for (size_t k = 0; k < basis.size(); ++k) r[k] = dot(p, basis[k]);
    rows.push_back(std::move(r));
  }
  return {basis, rows};
}

bool fm_strict_feasible(QMat rows, size_t dim) {
  for (size_t var = dim; var-- > 0;) {
    QMat lows, ups, rest;
    for (auto& r : rows) {
      if (r[var] > 0)
        lows.push_back(r);
      else if (r[var] < 0)
        ups.push_back(r);
      else
        rest.push_back(r);
    }
    QMat next = rest;
    for (const auto& lo : lows)
      for (const auto& up : ups) {
        // lo: a x_var + f > 0, a > 0; up: -b x_var + g > 0, b > 0.
        // Combine: b f + a g > 0.
        Rat a = lo[var], b = -up[var];
        QVec r(rows.empty() ? 0 : rows[0].size(), Rat(0));
        for (size_t j = 0; j < r.size(); ++j) r[j] = b * lo[j] + a * up[j];
        r[var] = 0;
        next.push_back(std::move(r));
      }
    rows = std::move(next);
  }
  for (const auto& r : rows) {
    bool all_zero = is_zero(r);
    if (all_zero) return false;  // 0 > 0
  }
  return true;
}

}  // namespace

bool strict_feasible(const HSys& h) {
  auto [basis, rows] = reduce_equalities(h);
  if (basis.empty()) {
    // Only the origin; strict rows must be absent.
    return h.pos.empty();
  }
  // Drop identically-zero rows early: they are infeasible.
  for (const auto& r : rows)
    if (is_zero(r)) return false;
  return fm_strict_feasible(rows, basis.size());
}

std::vector<QVec> cone_rays(const HSys& h) {
  auto [basis, rows] = reduce_equalities(h);
  size_t m = basis.size();
  std::vector<QVec> out;
  if (m == 0) return out;
  auto satisfies = [&](const QVec& z) {
    for (const auto& r : rows)
      if (dot(r, z) < 0) return false;
    return true;
  };
  auto lift = [&](const QVec& z) {
    QVec x(h.dim, Rat(0));
    for (size_t k = 0; k < m; ++k)
      if (z[k] != 0) x = add(x, scale(basis[k], z[k]));
    return primitive(x);
  };
  std::set<QVec> seen;
  std::vector<QVec> rays_z;
  if (m == 1) {
    for (int s : {1, -1}) {
      QVec z{Rat(s)};
      if (satisfies(z)) rays_z.push_back(z);
    }
    if (rays_z.size() == 2 && !rows.empty()) throw NotPointed("line satisfies all inequalities");
    if (rays_z.size() == 2) throw NotPointed("unconstrained line");
  } else {
    if (rows.size() + 1 < m) throw NotPointed("too few inequalities for a pointed cone");
    // Candidate rays: nullspaces of (m-1)-subsets of inequality rows.
    std::vector<size_t> c(m - 1);
    for (size_t i = 0; i < m - 1; ++i) c[i] = i;
    if (rows.size() >= m - 1) {
      while (true) {
        QMat sub;
        for (auto i : c) sub.push_back(rows[i]);
        QMat ns = nullspace(sub);
        if (ns.size() == 1) {
          for (int s : {1, -1}) {
            QVec z = scale(ns[0], Rat(s));
            if (!satisfies(z)) continue;
            // Extremality: active rows must have rank m-1.
            QMat act;
            for (const auto& r : rows)
              if (dot(r, z) == 0) act.push_back(r);
            if (rank(act) != m - 1) continue;
            QVec zp = primitive(z);
            if (satisfies(scale(zp, Rat(-1))))
              throw NotPointed("cone contains a line");
            if (seen.insert(zp).second) rays_z.push_back(zp);
          }
        }
        long i = static_cast<long>(m) - 2;
        while (i >= 0 && c[static_cast<size_t>(i)] == static_cast<size_t>(i) + rows.size() - (m - 1)) --i;
        if (i < 0) break;
        ++c[static_cast<size_t>(i)];
        for (size_t j = static_cast<size_t>(i) + 1; j < m - 1; ++j) c[j] = c[j - 1] + 1;
      }
    }
  }
  for (const auto& z : rays_z) out.push_back(lift(z));
  // Deterministic order.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HSys cone_to_H(const std::vector<QVec>& rays, size_t ambient) {
  HSys h;
  h.dim = ambient;
  if (rays.empty()) {
    h.eq = identity(ambient);
    return h;
  }
  QMat rows;  // rays as rows
  for (const auto& r : rays) rows.push_back(r);
  // Span conditions: all v with <v, ray_j> = 0 for every ray.
  h.eq = nullspace(rows);
  // Barycentric coordinates: t(x) = (V^T V)^{-1} V^T x; each row > 0.
  QMat vt = rows;                  // s x n
  QMat v = transpose(vt);          // n x s
  QMat gram = matmul(vt, v);       // s x s, invertible
  // Invert gram by solving against identity.
  size_t s = rays.size();
  QMat inv = qmat(s, s);
  for (size_t j = 0; j < s; ++j) {
    QVec e(s, Rat(0));
    e[j] = 1;
    auto col = solve(gram, e);
    for (size_t i = 0; i < s; ++i) inv[i][j] = (*col)[i];
  }
  QMat g = matmul(inv, vt);  // s x n
  for (auto& row : g) h.pos.push_back(row);
  return h;
}

std::optional<QVec> cone_coords(const QVec& point, const std::vector<QVec>& rays) {
  size_t n = point.size();
  QMat cols = qmat(n, rays.size());
  for (size_t j = 0; j < rays.size(); ++j)
    for (size_t i = 0; i < n; ++i) cols[i][j] = rays[j][i];
  auto t = solve(cols, point);
  if (!t) return std::nullopt;
  // solve() may return a pseudo-solution when inconsistent; verify.
  QVec back(n, Rat(0));
  for (size_t j = 0; j < rays.size(); ++j) back = add(back, scale(rays[j], (*t)[j]));
  if (back != point) return std::nullopt;
  return t;
}

bool in_open_cone(const QVec& point, const std::vector<QVec>& rays) {
  if (rays.empty()) return is_zero(point);
  auto t = cone_coords(point, rays);
  if (!t) return false;
  return std::all_of(t->begin(), t->end(), [](const Rat& x) { return x > 0; });
}

bool in_closed_cone(const QVec& point, const std::vector<QVec>& rays) {
  if (rays.empty()) return is_zero(point);
  auto t = cone_coords(point, rays);
  if (!t) return false;
  return std::all_of(t->begin(), t->end(), [](const Rat& x) { return x >= 0; });
}

bool member(const std::vector<std::string>& face, const QVec& point, const PolySet& set) {
  for (const auto& p : set.pieces) {
    if (p.face != face) continue;
    if (in_open_cone(point, p.rays)) return true;
  }
  return false;
}

namespace {

// Facet normals of a full-dimensional pointed cone given by rays, as
// inequality rows valid on the whole cone with a (d-1)-dimensional zero set.
std::vector<QVec> facet_normals(const std::vector<QVec>& rays, size_t d) {
  std::vector<QVec> out;
  if (d == 0) return out;
  if (d == 1) return out;  // a single ray has no facets
  QMat rows;
  for (const auto& r : rays) rows.push_back(r);
  std::set<QVec> seen;
  size_t k = d - 1;
  std::vector<size_t> c(k);
  for (size_t i = 0; i < k; ++i) c[i] = i;
  if (rays.size() < k) return out;
  while (true) {
    QMat sub;
    for (auto i : c) sub.push_back(rays[i]);
    QMat ns = nullspace(sub);
    if (ns.size() == 1) {
      for (int s : {1, -1}) {
        QVec n = scale(ns[0], Rat(s));
        bool valid = true, strict = false;
        for (const auto& r : rays) {
          Rat p = dot(n, r);
          if (p < 0) {
            valid = false;
            break;
          }
          if (p > 0) strict = true;
        }
        if (!valid || !strict) continue;
        QMat act;
        for (const auto& r : rays)
          if (dot(n, r) == 0) act.push_back(r);
        if (rank(act) != d - 1) continue;
        QVec np = primitive(n);
        if (seen.insert(np).second) out.push_back(np);
      }
    }
    long i = static_cast<long>(k) - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == static_cast<size_t>(i) + rays.size() - k) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (size_t j = static_cast<size_t>(i) + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<QVec>> triangulate_in_coords(const std::vector<QVec>& rays, size_t d);

// One pulling step: apex is the lexicographically greatest ray.
std::vector<std::vector<QVec>> pull(const std::vector<QVec>& rays, size_t d) {
  QMat m;
  for (const auto& r : rays) m.push_back(r);
  if (rank(m) != d) throw InvalidSpec("triangulate: rays do not span the expected dimension");
  if (rays.size() == d) return {rays};
  QVec apex = rays[0];
  for (const auto& r : rays) apex = std::max(apex, r);
  auto normals = facet_normals(rays, d);
  std::vector<std::vector<QVec>> out;
  for (const auto& n : normals) {
    if (dot(n, apex) == 0) continue;  // facet contains the apex
    std::vector<QVec> on_facet;
    for (const auto& r : rays)
      if (dot(n, r) == 0) on_facet.push_back(r);
    for (auto piece : triangulate_in_coords(on_facet, d - 1)) {
      piece.push_back(apex);
      out.push_back(std::move(piece));
    }
  }
  return out;
}

std::vector<std::vector<QVec>> triangulate_in_coords(const std::vector<QVec>& rays, size_t d) {
  if (d == 0 || rays.empty()) return {};
  if (d == 1) {
    // All rays are positive multiples of one another on a pointed ray.
    return {{rays.front()}};
  }
  return pull(rays, d);
}

}  // namespace

std::vector<std::vector<QVec>> triangulate_rays(std::vector<QVec> rays) {
  // Normalize and dedupe, keeping first-occurrence order.
  std::vector<QVec> rs;
  std::set<QVec> seen;
  for (auto& r : rays) {
    if (is_zero(r)) continue;
    QVec p = primitive(r);
    if (seen.insert(p).second) rs.push_back(std::move(p));
  }
  if (rs.empty()) return {};
  // Pointedness: some c with <c, r> > 0 for all rays.
  {
    HSys dual;
    dual.dim = rs[0].size();
    for (const auto& r : rs) dual.pos.push_back(r);
    if (!strict_feasible(dual)) throw NotPointed("rays do not span a pointed cone");
  }
  QMat m;
  for (const auto& r : rs) m.push_back(r);
  size_t d = rank(m);
  if (d == rs.size()) return {rs};  // already simplicial
  // Work inside the span.
  QMat spanb;  // basis rows of the span
  {
    QMat a = m;
    auto piv = rref(a);
    for (size_t i = 0; i < piv.size(); ++i) spanb.push_back(a[i]);
  }
  // Coordinates of rays in the span basis.
  QMat bt = transpose(spanb);
  std::vector<QVec> zr;
  for (const auto& r : rs) {
    auto z = solve(bt, r);
    zr.push_back(*z);
  }
  auto pieces_z = triangulate_in_coords(zr, d);
  std::vector<std::vector<QVec>> out;
  for (const auto& pz : pieces_z) {
    std::vector<QVec> piece;
    for (const auto& z : pz) {
      QVec x(rs[0].size(), Rat(0));
      for (size_t k = 0; k < spanb.size(); ++k) x = add(x, scale(spanb[k], z[k]));
      piece.push_back(primitive(x));
    }
    out.push_back(std::move(piece));
  }
  return out;
}

bool open_cones_disjoint(const std::vector<QVec>& a, const std::vector<QVec>& b, size_t ambient) {
  HSys ha = cone_to_H(a, ambient);
  HSys hb = cone_to_H(b, ambient);
  HSys joint;
  joint.dim = ambient;
  joint.eq = ha.eq;
  for (const auto& r : hb.eq) joint.eq.push_back(r);
  joint.pos = ha.pos;
  for (const auto& r : hb.pos) joint.pos.push_back(r);
  if (a.empty() && b.empty()) return false;  // both are the origin
  if (a.empty() || b.empty()) return true;   // origin never meets an open cone
  return !strict_feasible(joint);
}

}  // namespace motivic
