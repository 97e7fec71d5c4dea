#include "motivic/functions.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace motivic {

FunctionV& FunctionV::operator+=(const FunctionV& o) {
  for (const auto& p : o.pieces) pieces.push_back(p);
  return *this;
}

FunctionV lift(const SncModel& model, const MotivicFunction& f) {
  FunctionV g;
  for (const auto& term : f.terms) {
    const StratumData* st = model.stratum(term.piece.face);
    if (!st) throw InvalidSpec("lift: function references a missing stratum");
    if (term.coeff.is_zero()) continue;
    FunctionPiece p;
    p.coeff = term.coeff * st->cls.limit_L1();
    p.carrier = term.piece;
    p.density = term.density;
    if (p.coeff.is_zero() || p.density.is_zero()) continue;
    g.pieces.push_back(std::move(p));
  }
  return g;
}

MotClass integrate_V(const SncModel& model, const FunctionV& g) {
  MotClass total;
  for (const auto& p : g.pieces) {
    if (!model.has_stratum(p.carrier.face))
      throw InvalidSpec("integrate_V: piece on a missing stratum");
    QVec a = model.discrepancies(p.carrier.face);
    ExpDensity dens = p.density.shift_exponent(scale(a, Rat(-1)));
    total += p.coeff * integrate_carrier(dens, p.carrier.rays);
  }
  return total;
}

namespace {

struct FmLeaf {
  QMat rows;        // strict inequalities over (u, tau); u slots zeroed out
  ExpDensity dens;  // over (u, tau); u slots integrated away
};

// Integrates out the first `nu` coordinates of the system, branching over the
// active lower/upper bound; infeasible branches are pruned exactly.
void fm_eliminate(QMat rows, ExpDensity dens, size_t var, std::vector<FmLeaf>& out) {
  if (dens.is_zero()) return;
  if (var == 0) {
    out.push_back({std::move(rows), std::move(dens)});
    return;
  }
  size_t v = var - 1;
  size_t dim = dens.dim();
  std::vector<AffineForm> lowers, uppers;
  QMat rest;
  for (const auto& r : rows) {
    if (r[v] == 0) {
      rest.push_back(r);
      continue;
    }
    // a*z_v + <r', z'> > 0  =>  z_v > -r'/a (a > 0) or z_v < r'/(-a) (a < 0).
    AffineForm f{QVec(dim, Rat(0)), Rat(0)};
    for (size_t j = 0; j < dim; ++j)
      if (j != v) f.lin[j] = -r[j] / r[v];
    if (r[v] > 0)
      lowers.push_back(std::move(f));
    else
      uppers.push_back(std::move(f));
  }
  auto feasible = [&](const QMat& rs) {
    HSys h;
    h.dim = dim;
    h.pos = rs;
    return strict_feasible(h);
  };
  auto bound_row = [&](const AffineForm& hi, const AffineForm& lo) {
    // hi - lo > 0
    QVec r(dim, Rat(0));
    for (size_t j = 0; j < dim; ++j) r[j] = hi.lin[j] - lo.lin[j];
    return r;
  };
  if (lowers.empty() && uppers.empty())
    throw NonIntegrable("fiber direction is a free line");
  if (lowers.empty()) {
    for (size_t b = 0; b < uppers.size(); ++b) {
      QMat next = rest;
      bool ok = true;
      for (size_t b2 = 0; b2 < uppers.size(); ++b2) {
        if (b2 == b) continue;
        QVec r = bound_row(uppers[b2], uppers[b]);
        if (is_zero(r)) {
          if (b2 < b) ok = false;  // duplicate bound: keep the first only
          continue;
        }
        next.push_back(std::move(r));
      }
      if (!ok || !feasible(next)) continue;
      fm_eliminate(std::move(next), integrate_var(dens, v, std::nullopt, uppers[b]), v, out);
    }
    return;
  }
  if (uppers.empty()) {
    for (size_t a = 0; a < lowers.size(); ++a) {
      QMat next = rest;
      bool ok = true;
      for (size_t a2 = 0; a2 < lowers.size(); ++a2) {
        if (a2 == a) continue;
        QVec r = bound_row(lowers[a], lowers[a2]);
        if (is_zero(r)) {
          if (a2 < a) ok = false;
          continue;
        }
        next.push_back(std::move(r));
      }
      if (!ok || !feasible(next)) continue;
      fm_eliminate(std::move(next), integrate_var(dens, v, lowers[a], std::nullopt), v, out);
    }
    return;
  }
  for (size_t a = 0; a < lowers.size(); ++a)
    for (size_t b = 0; b < uppers.size(); ++b) {
      QMat next = rest;
      bool ok = true;
      for (size_t a2 = 0; a2 < lowers.size(); ++a2) {
        if (a2 == a) continue;
        QVec r = bound_row(lowers[a], lowers[a2]);
        if (is_zero(r)) {
          if (a2 < a) ok = false;
          continue;
        }
        next.push_back(std::move(r));
      }
      for (size_t b2 = 0; b2 < uppers.size(); ++b2) {
        if (b2 == b) continue;
        QVec r = bound_row(uppers[b2], uppers[b]);
        if (is_zero(r)) {
          if (b2 < b) ok = false;
          continue;
        }
        next.push_back(std::move(r));
      }
      next.push_back(bound_row(uppers[b], lowers[a]));  // nonempty interval
      if (!ok || is_zero(next.back())) continue;
      if (!feasible(next)) continue;
      fm_eliminate(std::move(next), integrate_var(dens, v, lowers[a], uppers[b]), v, out);
    }
}

// Relative integrability along the fiber recession cone.
void check_relative_integrability(const ExpDensity& dens_t, const QMat& n_rows, size_t r) {
  HSys h;
  h.dim = r;
  h.eq = n_rows;
  for (size_t i = 0; i < r; ++i) {
    QVec row(r, Rat(0));
    row[i] = 1;
    h.pos.push_back(std::move(row));
  }
  auto rays = cone_rays(h);
  for (const auto& rho : rays)
    for (const auto& term : dens_t.terms())
      if (dot(term.lin, rho) >= 0)
        throw NonIntegrable("density does not decay along a fiber recession direction");
}

}  // namespace

FunctionV pushforward(const SncModel& source, const SncModel& target, const ModelMorphism& m,
                      const FunctionV& g) {
  (void)source;
  FunctionV out;
  for (const auto& piece : g.pieces) {
    const Face& face_i = piece.carrier.face;
    Face face_j = m.face_image(face_i);
    QMat bmat = m.face_matrix(face_i, face_j);
    if (!target.has_stratum(face_j))
      throw InvalidSpec("pushforward: image face is not a stratum of the target");
    size_t r = piece.carrier.dim();
    MotClass coeff = m.map_class(piece.coeff);

    // Density on the carrier coordinates, including the source weight e^{-A_X}.
    QVec a_x = source.discrepancies(face_i);
    ExpDensity weighted = piece.density.shift_exponent(scale(a_x, Rat(-1)));
    QMat vmat = qmat(face_i.size(), r);
    for (size_t j = 0; j < r; ++j)
      for (size_t i = 0; i < face_i.size(); ++i) vmat[i][j] = piece.carrier.rays[j][i];
    ExpDensity dens_t = weighted.substitute(vmat, QVec(face_i.size(), Rat(0)));
    Rat norm_src = lattice_norm(piece.carrier.rays);

    // Composite linear map N: carrier coordinates -> target face coordinates.
    QMat nmat = matmul(bmat, vmat);  // |J| x r
    std::vector<QVec> images;
    for (size_t k = 0; k < r; ++k) {
      QVec col(face_j.size(), Rat(0));
      for (size_t j2 = 0; j2 < face_j.size(); ++j2) col[j2] = nmat[j2][k];
      if (!is_zero(col)) images.push_back(std::move(col));
    }

    check_relative_integrability(dens_t, nmat, r);

    if (images.empty()) {
      // Image is the vertex; integrate the whole carrier.
      if (!face_j.empty()) throw InvalidSpec("pushforward: carrier collapses inside a nonempty face");
      Rat v = norm_src * integrate_orthant(dens_t);
      FunctionPiece p;
      p.coeff = coeff;
      p.carrier = {face_j, {}};
      p.density = ExpDensity::constant(0, v);
      if (v != 0) out.pieces.push_back(std::move(p));
      continue;
    }

    QVec a_y = target.discrepancies(face_j);
    for (auto& wrays : triangulate_rays(images)) {
      size_t s = wrays.size();
      // N_W with V_W * N_W = N: rows of N_W are barycentric coordinates of
      // N's columns in the W-piece basis.
      QMat wcols = qmat(face_j.size(), s);
      for (size_t k = 0; k < s; ++k)
        for (size_t j2 = 0; j2 < face_j.size(); ++j2) wcols[j2][k] = wrays[k][j2];
      QMat nw = qmat(s, r);
      {
        QMat gram = matmul(transpose(wcols), wcols);
        QMat rhs = matmul(transpose(wcols), nmat);  // s x r
        for (size_t c = 0; c < r; ++c) {
          QVec col(s, Rat(0));
          for (size_t i = 0; i < s; ++i) col[i] = rhs[i][c];
          auto x = solve(gram, col);
          for (size_t i = 0; i < s; ++i) nw[i][c] = (*x)[i];
        }
      }
      // Right inverse P (r x s) and kernel basis K (r x (r-s)).
      QMat p = qmat(r, s);
      for (size_t c = 0; c < s; ++c) {
        QVec e(s, Rat(0));
        e[c] = 1;
        auto x = solve(nw, e);
        if (!x) throw InvalidSpec("pushforward: no right inverse for the fiber parametrization");
        for (size_t i = 0; i < r; ++i) p[i][c] = (*x)[i];
      }
      QMat kbasis = nullspace(nw);  // rows span ker
      size_t nu = kbasis.size();
      // t = K u + P tau as an r x (nu + s) substitution matrix.
      QMat sub = qmat(r, nu + s);
      for (size_t i = 0; i < r; ++i) {
        for (size_t k = 0; k < nu; ++k) sub[i][k] = kbasis[k][i];
        for (size_t c = 0; c < s; ++c) sub[i][nu + c] = p[i][c];
      }
      Rat jac = det([&] {
        QMat kp = qmat(r, r);
        for (size_t i = 0; i < r; ++i) {
          for (size_t k = 0; k < nu; ++k) kp[i][k] = kbasis[k][i];
          for (size_t c = 0; c < s; ++c) kp[i][nu + c] = p[i][c];
        }
        return kp;
      }());
      if (jac < 0) jac = -jac;
      ExpDensity dens_zu = dens_t.substitute(sub, QVec(r, Rat(0))) * jac;

      // Constraint rows: t_i > 0 and tau_k > 0.
      QMat rows;
      for (size_t i = 0; i < r; ++i) rows.push_back(sub[i]);
      for (size_t c = 0; c < s; ++c) {
        QVec row(nu + s, Rat(0));
        row[nu + c] = 1;
        rows.push_back(std::move(row));
      }
      std::vector<FmLeaf> leaves;
      try {
        fm_eliminate(rows, dens_zu, nu, leaves);
      } catch (const NonConvergent& e) {
        throw NonIntegrable(std::string("fiber integral diverges: ") + e.what());
      }

      // kappa and the conversion to ambient target coordinates.
      Rat kappa = norm_src / lattice_norm(wrays);
      QMat gmat;  // tau = G y
      {
        QMat gram = matmul(transpose(wcols), wcols);
        QMat wt = transpose(wcols);  // s x |J|
        gmat = qmat(s, face_j.size());
        for (size_t c = 0; c < face_j.size(); ++c) {
          QVec col(s, Rat(0));
          for (size_t i = 0; i < s; ++i) col[i] = wt[i][c];
          auto x = solve(gram, col);
          for (size_t i = 0; i < s; ++i) gmat[i][c] = (*x)[i];
        }
      }
      for (auto& leaf : leaves) {
        // Restrict to tau-space.
        QMat drop = qmat(nu + s, s);
        for (size_t c = 0; c < s; ++c) drop[nu + c][c] = 1;
        ExpDensity dens_tau = leaf.dens.substitute(drop, QVec(nu + s, Rat(0)));
        if (dens_tau.is_zero()) continue;
        HSys region;
        region.dim = s;
        for (const auto& row : leaf.rows) {
          QVec rr(s, Rat(0));
          bool involves_u = false;
          for (size_t k = 0; k < nu; ++k) involves_u |= row[k] != 0;
          if (involves_u) throw InvalidSpec("internal: leftover fiber variable in a chamber row");
          for (size_t c = 0; c < s; ++c) rr[c] = row[nu + c];
          if (!is_zero(rr)) region.pos.push_back(std::move(rr));
        }
        if (!strict_feasible(region)) continue;
        auto rays_tau = cone_rays(region);
        for (auto& chamber : triangulate_rays(rays_tau)) {
          if (chamber.size() != s) continue;  // lower-dimensional sliver
          // psi on the chamber, in ambient y coordinates.
          ExpDensity psi = dens_tau.substitute(gmat, QVec(s, Rat(0)));
          psi = psi.shift_exponent(a_y) * kappa;
          FunctionPiece outp;
          outp.coeff = coeff;
          outp.carrier.face = face_j;
          for (const auto& c : chamber) {
            QVec y(face_j.size(), Rat(0));
            for (size_t k = 0; k < s; ++k) y = add(y, scale(wrays[k], c[k]));
            outp.carrier.rays.push_back(primitive(y));
          }
          outp.density = std::move(psi);
          out.pieces.push_back(std::move(outp));
        }
      }
    }
  }
  // Deterministic merge of identical carriers.
  FunctionV merged;
  for (auto& p : out.pieces) {
    bool done = false;
    for (auto& q : merged.pieces) {
      if (q.carrier.face == p.carrier.face && q.carrier.rays == p.carrier.rays &&
          q.coeff == p.coeff) {
        q.density += p.density;
        done = true;
        break;
      }
    }
    if (!done) merged.pieces.push_back(std::move(p));
  }
  auto& ps = merged.pieces;
  ps.erase(std::remove_if(ps.begin(), ps.end(),
                          [](const FunctionPiece& p) { return p.density.is_zero() || p.coeff.is_zero(); }),
           ps.end());
  return merged;
}

FunctionV multiply(const SncModel& model, const MotivicFunction& f, const FunctionV& g) {
  (void)model;
  FunctionV out;
  for (const auto& piece : g.pieces) {
    size_t r = piece.carrier.dim();
    size_t n = piece.carrier.ambient();
    QMat vmat = qmat(n, r);
    for (size_t j = 0; j < r; ++j)
      for (size_t i = 0; i < n; ++i) vmat[i][j] = piece.carrier.rays[j][i];
    for (const auto& term : f.terms) {
      if (term.piece.face != piece.carrier.face) continue;
      // Intersect the carrier with the term's cone, in carrier coordinates.
      HSys h;
      h.dim = r;
      HSys fh = cone_to_H(term.piece.rays, n);
      for (const auto& row : fh.pos) {
        QVec rr(r, Rat(0));
        for (size_t c = 0; c < r; ++c)
          for (size_t i = 0; i < n; ++i) rr[c] += row[i] * vmat[i][c];
        h.pos.push_back(std::move(rr));
      }
      for (const auto& row : fh.eq) {
        QVec rr(r, Rat(0));
        for (size_t c = 0; c < r; ++c)
          for (size_t i = 0; i < n; ++i) rr[c] += row[i] * vmat[i][c];
        h.eq.push_back(std::move(rr));
      }
      for (size_t c = 0; c < r; ++c) {
        QVec rr(r, Rat(0));
        rr[c] = 1;
        h.pos.push_back(std::move(rr));
      }
      if (r == 0) {
        // Point carrier: it lies in the term's cone iff the cone is the vertex.
        if (!term.piece.rays.empty()) continue;
        FunctionPiece p = piece;
        p.coeff = piece.coeff * term.coeff;
        p.density = piece.density * term.density;
        if (!p.coeff.is_zero() && !p.density.is_zero()) out.pieces.push_back(std::move(p));
        continue;
      }
      if (!strict_feasible(h)) continue;
      auto rays_t = cone_rays(h);
      for (auto& piece_t : triangulate_rays(rays_t)) {
        if (piece_t.size() != r) continue;
        FunctionPiece p;
        p.coeff = piece.coeff * term.coeff;
        p.carrier.face = piece.carrier.face;
        for (const auto& c : piece_t) {
          QVec x(n, Rat(0));
          for (size_t k = 0; k < r; ++k) x = add(x, scale(piece.carrier.rays[k], c[k]));
          p.carrier.rays.push_back(primitive(x));
        }
        p.density = piece.density * term.density;
        if (!p.coeff.is_zero() && !p.density.is_zero()) out.pieces.push_back(std::move(p));
      }
    }
  }
  return out;
}

namespace {

struct SpanKey {
  Face face;
  QMat basis;  // rref basis of the carrier span
  auto operator<=>(const SpanKey&) const = default;
};

SpanKey span_key(const FunctionPiece& p) {
  QMat m;
  for (const auto& r : p.carrier.rays) m.push_back(r);
  rref(m);
  QMat basis;
  for (const auto& row : m)
    if (!is_zero(row)) basis.push_back(row);
  return {p.carrier.face, basis};
}

}  // namespace

bool functions_equal(const FunctionV& a, const FunctionV& b, std::string* why) {
  std::map<SpanKey, std::vector<std::pair<const FunctionPiece*, int>>> groups;
  for (const auto& p : a.pieces) groups[span_key(p)].push_back({&p, 1});
  for (const auto& p : b.pieces) groups[span_key(p)].push_back({&p, -1});
  for (const auto& [key, pieces] : groups) {
    size_t d = key.basis.size();
    if (d == 0) {
      // Point carriers: constants must cancel, coefficient-weighted.
      std::map<MotClass, ExpDensity> net;
      ExpDensity zero(0);
      MotClass dummy;
      // Weighted sum: coeff (x) density with density constant of dim 0.
      // Compare as a single MotClass-valued constant.
      MotClass total_a, total_b;
      for (const auto& [p, sign] : pieces) {
        Rat c(0);
        for (const auto& t : p->density.terms()) c += t.coeff;
        if (sign > 0)
          total_a += p->coeff * c;
        else
          total_b += p->coeff * c;
      }
      if (!(total_a == total_b)) {
        if (why) *why = "vertex values differ on face " + Monomial(key.face).str();
        return false;
      }
      continue;
    }
    // Carrier cones in span coordinates.
    QMat bt = transpose(key.basis);
    std::vector<std::vector<QVec>> zrays(pieces.size());
    std::vector<QVec> hyperplanes;
    std::set<QVec> seen;
    for (size_t i = 0; i < pieces.size(); ++i) {
      for (const auto& ray : pieces[i].first->carrier.rays) {
        auto z = solve(bt, ray);
        zrays[i].push_back(*z);
      }
      HSys h = cone_to_H(zrays[i], d);
      for (const auto& row : h.pos) {
        QVec pr = primitive(row);
        QVec npr = scale(pr, Rat(-1));
        if (seen.count(pr) || seen.count(npr)) continue;
        seen.insert(pr);
        hyperplanes.push_back(pr);
      }
    }
    size_t hn = hyperplanes.size();
    if (hn > 20) throw Unsupported("too many hyperplanes in a common refinement");
    for (size_t mask = 0; mask < (size_t(1) << hn); ++mask) {
      HSys region;
      region.dim = d;
      for (size_t h = 0; h < hn; ++h)
        region.pos.push_back(mask & (size_t(1) << h) ? hyperplanes[h]
                                                     : scale(hyperplanes[h], Rat(-1)));
      if (!strict_feasible(region)) continue;
      auto rays = cone_rays(region);
      QVec pt(d, Rat(0));
      for (const auto& r : rays) pt = add(pt, r);
      if (is_zero(pt)) continue;
      // Net density at this cell, weighted by coefficients: group by coeff.
      std::map<std::string, std::pair<MotClass, ExpDensity>> net;
      bool any = false;
      // Collect signed densities of pieces containing pt.
      std::vector<std::pair<const FunctionPiece*, int>> present;
      for (size_t i = 0; i < pieces.size(); ++i)
        if (in_open_cone(pt, zrays[i])) present.push_back({pieces[i].first, pieces[i].second});
      if (present.empty()) continue;
      any = true;
      (void)any;
      // The cell must carry equal MotClass-weighted densities: compare the sum
      // of coeff (x) density term-wise. Since MotClass does not multiply
      // ExpDensity, compare per distinct coefficient rendering.
      std::map<std::string, ExpDensity> by_coeff;
      size_t adim = key.face.size();
      for (const auto& [p, sign] : present) {
        auto it = by_coeff.find(p->coeff.str());
        ExpDensity dsigned = sign > 0 ? p->density : p->density * Rat(-1);
        if (it == by_coeff.end())
          by_coeff[p->coeff.str()] = dsigned;
        else
          it->second += dsigned;
      }
      (void)adim;
      for (const auto& [cstr, dens] : by_coeff) {
        if (!dens.is_zero()) {
          if (why)
            *why = "densities differ on a cell of face " + Monomial(key.face).str() +
                   " (coefficient " + cstr + "): " + dens.str();
          return false;
        }
      }
    }
  }
  return true;
}

CheckReport projection_formula_check(const SncModel& source, const SncModel& target,
                                     const ModelMorphism& m, const MotivicFunction& f,
                                     const FunctionV& g) {
  MotivicFunction pulled = pullback(source, m, f);
  FunctionV lhs = pushforward(source, target, m, multiply(source, pulled, g));
  FunctionV rhs = multiply(target, f, pushforward(source, target, m, g));
  CheckReport rep;
  std::string why;
  rep.equal = functions_equal(lhs, rhs, &why);
  auto render = [](const FunctionV& v) {
    std::ostringstream os;
    os << v.pieces.size() << " piece(s)";
    return os.str();
  };
  rep.lhs = render(lhs);
  rep.rhs = render(rhs);
  rep.detail = rep.equal ? "projection formula holds" : why;
  return rep;
}

CheckReport functoriality_check(const SncModel& model_x, const SncModel& model_y,
                                const SncModel& model_z, const ModelMorphism& m_xy,
                                const ModelMorphism& m_yz, const FunctionV& g) {
  FunctionV via_y = pushforward(model_y, model_z, m_yz, pushforward(model_x, model_y, m_xy, g));
  ModelMorphism composite = m_xy.compose(m_yz);
  FunctionV direct = pushforward(model_x, model_z, composite, g);
  CheckReport rep;
  std::string why;
  bool pieces_equal = functions_equal(via_y, direct, &why);
  MotClass tx = integrate_V(model_x, g);
  MotClass ty = integrate_V(model_y, pushforward(model_x, model_y, m_xy, g));
  bool fubini = ty == m_xy.map_class(tx);
  rep.equal = pieces_equal && fubini;
  rep.lhs = integrate_V(model_z, via_y).str();
  rep.rhs = integrate_V(model_z, direct).str();
  if (!pieces_equal)
    rep.detail = "composite push-forwards differ: " + why;
  else if (!fubini)
    rep.detail = "Fubini identity fails: t_Y(b_! g) = " + ty.str() + " vs " +
                 m_xy.map_class(tx).str();
  else
    rep.detail = "functoriality and Fubini hold";
  return rep;
}

}  // namespace motivic
