#include "motivic/atomic.hpp"

#include <algorithm>
#include <set>

namespace motivic {

namespace {

AtomicScalar scalar_pow(AtomicScalar base, long e) {
  AtomicScalar acc = AtomicScalar::one();
  for (long i = 0; i < e; ++i) acc = acc * base;
  return acc;
}

AtomicScalar L_minus_one_pow(long e) {
  return scalar_pow(AtomicScalar(Laurent::mono(1) - Laurent::one()), e);
}

void require_integer_model(const SncModel& model) {
  if (!model.integer_discrepancies())
    throw InvalidSpec("the atomic engine requires integer discrepancies");
}

}  // namespace

ValidationReport validate_cell(const SncModel& model, const LatticeCell& cell) {
  ValidationReport rep;
  auto issue = [&](const std::string& m) { rep.issues.push_back({"cell", m}); };
  if (!model.has_stratum(cell.face)) issue("face is not a stratum");
  if (cell.offset.size() != cell.face.size()) issue("offset dimension mismatch");
  for (const auto& v : cell.offset)
    if (v < 1) issue("offset entries must be >= 1");
  QMat cols;
  for (const auto& g : cell.gens) {
    if (g.size() != cell.face.size()) issue("generator dimension mismatch");
    QVec col;
    bool nonneg = true;
    for (const auto& e : g) {
      nonneg &= e >= 0;
      col.push_back(Rat(e));
    }
    if (!nonneg) issue("generator entries must be >= 0");
    cols.push_back(col);
  }
  if (!cols.empty() && rank(cols) != cols.size()) issue("generators must be independent");
  return rep;
}

bool cell_contains(const LatticeCell& cell, const std::vector<Int>& point) {
  if (point.size() != cell.offset.size()) return false;
  size_t n = point.size(), d = cell.gens.size();
  QMat m = qmat(n, d);
  QVec b(n, Rat(0));
  for (size_t i = 0; i < n; ++i) {
    b[i] = Rat(point[i] - cell.offset[i]);
    for (size_t k = 0; k < d; ++k) m[i][k] = Rat(cell.gens[k][i]);
  }
  auto lam = solve(m, b);
  if (!lam) return false;
  if (matvec(m, *lam) != b) return false;
  for (const auto& l : *lam)
    if (l < 0 || den(l) != 1) return false;
  return true;
}

ValidationReport validate_cells(const SncModel& model, const PresburgerSet& s, long bound) {
  ValidationReport rep;
  for (const auto& c : s.cells) {
    auto r = validate_cell(model, c);
    rep.issues.insert(rep.issues.end(), r.issues.begin(), r.issues.end());
  }
  if (!rep.ok()) return rep;
  // Disjointness by brute force per face, within the box [1, bound]^n.
  std::set<Face> faces;
  for (const auto& c : s.cells) faces.insert(c.face);
  for (const auto& face : faces) {
    std::vector<const LatticeCell*> cs;
    for (const auto& c : s.cells)
      if (c.face == face) cs.push_back(&c);
    if (cs.size() < 2) continue;
    size_t n = face.size();
    std::vector<Int> pt(n, Int(1));
    while (true) {
      int hits = 0;
      for (const auto* c : cs) hits += cell_contains(*c, pt) ? 1 : 0;
      if (hits > 1) {
        rep.issues.push_back({"set", "cells overlap on face " + Monomial(face).str()});
        return rep;
      }
      size_t i = 0;
      while (i < n && pt[i] == bound) pt[i++] = 1;
      if (i == n) break;
      pt[i] += 1;
    }
    if (n == 0) continue;
  }
  return rep;
}

AtomicScalar cell_sum(const LatticeCell& cell, const AffineForm& beta,
                      const std::vector<long>& powers) {
  size_t n = cell.ambient(), d = cell.dim();
  if (beta.lin.size() != n || powers.size() != n)
    throw InvalidSpec("cell_sum: dimension mismatch");
  // Exponent data: e0 = beta(offset), c_k = <beta_lin, gen_k>.
  Rat e0 = beta.cst;
  for (size_t i = 0; i < n; ++i) e0 += beta.lin[i] * Rat(cell.offset[i]);
  if (den(e0) != 1) throw InvalidSpec("cell_sum: exponent not integral at the offset");
  std::vector<long> c(d, 0);
  for (size_t k = 0; k < d; ++k) {
    Rat ck(0);
    for (size_t i = 0; i < n; ++i) ck += beta.lin[i] * Rat(cell.gens[k][i]);
    if (den(ck) != 1) throw InvalidSpec("cell_sum: exponent not integral along a generator");
    if (ck >= 0) throw NonConvergent("cell_sum: nonnegative exponent along a generator");
    c[k] = static_cast<long>(num(ck));
  }
  // Monomial expansion in the lattice parameters.
  ExpDensity mono(n);
  {
    ExpTerm t;
    t.coeff = Rat(1);
    t.powers = powers;
    t.lin = QVec(n, Rat(0));
    t.aff = Rat(0);
    mono.add_term(t);
  }
  QMat u = qmat(n, d);
  QVec v(n, Rat(0));
  for (size_t i = 0; i < n; ++i) {
    v[i] = Rat(cell.offset[i]);
    for (size_t k = 0; k < d; ++k) u[i][k] = Rat(cell.gens[k][i]);
  }
  ExpDensity in_lambda = mono.substitute(u, v);
  AtomicScalar total;
  for (const auto& term : in_lambda.terms()) {
    if (den(term.coeff) != 1)
      throw InvalidSpec("cell_sum: non-integer coefficient in the lattice expansion");
    AtomicScalar prod(Laurent(num(term.coeff)));
    for (size_t k = 0; k < d; ++k) prod = prod * poly_sum_from_zero(term.powers[k], c[k]);
    total += prod;
  }
  long e0i = static_cast<long>(num(e0));
  return AtomicScalar(Laurent::mono(e0i)) * total;
}

PresburgerSet full_skeleton_cells(const SncModel& model) {
  PresburgerSet s;
  for (const auto& st : model.strata) {
    LatticeCell c;
    c.face = st.I;
    c.offset.assign(st.I.size(), Int(1));
    for (size_t i = 0; i < st.I.size(); ++i) {
      std::vector<Int> g(st.I.size(), Int(0));
      g[i] = 1;
      c.gens.push_back(std::move(g));
    }
    s.cells.push_back(std::move(c));
  }
  return s;
}

AtomicClass atomic_measure(const SncModel& model, const PresburgerSet& s) {
  require_integer_model(model);
  AtomicClass total;
  for (const auto& cell : s.cells) {
    const StratumData* st = model.stratum(cell.face);
    if (!st) throw InvalidSpec("cell on a missing stratum " + Monomial(cell.face).str());
    AffineForm beta{scale(model.discrepancies(cell.face), Rat(-1)), Rat(0)};
    AtomicScalar sum = cell_sum(cell, beta, std::vector<long>(cell.face.size(), 0));
    total += st->cls * (L_minus_one_pow(static_cast<long>(cell.face.size())) * sum);
  }
  return total;
}

AtomicClass atomic_integrate(const SncModel& model, const std::vector<AtomicTerm>& terms) {
  require_integer_model(model);
  AtomicClass total;
  for (const auto& term : terms) {
    const StratumData* st = model.stratum(term.cell.face);
    if (!st) throw InvalidSpec("term on a missing stratum");
    AffineForm beta = term.beta;
    QVec a = model.discrepancies(term.cell.face);
    for (size_t i = 0; i < a.size(); ++i) beta.lin[i] -= a[i];
    AtomicScalar sum = cell_sum(term.cell, beta, term.powers);
    total += (st->cls * term.coeff) * (L_minus_one_pow(static_cast<long>(term.cell.face.size())) * sum);
  }
  return total;
}

namespace {

struct DiagonalCell {
  // Per-coordinate offset and step; step 0 pins the coordinate to the offset.
  std::vector<Int> offset;
  std::vector<Int> step;
};

// Requires every generator to touch a single coordinate.
std::optional<DiagonalCell> as_diagonal(const LatticeCell& cell) {
  size_t n = cell.ambient();
  DiagonalCell d;
  d.offset = cell.offset;
  d.step.assign(n, Int(0));
  for (const auto& g : cell.gens) {
    long support = -1;
    for (size_t i = 0; i < n; ++i) {
      if (g[i] == 0) continue;
      if (support >= 0) return std::nullopt;
      support = static_cast<long>(i);
    }
    if (support < 0) return std::nullopt;
    if (d.step[static_cast<size_t>(support)] != 0) return std::nullopt;
    d.step[static_cast<size_t>(support)] = g[static_cast<size_t>(support)];
  }
  return d;
}

LatticeCell from_diagonal(const Face& face, const DiagonalCell& d) {
  LatticeCell c;
  c.face = face;
  c.offset = d.offset;
  for (size_t i = 0; i < d.step.size(); ++i) {
    if (d.step[i] == 0) continue;
    std::vector<Int> g(d.step.size(), Int(0));
    g[i] = d.step[i];
    c.gens.push_back(std::move(g));
  }
  return c;
}

Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

}  // namespace

PresburgerSet atomic_preimage_cells(const SncModel& blown, const ModelMorphism& m, const Face& t_set,
                                    const PresburgerSet& s) {
  PresburgerSet out;
  const std::string& exc = m.source_divisors.front();  // exceptional divisor id
  auto in_T = [&](const std::string& id) {
    return std::find(t_set.begin(), t_set.end(), id) != t_set.end();
  };
  for (const auto& st : blown.strata) {
    Face J = m.face_image(st.I);
    bool has_exc = std::find(st.I.begin(), st.I.end(), exc) != st.I.end();
    for (const auto& cell : s.cells) {
      if (cell.face != J) continue;
      if (!has_exc) {
        // The retraction is a coordinate identity on these faces.
        out.cells.push_back(cell);
        continue;
      }
      auto diag = as_diagonal(cell);
      if (!diag) throw Unsupported("atomic preimage needs diagonal generator cells");
      // Coordinates on the source face: x_0 (exceptional) then x_a, a in A.
      Face a_set;
      for (const auto& id : st.I)
        if (id != exc) a_set.push_back(id);
      // Index of each J-coordinate.
      auto jpos = [&](const std::string& id) {
        return static_cast<size_t>(std::find(J.begin(), J.end(), id) - J.begin());
      };
      // Split J into A\T, A n T, T\A.
      std::vector<std::string> a_only, a_and_t, t_only;
      for (const auto& id : J) {
        bool in_a = std::find(a_set.begin(), a_set.end(), id) != a_set.end();
        if (in_a && in_T(id))
          a_and_t.push_back(id);
        else if (in_a)
          a_only.push_back(id);
        else
          t_only.push_back(id);
      }
      // Pinned x_0 from t_only steps of 0.
      std::optional<Int> pinned;
      bool inconsistent = false;
      for (const auto& id : t_only) {
        size_t j = jpos(id);
        if (diag->step[j] == 0) {
          if (pinned && *pinned != diag->offset[j]) inconsistent = true;
          pinned = diag->offset[j];
        }
      }
      if (inconsistent) continue;
      bool tail_possible = !pinned.has_value();
      for (const auto& id : a_and_t) {
        if (diag->step[jpos(id)] == 0) tail_possible = false;
      }
      // Enumeration window and tail period.
      Int w(1);
      for (const auto& id : a_and_t) w = std::max(w, diag->offset[jpos(id)]);
      for (const auto& id : t_only) w = std::max(w, diag->offset[jpos(id)]);
      Int period(1);
      for (const auto& id : a_and_t) period = lcm_int(period, diag->step[jpos(id)]);
      for (const auto& id : t_only)
        if (diag->step[jpos(id)] != 0) period = lcm_int(period, diag->step[jpos(id)]);
      Int hi = w + period - 1;
      if (pinned) hi = std::max(hi, *pinned);

      auto x0_ok = [&](const Int& x0) {
        for (const auto& id : t_only) {
          size_t j = jpos(id);
          if (x0 < diag->offset[j]) return false;
          Int diff = x0 - diag->offset[j];
          if (diag->step[j] == 0) {
            if (diff != 0) return false;
          } else if (diff % diag->step[j] != 0) {
            return false;
          }
        }
        return true;
      };

      // Builds the fiber cell over a fixed (or tail) x_0.
      auto emit = [&](const Int& x0, bool tail) {
        DiagonalCell nc;
        size_t n = st.I.size();
        nc.offset.assign(n, Int(1));
        nc.step.assign(n, Int(0));
        nc.offset[0] = x0;
        nc.step[0] = tail ? period : Int(0);
        bool empty = false;
        for (size_t pos = 1; pos < n; ++pos) {
          const std::string& id = st.I[pos];
          size_t j = jpos(id);
          if (std::find(a_only.begin(), a_only.end(), id) != a_only.end()) {
            nc.offset[pos] = diag->offset[j];
            nc.step[pos] = diag->step[j];
            continue;
          }
          // id in A n T: x + x0 must lie in offset_j + step_j Z>=0, x >= 1.
          Int target = diag->offset[j] - x0;
          if (diag->step[j] == 0) {
            if (target < 1) {
              empty = true;
              break;
            }
            nc.offset[pos] = target;
            nc.step[pos] = 0;
          } else {
            // Smallest value >= max(1, target) congruent to target mod step.
            Int low = std::max(Int(1), target);
            Int step = diag->step[j];
            Int delta = ((target - low) % step + step) % step;
            nc.offset[pos] = low + delta;
            nc.step[pos] = step;
          }
        }
        if (!empty) out.cells.push_back(from_diagonal(st.I, nc));
      };

      // Singles below the stable window, then one periodic cell per residue.
      for (Int x0(1); x0 <= hi; ++x0) {
        if (!x0_ok(x0)) continue;
        bool tail = tail_possible && x0 >= w;
        emit(x0, tail);
      }
    }
  }
  return out;
}

CheckReport atomic_blowup_check(const SncModel& model, const BlowupSpec& spec,
                                const PresburgerSet& s) {
  require_integer_model(model);
  for (const auto& cell : s.cells) {
    auto rep = validate_cell(model, cell);
    if (!rep.ok()) throw InvalidSpec("invalid cell: " + rep.str());
  }
  AtomicClass lhs = atomic_measure(model, s);
  auto [blown, morph] = blow_up(model, spec);
  if (!blown.integer_discrepancies())
    throw InvalidSpec("blow-up produced non-integer discrepancies");
  PresburgerSet pre = atomic_preimage_cells(blown, morph, model.sorted_face(spec.T), s);
  AtomicClass rhs = atomic_measure(blown, pre);
  CheckReport rep;
  rep.lhs = lhs.str();
  rep.rhs = rhs.str();
  rep.equal = lhs.eq(rhs);
  rep.detail = rep.equal ? "atomic measures agree" : "atomic measures differ";
  return rep;
}

std::vector<AtomicTerm> atomic_pushforward(const SncModel& source, const SncModel& target,
                                           const ModelMorphism& m,
                                           const std::vector<AtomicTerm>& terms) {
  require_integer_model(source);
  require_integer_model(target);
  std::vector<AtomicTerm> out;
  for (const auto& term : terms) {
    for (long p : term.powers)
      if (p != 0) throw Unsupported("atomic push-forward of monomial factors");
    const Face& face_i = term.cell.face;
    Face face_j = m.face_image(face_i);
    if (!target.has_stratum(face_j)) throw InvalidSpec("image face is not a stratum");
    QMat b = m.face_matrix(face_i, face_j);
    size_t n = face_i.size(), nj = face_j.size(), d = term.cell.dim();
    // Image cell: offset B v, generators B U.
    QMat u = qmat(n, d);
    QVec v(n, Rat(0));
    for (size_t i = 0; i < n; ++i) {
      v[i] = Rat(term.cell.offset[i]);
      for (size_t k = 0; k < d; ++k) u[i][k] = Rat(term.cell.gens[k][i]);
    }
    QMat bu = matmul(b, u);  // nj x d
    QMat bu_cols;
    for (size_t k = 0; k < d; ++k) {
      QVec col(nj, Rat(0));
      for (size_t j = 0; j < nj; ++j) col[j] = bu[j][k];
      bu_cols.push_back(col);
    }
    if (!bu_cols.empty() && rank(bu_cols) != d)
      throw Unsupported("atomic push-forward with a nontrivial fiber lattice");
    QVec bv = matvec(b, v);
    LatticeCell image;
    image.face = face_j;
    for (const auto& x : bv) image.offset.push_back(num(x));
    for (size_t k = 0; k < d; ++k) {
      std::vector<Int> g;
      for (size_t j = 0; j < nj; ++j) g.push_back(num(bu[j][k]));
      image.gens.push_back(std::move(g));
    }
    // lambda(y) solves BU lambda = y - Bv; x(y) = v + U lambda(y).
    QMat gram = matmul(transpose(bu), bu);  // d x d
    QMat pinv = qmat(d, nj);
    {
      QMat but = transpose(bu);  // d x nj
      for (size_t c = 0; c < nj; ++c) {
        QVec col(d, Rat(0));
        for (size_t k = 0; k < d; ++k) col[k] = but[k][c];
        auto x = solve(gram, col);
        for (size_t k = 0; k < d; ++k) pinv[k][c] = (*x)[k];
      }
    }
    // x(y) = v - U pinv Bv + U pinv y.
    QMat xy = matmul(u, pinv);  // n x nj
    QVec xc = sub(v, matvec(xy, bv));
    // beta'(y) = beta(x(y)) - A_X(x(y)) + A_Y(y).
    QVec ax = source.discrepancies(face_i);
    QVec ay = target.discrepancies(face_j);
    QVec base = term.beta.lin;
    for (size_t i = 0; i < n; ++i) base[i] -= ax[i];
    AffineForm beta_y{QVec(nj, Rat(0)), term.beta.cst};
    for (size_t j = 0; j < nj; ++j) {
      Rat acc(0);
      for (size_t i = 0; i < n; ++i) acc += base[i] * xy[i][j];
      beta_y.lin[j] = acc + ay[j];
    }
    beta_y.cst += dot(base, xc);
    AtomicTerm ot;
    ot.coeff = m.map_class(term.coeff);
    ot.cell = std::move(image);
    ot.beta = std::move(beta_y);
    ot.powers.assign(nj, 0);
    out.push_back(std::move(ot));
  }
  return out;
}

CheckReport cross_check_L1(const SncModel& model) {
  require_integer_model(model);
  MotClass lhs = atomic_measure(model, full_skeleton_cells(model)).limit_L1();
  MotClass rhs = measure(model, full_skeleton(model));
  CheckReport rep;
  rep.lhs = lhs.str();
  rep.rhs = rhs.str();
  rep.equal = lhs == rhs;
  rep.detail = rep.equal ? "L -> 1 limit matches the real measure" : "mismatch";
  return rep;
}

namespace {

// theta_q of sum_{l >= 0} l^p t^l with t = q^c.
Rat theta_full_1d(long p, long c, const Rat& q) { return poly_sum_from_zero(p, c).theta(q); }

// Exact upper bound for sum_{l > N} l^p t^l via the term ratio at l = N+1.
Rat tail_1d(long p, long c, const Rat& q, long n) {
  Rat t = rat_pow(q, c);
  Rat rho = rat_pow(Rat(n + 2) / Rat(n + 1), p) * t;
  if (rho >= 1) throw NonConvergent("truncation bound too small for the tail estimate");
  Rat first = rat_pow(Rat(n + 1), p) * rat_pow(t, n + 1);
  return first / (Rat(1) - rho);
}

}  // namespace

Rat cell_sum_truncated(const LatticeCell& cell, const AffineForm& beta,
                       const std::vector<long>& powers, const Rat& q, long per_coord_bound,
                       Rat* tail_bound) {
  size_t n = cell.ambient(), d = cell.dim();
  Rat e0 = beta.cst;
  for (size_t i = 0; i < n; ++i) e0 += beta.lin[i] * Rat(cell.offset[i]);
  if (den(e0) != 1) throw InvalidSpec("non-integral exponent at the offset");
  std::vector<long> c(d, 0);
  for (size_t k = 0; k < d; ++k) {
    Rat ck(0);
    for (size_t i = 0; i < n; ++i) ck += beta.lin[i] * Rat(cell.gens[k][i]);
    if (den(ck) != 1) throw InvalidSpec("non-integral exponent along a generator");
    c[k] = static_cast<long>(num(ck));
  }
  // Truncated sum, accumulated as an exponent histogram to keep the
  // arithmetic in integers until a single final evaluation.
  Laurent hist;
  std::vector<long> lambda(d, 0);
  while (true) {
    Int mono(1);
    long e = 0;
    for (size_t k = 0; k < d; ++k) e += c[k] * lambda[k];
    for (size_t i = 0; i < n; ++i) {
      if (powers[i] == 0) continue;
      Int xi = cell.offset[i];
      for (size_t k = 0; k < d; ++k) xi += cell.gens[k][i] * lambda[k];
      for (long p = 0; p < powers[i]; ++p) mono *= xi;
    }
    hist.set(e, hist.coeff(e) + mono);
    if (d == 0) break;
    size_t i = 0;
    while (i < d && lambda[i] == per_coord_bound) lambda[i++] = 0;
    if (i == d) break;
    lambda[i] += 1;
  }
  Rat total = rat_pow(q, static_cast<long>(num(e0))) * hist.eval(q);
  if (tail_bound) {
    // Expand the monomial into lattice-parameter powers with nonnegative
    // coefficients; the tail then splits into 1-D geometric tails.
    ExpDensity mono(n);
    {
      ExpTerm t;
      t.coeff = Rat(1);
      t.powers = powers;
      t.lin = QVec(n, Rat(0));
      t.aff = Rat(0);
      mono.add_term(t);
    }
    QMat u = qmat(n, d);
    QVec v(n, Rat(0));
    for (size_t i = 0; i < n; ++i) {
      v[i] = Rat(cell.offset[i]);
      for (size_t k = 0; k < d; ++k) u[i][k] = Rat(cell.gens[k][i]);
    }
    Rat bound(0);
    for (const auto& term : mono.substitute(u, v).terms()) {
      Rat term_bound(0);
      for (size_t k = 0; k < d; ++k) {
        Rat slab = tail_1d(term.powers[k], c[k], q, per_coord_bound);
        for (size_t k2 = 0; k2 < d; ++k2)
          if (k2 != k) slab *= theta_full_1d(term.powers[k2], c[k2], q);
        term_bound += slab;
      }
      bound += term.coeff * term_bound;
    }
    *tail_bound = rat_pow(q, static_cast<long>(num(e0))) * bound;
  }
  return total;
}

}  // namespace motivic
