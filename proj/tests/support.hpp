#ifndef MOTIVIC_TESTS_SUPPORT_HPP
#define MOTIVIC_TESTS_SUPPORT_HPP

#include <random>

#include "motivic/atomic.hpp"
#include "motivic/functions.hpp"

namespace motivic::testsupport {

inline double to_double(const Rat& r) {
  return static_cast<double>(num(r)) / static_cast<double>(den(r));
}

struct McResult {
  double mean = 0;
  double stderr_ = 0;
};

// Importance-sampled Monte-Carlo estimate of integrate_cone. Each coordinate
// is drawn from an exponential with a deliberately suboptimal rate so the
// estimator has a nonzero, finite variance.
inline McResult mc_integrate_cone(const ExpDensity& d, const std::vector<QVec>& rays, size_t samples,
                                  std::mt19937_64& rng) {
  size_t n = rays.size();
  QMat a = qmat(n, n);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) a[i][j] = rays[j][i];
  ExpDensity dt = d.substitute(a, QVec(n, Rat(0)));
  Rat detv = det(a);
  double absdet = std::abs(to_double(detv));
  auto terms = dt.terms();
  std::vector<double> rate(n, 1.0);
  for (size_t j = 0; j < n; ++j) {
    double worst = -1e300;
    for (const auto& t : terms) worst = std::max(worst, to_double(t.lin[j]));
    if (worst >= 0) throw NonConvergent("mc oracle: nonnegative exponent");
    rate[j] = -worst * 2.0 / 3.0;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0, sumsq = 0;
  std::vector<double> t(n);
  for (size_t s = 0; s < samples; ++s) {
    double logw = 0;
    for (size_t j = 0; j < n; ++j) {
      double u = 1.0 - unif(rng);
      t[j] = -std::log(u) / rate[j];
      logw += -std::log(rate[j]) + rate[j] * t[j];
    }
    double g = 0;
    for (const auto& term : terms) {
      double v = to_double(term.coeff);
      double e = to_double(term.aff);
      for (size_t j = 0; j < n; ++j) {
        for (long p = 0; p < term.powers[j]; ++p) v *= t[j];
        e += to_double(term.lin[j]) * t[j];
      }
      g += v * std::exp(e);
    }
    double x = g * std::exp(logw) * absdet;
    sum += x;
    sumsq += x * x;
  }
  McResult r;
  r.mean = sum / static_cast<double>(samples);
  double var = sumsq / static_cast<double>(samples) - r.mean * r.mean;
  r.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  return r;
}

// --- Random instance generators -------------------------------------------

// Model on the coordinate-hyperplane arrangement: full power-set strata.
inline SncModel random_model(std::mt19937_64& rng, int max_divisors = 3, bool integer_a = true) {
  std::uniform_int_distribution<int> nd(1, max_divisors), ad(1, 4);
  SncModel m;
  int n = nd(rng);
  for (int i = 0; i < n; ++i) {
    Rat a(ad(rng));
    if (!integer_a && rng() % 3 == 0) a += Rat(1, 1 + static_cast<long>(rng() % 3));
    m.divisors.push_back({"D" + std::to_string(i + 1), a});
  }
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    StratumData st;
    std::string name = "S";
    for (int i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) {
        st.I.push_back(m.divisors[static_cast<size_t>(i)].id);
        name += std::to_string(i + 1);
      }
    st.cls = AtomicClass::sym(name);
    m.strata.push_back(std::move(st));
  }
  return m;
}

// Random independent rays in the closed orthant with strictly positive sum.
inline std::vector<QVec> random_cone_rays(std::mt19937_64& rng, size_t dim, size_t count) {
  std::uniform_int_distribution<int> entry(0, 3);
  while (true) {
    std::vector<QVec> rays;
    for (size_t k = 0; k < count; ++k) {
      QVec r(dim, Rat(0));
      for (size_t i = 0; i < dim; ++i) r[i] = Rat(entry(rng));
      rays.push_back(std::move(r));
    }
    QVec sum(dim, Rat(0));
    for (const auto& r : rays) sum = add(sum, r);
    bool interior = true;
    for (const auto& x : sum) interior &= x > 0;
    if (!interior) continue;
    QMat m;
    for (const auto& r : rays) m.push_back(r);
    if (rank(m) != count) continue;
    bool nonzero = true;
    for (const auto& r : rays) nonzero &= !is_zero(r);
    if (!nonzero) continue;
    return rays;
  }
}

// Random polyhedral subset of the skeleton: a few full-dimensional simplicial
// pieces in random faces (declared disjoint by construction: one per face).
inline PolySet random_polyset(std::mt19937_64& rng, const SncModel& m) {
  PolySet s;
  for (const auto& st : m.strata) {
    if (rng() % 2) continue;
    FaceCone c;
    c.face = st.I;
    if (st.I.empty()) {
      s.pieces.push_back(std::move(c));
      continue;
    }
    c.rays = random_cone_rays(rng, st.I.size(), st.I.size());
    s.pieces.push_back(std::move(c));
  }
  if (s.pieces.empty()) s.pieces.push_back({Face{}, {}});
  return s;
}

// Random blow-up spec against the model. Covers t = 0, stellar c = |T|, and
// c > |T|; inside classes are fresh symbols, outside = cls - inside so the
// scissor relation holds exactly.
inline BlowupSpec random_blowup(std::mt19937_64& rng, const SncModel& m, int* counter) {
  std::uniform_int_distribution<int> td(0, static_cast<int>(m.divisors.size()));
  BlowupSpec spec;
  int t = td(rng);
  for (int i = 0; i < t; ++i) spec.T.push_back(m.divisors[static_cast<size_t>(i)].id);
  spec.T = m.sorted_face(spec.T);
  bool stellar = t > 1 && (rng() % 3 == 0);
  spec.c = stellar ? t : t + 1 + static_cast<long>(rng() % 2);
  spec.new_id = "E" + std::to_string((*counter)++);
  for (const auto& st : m.strata) {
    bool contains = true;
    for (const auto& id : spec.T)
      if (std::find(st.I.begin(), st.I.end(), id) == st.I.end()) contains = false;
    if (!contains) continue;
    if (stellar) {
      spec.met[st.I] = {st.cls, AtomicClass()};
    } else {
      // Random subset of eligible strata is met, relatively downward closed:
      // met everything containing T (the common geometric situation).
      AtomicClass inside = AtomicClass::sym("C" + std::to_string((*counter)++));
      spec.met[st.I] = {inside, st.cls - inside};
    }
  }
  return spec;
}

}  // namespace motivic::testsupport

#endif
