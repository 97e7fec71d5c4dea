#include <doctest.h>

#include <random>

#include "motivic/expdensity.hpp"
#include "support.hpp"

using namespace motivic;

namespace {

std::mt19937_64 rng(11);

QVec v2(long a, long b) { return {Rat(a), Rat(b)}; }

ExpDensity random_density(size_t dim, bool pure_exponential) {
  std::uniform_int_distribution<int> nterm(1, 3), numd(1, 5), pd(0, 2), cd(1, 4);
  ExpDensity d(dim);
  int n = nterm(rng);
  for (int i = 0; i < n; ++i) {
    ExpTerm t;
    t.coeff = Rat(cd(rng), cd(rng));
    t.powers.assign(dim, 0);
    t.lin = QVec(dim, Rat(0));
    t.aff = Rat(0);
    for (size_t j = 0; j < dim; ++j) {
      t.lin[j] = -Rat(numd(rng), cd(rng));
      if (!pure_exponential) t.powers[j] = pd(rng);
    }
    d.add_term(t);
  }
  return d;
}

}  // namespace

TEST_CASE("orthant integrals in closed form") {
  // e^{-a1 x1 - a2 x2} over the quarter plane -> 1/(a1 a2)
  ExpDensity d = ExpDensity::exponential({Rat(-2), Rat(-3)});
  CHECK(integrate_cone(d, {v2(1, 0), v2(0, 1)}) == Rat(1, 6));

  // x e^{-2x} over the half line -> 1/4
  ExpDensity m = ExpDensity::monomial(1, 0, 1) * ExpDensity::exponential({Rat(-2)});
  CHECK(integrate_cone(m, {{Rat(1)}}) == Rat(1, 4));

  // e^{-x-y} over the cone spanned by (1,1),(1,0) -> 1/2
  ExpDensity e = ExpDensity::exponential({Rat(-1), Rat(-1)});
  CHECK(integrate_cone(e, {v2(1, 1), v2(1, 0)}) == Rat(1, 2));

  CHECK_THROWS_AS(integrate_cone(ExpDensity::exponential({Rat(1)}), {{Rat(1)}}), NonConvergent);
}

TEST_CASE("eliminate_variable with affine bounds") {
  // int_0^{y} e^{-2 x0} dx0 = (1 - e^{-2y})/2, variables (x0, y).
  ExpDensity d = ExpDensity::exponential({Rat(-2), Rat(0)});
  AffineForm lo = AffineForm::constant(2, Rat(0));
  AffineForm up{{Rat(0), Rat(1)}, Rat(0)};
  ExpDensity r = integrate_var(d, 0, lo, up);
  ExpDensity expected(2);
  expected.add_term({Rat(1, 2), {0, 0}, {Rat(0), Rat(0)}, Rat(0)});
  expected.add_term({Rat(-1, 2), {0, 0}, {Rat(0), Rat(-2)}, Rat(0)});
  CHECK(r == expected);

  // int_0^infty e^{-c x} dx = 1/c
  ExpDensity g = ExpDensity::exponential({Rat(-3)});
  ExpDensity h = integrate_var(g, 0, AffineForm::constant(1, Rat(0)), std::nullopt);
  ExpDensity one(1);
  one.add_term({Rat(1, 3), {0}, {Rat(0)}, Rat(0)});
  CHECK(h == one);

  // int_0^b x dx = b^2/2 with b affine in the second variable.
  ExpDensity mono = ExpDensity::monomial(2, 0, 1);
  AffineForm b{{Rat(0), Rat(1)}, Rat(1)};
  ExpDensity sq = integrate_var(mono, 0, AffineForm::constant(2, Rat(0)), b);
  ExpDensity want(2);
  want.add_term({Rat(1, 2), {0, 2}, {Rat(0), Rat(0)}, Rat(0)});
  want.add_term({Rat(1), {0, 1}, {Rat(0), Rat(0)}, Rat(0)});
  want.add_term({Rat(1, 2), {0, 0}, {Rat(0), Rat(0)}, Rat(0)});
  CHECK(sq == want);
}

TEST_CASE("cone integral equals iterated elimination in any order") {
  for (int inst = 0; inst < 30; ++inst) {
    ExpDensity d = random_density(2, inst % 2 == 0);
    // Wedge x1 > x2 > 0, rays (1,1),(1,0).
    Rat direct;
    try {
      direct = integrate_cone(d, {v2(1, 1), v2(1, 0)});
    } catch (const NonConvergent&) {
      continue;
    }
    // Order A: x2 from 0 to x1, then x1 to infinity.
    AffineForm zero2 = AffineForm::constant(2, Rat(0));
    ExpDensity a1 = integrate_var(d, 1, zero2, AffineForm{{Rat(1), Rat(0)}, Rat(0)});
    ExpDensity a2 = integrate_var(a1, 0, zero2, std::nullopt);
    Rat va(0);
    for (const auto& t : a2.terms()) va += t.coeff;
    // Order B: x1 from x2 to infinity, then x2 to infinity.
    ExpDensity b1 = integrate_var(d, 0, AffineForm{{Rat(0), Rat(1)}, Rat(0)}, std::nullopt);
    ExpDensity b2 = integrate_var(b1, 1, zero2, std::nullopt);
    Rat vb(0);
    for (const auto& t : b2.terms()) vb += t.coeff;
    CHECK(direct == va);
    CHECK(direct == vb);
  }
}

TEST_CASE("pure exponential scaling by s^-dim") {
  for (int inst = 0; inst < 10; ++inst) {
    auto rays = testsupport::random_cone_rays(rng, 3, 3);
    ExpDensity d = random_density(3, true);
    Rat s(3, 2);
    ExpDensity scaled(3);
    for (auto t : d.terms()) {
      t.lin = scale(t.lin, s);
      scaled.add_term(t);
    }
    Rat v0, v1;
    try {
      v0 = integrate_cone(d, rays);
      v1 = integrate_cone(scaled, rays);
    } catch (const NonConvergent&) {
      continue;
    }
    CHECK(v1 == v0 / rat_pow(s, 3));
  }
}

TEST_CASE("monte carlo oracle agrees within three standard errors") {
  int done = 0;
  while (done < 5) {
    size_t dim = 1 + static_cast<size_t>(rng() % 3);
    auto rays = testsupport::random_cone_rays(rng, dim, dim);
    ExpDensity d = random_density(dim, true);
    Rat exact;
    try {
      exact = integrate_cone(d, rays);
    } catch (const NonConvergent&) {
      continue;
    }
    auto mc = testsupport::mc_integrate_cone(d, rays, 200000, rng);
    double err = std::abs(testsupport::to_double(exact) - mc.mean);
    CHECK(err <= 3.0 * mc.stderr_ + 1e-12);
    ++done;
  }
}

TEST_CASE("lower-dimensional carriers integrate with lattice normalization") {
  // Ray (1,1) inside the plane, density e^{-x1-x2}: coordinate y with
  // x = y(1,1) gives int e^{-2y} dy = 1/2.
  ExpDensity d = ExpDensity::exponential({Rat(-1), Rat(-1)});
  CHECK(integrate_carrier(d, {v2(1, 1)}) == Rat(1, 2));
  // Doubled generator carries twice the lattice volume.
  CHECK(integrate_carrier(d, {v2(2, 2)}) == Rat(1, 2));
  // Point carrier: the constant term.
  CHECK(integrate_carrier(ExpDensity::constant(0, Rat(5, 7)), {}) == Rat(5, 7));
}
