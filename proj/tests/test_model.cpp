#include <doctest.h>

#include <random>

#include "motivic/model.hpp"
#include "support.hpp"

using namespace motivic;

namespace {

// A^2 with the two coordinate lines.
SncModel two_lines(const Rat& a1 = Rat(1), const Rat& a2 = Rat(1)) {
  SncModel m;
  m.divisors = {{"D1", a1}, {"D2", a2}};
  m.strata = {{{}, AtomicClass::sym("U")},
              {{"D1"}, AtomicClass::sym("D1o")},
              {{"D2"}, AtomicClass::sym("D2o")},
              {{"D1", "D2"}, AtomicClass::sym("D12o")}};
  return m;
}

BlowupSpec stellar_12(const SncModel& m) {
  BlowupSpec spec;
  spec.T = {"D1", "D2"};
  spec.c = 2;
  spec.new_id = "E0";
  spec.met[{"D1", "D2"}] = {m.stratum({"D1", "D2"})->cls, AtomicClass()};
  return spec;
}

std::mt19937_64 rng(23);

}  // namespace

TEST_CASE("validation") {
  SncModel m = two_lines();
  CHECK(validate(m).ok());

  SncModel missing = m;
  missing.strata.erase(missing.strata.begin() + 1);  // drop {D1}
  CHECK_FALSE(validate(missing).ok());

  SncModel zero_a = m;
  zero_a.divisors[0].a = Rat(0);
  CHECK_FALSE(validate(zero_a).ok());
}

TEST_CASE("stellar blow-up of the two-lines intersection point") {
  SncModel m = two_lines();
  auto [blown, morph] = blow_up(m, stellar_12(m));
  CHECK(validate(blown).ok());
  CHECK(validate_morphism(blown, m, morph).ok());

  // a0 = c - t + a1 + a2 = 0 + 2 = 2.
  CHECK(blown.divisor("E0")->a == Rat(2));
  // New strata: {E0}: [D12o](L-1); {E0,D1}, {E0,D2}: [D12o]; no triple.
  Laurent lm1 = Laurent::mono(1) - Laurent::one();
  CHECK(blown.stratum({"E0"}) != nullptr);
  CHECK(blown.stratum({"E0"})->cls.eq(AtomicClass::sym("D12o", AtomicScalar(lm1))));
  CHECK(blown.stratum({"E0", "D1"})->cls.eq(AtomicClass::sym("D12o")));
  CHECK(blown.stratum({"E0", "D2"})->cls.eq(AtomicClass::sym("D12o")));
  CHECK(blown.stratum({"E0", "D1", "D2"}) == nullptr);
  CHECK(blown.stratum({"D1", "D2"}) == nullptr);  // old stratum dropped
  CHECK(blown.stratum({"D1"})->cls.eq(AtomicClass::sym("D1o")));
}

TEST_CASE("a0 for a point on one line") {
  SncModel m = two_lines();
  BlowupSpec spec;
  spec.T = {"D1"};
  spec.c = 2;
  spec.new_id = "E0";
  AtomicClass inside = AtomicClass::sym("C");
  spec.met[{"D1"}] = {inside, m.stratum({"D1"})->cls - inside};
  auto [blown, morph] = blow_up(m, spec);
  CHECK(blown.divisor("E0")->a == Rat(2));  // 2 - 1 + 1
  CHECK(validate(blown).ok());
}

TEST_CASE("blow-up of a point off the divisor") {
  SncModel m = two_lines();
  BlowupSpec spec;
  spec.T = {};
  spec.c = 2;
  spec.new_id = "E0";
  AtomicClass inside = AtomicClass::sym("C");
  spec.met[{}] = {inside, m.stratum({})->cls - inside};
  auto [blown, morph] = blow_up(m, spec);
  CHECK(blown.divisor("E0")->a == Rat(2));
  // New stratum {E0} carries [C] * [P^1] = [C](1 + L).
  AtomicClass expected = AtomicClass::sym("C", AtomicScalar(Laurent::projective_space(1)));
  CHECK(blown.stratum({"E0"})->cls.eq(expected));
  // Exceptional row is zero: the new face retracts to the vertex.
  CHECK(morph.face_image({"E0"}).empty());
}

TEST_CASE("valuation map") {
  SncModel m = two_lines();
  auto [blown, morph] = blow_up(m, stellar_12(m));
  // Face {E0, D1}: y1 = x1 + x0, y2 = x0.
  auto [face, y] = valuation_map(morph, {"E0", "D1"}, {Rat(1), Rat(2)});
  CHECK(face == Face{"D1", "D2"});
  CHECK(y == QVec{Rat(3), Rat(1)});

  ModelMorphism identity;
  identity.source_divisors = {"D1"};
  identity.target_divisors = {"D1"};
  identity.matrix = {{Rat(1)}};
  auto [f2, y2] = valuation_map(identity, {"D1"}, {Rat(5, 2)});
  CHECK(f2 == Face{"D1"});
  CHECK(y2 == QVec{Rat(5, 2)});

  ModelMorphism cover;
  cover.source_divisors = {"P"};
  cover.target_divisors = {"Q"};
  cover.matrix = {{Rat(2)}};
  auto [f3, y3] = valuation_map(cover, {"P"}, {Rat(3)});
  CHECK(y3 == QVec{Rat(6)});
}

TEST_CASE("valuation map lands in the open face") {
  SncModel m = testsupport::random_model(rng, 3);
  int counter = 0;
  for (int i = 0; i < 20; ++i) {
    BlowupSpec spec = testsupport::random_blowup(rng, m, &counter);
    spec.new_id = "E" + std::to_string(counter++);
    auto [blown, morph] = blow_up(m, spec);
    for (const auto& st : blown.strata) {
      if (st.I.empty()) continue;
      QVec p;
      for (size_t k = 0; k < st.I.size(); ++k) p.push_back(Rat(1 + static_cast<long>(rng() % 5)));
      auto [j, y] = valuation_map(morph, st.I, p);
      for (const auto& v : y) CHECK(v > 0);
    }
  }
}

TEST_CASE("mather lct") {
  SncModel m = two_lines();
  m.ideals["Z"] = {{"D1", Rat(1)}, {"D2", Rat(1)}};
  CHECK(mather_lct(m, "Z") == Rat(1));

  // Cusp fixture: exceptionals E1 (2,2), E2 (3,3), E3 (5,6), strict transform C (1,1).
  SncModel cusp;
  cusp.divisors = {{"E1", Rat(2)}, {"E2", Rat(3)}, {"E3", Rat(5)}, {"C", Rat(1)}};
  cusp.strata = {{{}, AtomicClass::sym("U")},
                 {{"E1"}, AtomicClass::sym("E1o")},
                 {{"E2"}, AtomicClass::sym("E2o")},
                 {{"E3"}, AtomicClass::sym("E3o")},
                 {{"C"}, AtomicClass::sym("Co")},
                 {{"E1", "E3"}, AtomicClass::sym("E13o")},
                 {{"E2", "E3"}, AtomicClass::sym("E23o")},
                 {{"E3", "C"}, AtomicClass::sym("E3Co")}};
  cusp.ideals["Z"] = {{"E1", Rat(2)}, {"E2", Rat(3)}, {"E3", Rat(6)}, {"C", Rat(1)}};
  CHECK(validate(cusp).ok());
  CHECK(mather_lct(cusp, "Z") == Rat(5, 6));

  SncModel trivial = two_lines();
  trivial.ideals["Z"] = {{"D1", Rat(0)}};
  CHECK_THROWS_AS(mather_lct(trivial, "Z"), TrivialIdeal);
}

TEST_CASE("blow-up output always validates and preserves lct") {
  int counter = 0;
  for (int i = 0; i < 60; ++i) {
    SncModel m = testsupport::random_model(rng, 3);
    // Random ideal with at least one positive order.
    std::map<std::string, Rat> orders;
    bool positive = false;
    for (const auto& d : m.divisors) {
      Rat b(static_cast<long>(rng() % 3));
      orders[d.id] = b;
      positive |= b > 0;
    }
    if (!positive) orders[m.divisors[0].id] = Rat(1);
    m.ideals["Z"] = orders;
    BlowupSpec spec = testsupport::random_blowup(rng, m, &counter);
    auto [blown, morph] = blow_up(m, spec);
    CHECK(validate(blown).ok());
    CHECK(validate_morphism(blown, m, morph).ok());
    CHECK(mather_lct(blown, "Z") == mather_lct(m, "Z"));
  }
}

TEST_CASE("image and preimage cones") {
  // Ramified cover y = 2x.
  ModelMorphism cover;
  cover.source_divisors = {"P"};
  cover.target_divisors = {"Q"};
  cover.matrix = {{Rat(2)}};
  FaceCone ray{{"P"}, {{Rat(1)}}};
  auto img = image_cone(cover, ray);
  REQUIRE(img.size() == 1);
  CHECK(img[0].face == Face{"Q"});
  CHECK(img[0].rays == std::vector<QVec>{{Rat(1)}});  // primitive representative

  // Stellar blow-down: face {E0, D1} maps onto the wedge y1 > y2 in {D1, D2}.
  SncModel m = two_lines();
  auto [blown, morph] = blow_up(m, stellar_12(m));
  FaceCone face01{{"E0", "D1"}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
  auto img2 = image_cone(morph, face01);
  REQUIRE(img2.size() == 1);
  CHECK(img2[0].face == (Face{"D1", "D2"}));

  // Preimage of the full 2-face in face {E0}: the whole ray.
  FaceCone full2{{"D1", "D2"}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
  auto pre = preimage_cones(morph, full2, {"E0"});
  REQUIRE(pre.size() == 1);
  CHECK(pre[0].rays == std::vector<QVec>{{Rat(1)}});

  // Identity morphism: preimage is the piece itself.
  ModelMorphism id2;
  id2.source_divisors = {"D1", "D2"};
  id2.target_divisors = {"D1", "D2"};
  id2.matrix = identity(2);
  FaceCone wedge{{"D1", "D2"}, {{Rat(1), Rat(1)}, {Rat(1), Rat(0)}}};
  auto pre2 = preimage_cones(id2, wedge, {"D1", "D2"});
  REQUIRE(pre2.size() == 1);
  CHECK(in_open_cone({Rat(2), Rat(1)}, pre2[0].rays));
  CHECK_FALSE(in_open_cone({Rat(1), Rat(2)}, pre2[0].rays));

  // Preimage of a measure-zero ray under a surjective 2 -> 1 face map.
  ModelMorphism sum;
  sum.source_divisors = {"A", "B"};
  sum.target_divisors = {"Q"};
  sum.matrix = {{Rat(1)}, {Rat(1)}};
  FaceCone tgt_ray{{"Q"}, {{Rat(1)}}};
  auto wedge2 = preimage_cones(sum, tgt_ray, {"A", "B"});
  REQUIRE(!wedge2.empty());
  size_t total_dim = 0;
  for (const auto& c : wedge2) total_dim = std::max(total_dim, c.dim());
  CHECK(total_dim == 2);
}

TEST_CASE("image dimension drops exactly for non-injective face maps") {
  // Injective on the span: dimension preserved.
  ModelMorphism inj;
  inj.source_divisors = {"A", "B"};
  inj.target_divisors = {"C", "D"};
  inj.matrix = {{Rat(1), Rat(0)}, {Rat(1), Rat(1)}};
  FaceCone cone{{"A", "B"}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
  auto img = image_cone(inj, cone);
  for (const auto& c : img) CHECK(c.dim() == 2);

  // Collapsing map: both rays map to the same target ray.
  ModelMorphism col;
  col.source_divisors = {"A", "B"};
  col.target_divisors = {"C"};
  col.matrix = {{Rat(1)}, {Rat(1)}};
  auto img2 = image_cone(col, cone);
  REQUIRE(img2.size() == 1);
  CHECK(img2[0].dim() == 1);
}

TEST_CASE("image after preimage covers sampled points") {
  SncModel m = two_lines();
  auto [blown, morph] = blow_up(m, stellar_12(m));
  FaceCone wedge{{"D1", "D2"}, {{Rat(2), Rat(1)}, {Rat(1), Rat(1)}}};
  for (const auto& src_face : {Face{"E0", "D1"}, Face{"E0", "D2"}, Face{"E0"}}) {
    for (const auto& pre : preimage_cones(morph, wedge, src_face)) {
      // Interior sample of the preimage maps into the target piece.
      QVec p(pre.rays[0].size(), Rat(0));
      for (const auto& r : pre.rays) p = add(p, r);
      auto [jface, y] = valuation_map(morph, src_face, p);
      REQUIRE(jface == wedge.face);
      CHECK(in_open_cone(y, wedge.rays));
    }
  }
}
