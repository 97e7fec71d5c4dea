#include <doctest.h>

#include <random>

#include "motivic/cones.hpp"

using namespace motivic;

namespace {

QVec v2(long a, long b) { return {Rat(a), Rat(b)}; }
QVec v3(long a, long b, long c) { return {Rat(a), Rat(b), Rat(c)}; }

std::mt19937_64 rng(7);

QVec random_point_in(const std::vector<QVec>& rays) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 5);
  QVec p(rays[0].size(), Rat(0));
  for (const auto& r : rays) p = add(p, scale(r, Rat(num(rng), den(rng))));
  return p;
}

}  // namespace

TEST_CASE("triangulate the quarter plane with a middle ray") {
  auto pieces = triangulate_rays({v2(1, 0), v2(1, 1), v2(0, 1)});
  CHECK(pieces.size() == 2);
  for (const auto& p : pieces) {
    CHECK(p.size() == 2);
    CHECK(std::find(p.begin(), p.end(), v2(1, 1)) != p.end());
  }
}

TEST_CASE("already simplicial cones pass through") {
  auto pieces = triangulate_rays({v2(2, 1), v2(1, 3)});
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0].size() == 2);
}

TEST_CASE("3d cone over a square splits in two") {
  auto pieces = triangulate_rays({v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1), v3(1, 1, 1)});
  CHECK(pieces.size() == 2);
  std::vector<QVec> all = {v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1), v3(1, 1, 1)};
  for (int i = 0; i < 200; ++i) {
    QVec p = random_point_in(all);
    int open_hits = 0, closed_hits = 0;
    for (const auto& piece : pieces) {
      open_hits += in_open_cone(p, piece) ? 1 : 0;
      closed_hits += in_closed_cone(p, piece) ? 1 : 0;
    }
    CHECK(open_hits <= 1);
    if (open_hits == 0) CHECK(closed_hits >= 1);
  }
}

TEST_CASE("not pointed input is rejected") {
  CHECK_THROWS_AS(triangulate_rays({v2(1, 0), v2(-1, 0), v2(0, 1)}), NotPointed);
}

TEST_CASE("membership") {
  CHECK(in_open_cone(v2(1, 2), {v2(1, 0), v2(0, 1)}));
  CHECK_FALSE(in_open_cone(v2(1, 0), {v2(1, 0), v2(0, 1)}));  // boundary
  // (2,1) = 1*(1,1) + 1*(1,0)
  CHECK(in_open_cone(v2(2, 1), {v2(1, 1), v2(1, 0)}));
  PolySet s;
  s.pieces.push_back({{"D1", "D2"}, {v2(1, 0), v2(0, 1)}});
  CHECK(member({"D1", "D2"}, v2(1, 2), s));
  CHECK_FALSE(member({"D1"}, {Rat(1)}, s));
}

TEST_CASE("triangulation pieces are interior-disjoint and cover") {
  std::uniform_int_distribution<int> entry(0, 4), count(3, 5);
  for (int inst = 0; inst < 20; ++inst) {
    size_t d = 2 + static_cast<size_t>(inst % 2);
    std::vector<QVec> rays;
    int want = count(rng);
    for (int k = 0; k < want; ++k) {
      QVec r(d, Rat(0));
      bool nz = false;
      for (size_t i = 0; i < d; ++i) {
        r[i] = Rat(entry(rng));
        nz |= r[i] != 0;
      }
      if (nz) rays.push_back(std::move(r));
    }
    if (rays.empty()) continue;
    QMat m;
    for (const auto& r : rays) m.push_back(r);
    auto pieces = triangulate_rays(rays);
    size_t dim = rank(m);
    for (int i = 0; i < 50; ++i) {
      QVec p = random_point_in(rays);
      int open_hits = 0, closed_hits = 0;
      for (const auto& piece : pieces) {
        if (piece.size() != dim) continue;
        open_hits += in_open_cone(p, piece) ? 1 : 0;
        closed_hits += in_closed_cone(p, piece) ? 1 : 0;
      }
      CHECK(open_hits <= 1);
      if (open_hits == 0) CHECK(closed_hits >= 1);  // on a wall
    }
  }
}

TEST_CASE("H and V representations round-trip") {
  std::vector<QVec> rays = {v3(1, 0, 0), v3(1, 2, 0), v3(1, 1, 3)};
  HSys h = cone_to_H(rays, 3);
  auto back = cone_rays(h);
  REQUIRE(back.size() == 3);
  for (const auto& r : rays) {
    bool found = false;
    for (const auto& b : back) found |= primitive(r) == b;
    CHECK(found);
  }
}

TEST_CASE("exact disjointness of open cones") {
  CHECK(open_cones_disjoint({v2(1, 0)}, {v2(0, 1)}, 2));
  CHECK(open_cones_disjoint({v2(1, 0), v2(1, 1)}, {v2(1, 1), v2(0, 1)}, 2));  // shared wall only
  CHECK_FALSE(open_cones_disjoint({v2(1, 0), v2(0, 1)}, {v2(1, 1), v2(1, 0)}, 2));
  CHECK(open_cones_disjoint({v3(1, 0, 0), v3(0, 1, 0)}, {v3(0, 0, 1)}, 3));
}

TEST_CASE("lattice normalization") {
  CHECK(lattice_norm({v2(1, 0), v2(0, 1)}) == Rat(1));
  CHECK(lattice_norm({v2(1, 1), v2(1, 0)}) == Rat(1));
  CHECK(lattice_norm({v2(2, 0), v2(0, 1)}) == Rat(2));
  CHECK(lattice_norm({v2(2, 2)}) == Rat(2));
  CHECK(lattice_norm({v2(1, 1)}) == Rat(1));
  CHECK(lattice_norm({{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1)}}) == Rat(1, 2));
}
