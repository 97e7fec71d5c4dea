#ifndef MOTIVIC_CONES_HPP
#define MOTIVIC_CONES_HPP

#include <string>
#include <vector>

#include "motivic/linalg.hpp"

namespace motivic {

struct NotPointed : std::runtime_error {
  explicit NotPointed(const std::string& m) : std::runtime_error("NotPointed: " + m) {}
};

// Relatively open simplicial cone inside the orthant of a face. The rays are
// the designated generators used for volume normalization.
struct FaceCone {
  std::vector<std::string> face;  // divisor ids, in model order
  std::vector<QVec> rays;         // each of length face.size(); linearly independent

  size_t dim() const { return rays.size(); }
  size_t ambient() const { return face.size(); }
};

// Union of relatively open cones, declared pairwise disjoint by the caller.
struct PolySet {
  std::vector<FaceCone> pieces;
};

// Homogeneous system: eq x = 0 and pos x > 0 (strict).
struct HSys {
  size_t dim = 0;
  QMat eq;
  QMat pos;
};

// Exact strict feasibility by Fourier-Motzkin elimination.
bool strict_feasible(const HSys& h);

// Extreme rays of the closed cone {eq x = 0, pos x >= 0}. Requires the cone
// to be pointed; primitive integer representatives, deterministic order.
std::vector<QVec> cone_rays(const HSys& h);

// H-representation of the closure of a simplicial cone (span equalities plus
// barycentric-coordinate inequalities).
HSys cone_to_H(const std::vector<QVec>& rays, size_t ambient);

// Pulling triangulation of the cone spanned by the given rays, using only
// those rays. Pieces are simplicial of the cone's dimension, with pairwise
// disjoint relative interiors covering the cone. Throws NotPointed.
std::vector<std::vector<QVec>> triangulate_rays(std::vector<QVec> rays);

// Exact membership of a point in the relative interior of a simplicial cone.
bool in_open_cone(const QVec& point, const std::vector<QVec>& rays);
// Membership in the closed cone.
bool in_closed_cone(const QVec& point, const std::vector<QVec>& rays);
// Membership in any piece of a PolySet (pieces on the matching face only).
bool member(const std::vector<std::string>& face, const QVec& point, const PolySet& set);

// Barycentric coordinates w.r.t. independent rays; nullopt if outside span.
std::optional<QVec> cone_coords(const QVec& point, const std::vector<QVec>& rays);

// Exact emptiness of the intersection of two relatively open simplicial cones.
bool open_cones_disjoint(const std::vector<QVec>& a, const std::vector<QVec>& b, size_t ambient);

}  // namespace motivic

#endif
