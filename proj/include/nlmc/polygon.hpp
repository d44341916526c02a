#pragma once

#include <vector>

#include "nlmc/geometry.hpp"

namespace nlmc {

// Positive for counterclockwise orientation.
double shoelace_area(const std::vector<Vec>& v);

double polygon_perimeter(const std::vector<Vec>& v);

// Part of the polygon on the side {x . e > lambda} (Sutherland-Hodgman).
std::vector<Vec> clip_halfplane(const std::vector<Vec>& v, const Vec& e, double lambda);

double point_segment_distance(const Vec& q, const Vec& a, const Vec& b);

// Exact distance from q to the polygon boundary, O(n).
double polygon_boundary_distance(const std::vector<Vec>& v, const Vec& q);

// Point-in-polygon queries bucketed by horizontal strips, so single queries
// touch only the few edges whose y-range matters.
class PolygonIndex {
 public:
  PolygonIndex() = default;
  explicit PolygonIndex(std::vector<Vec> verts) { build(std::move(verts)); }

  void build(std::vector<Vec> verts);

  // Crossing-number parity; points on the boundary get an arbitrary side.
  bool contains(const Vec& q) const;

  // Minimum distance from q to the boundary, looking only at edges whose
  // y-range meets [q.y - r, q.y + r].  Exact whenever the result is <= r.
  double distance_within(const Vec& q, double r) const;

  const std::vector<Vec>& verts() const { return verts_; }

 private:
  std::vector<Vec> verts_;
  double x0_ = 0, x1_ = 0, y0_ = 0, y1_ = 0;
  double strip_h_ = 1;
  int nstrips_ = 0;
  std::vector<std::vector<int>> strips_;
};

// Area of the intersection of two counterclockwise simple polygons, by
// assembling the Green's-theorem contour from boundary fragments: pieces of
// boundary of a inside-or-on b, plus pieces of boundary of b strictly inside
// a (the asymmetry keeps shared boundary arcs from being counted twice).
double polygon_intersection_area(const std::vector<Vec>& a, const std::vector<Vec>& b);

}  // namespace nlmc
