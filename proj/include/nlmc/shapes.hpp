#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlmc/geometry.hpp"

namespace nlmc {

inline constexpr int kDefaultCurveSamples = 4096;

struct ShapeRep;  // internal representation, defined in src

enum class Region { inside = -1, boundary = 0, outside = 1 };

struct BoundaryPoint {
  Vec pos;
  Vec normal;    // outward unit normal
  Vec tangent;   // unit tangent; in 2D the boundary is traversed counterclockwise
  Vec tangent2;  // second tangent direction (3D only)
  double param = 0;
};

// Spherical averages of the signed indicator over the sphere S_s(center):
//   m0 = integral of chi~  dsigma,   m1 = integral of chi~(center+z) z dsigma(z),
// where chi~ = +1 outside the set, -1 inside, 0 on the boundary band.
struct SphereMoments {
  Vec center;
  double radius = 0;
  double sphere_measure = 0;  // sigma(S_s), for reference
  double m0 = 0;
  Vec m1;
  int nodes = 0;  // quadrature nodes; 0 means closed form or exact arc clipping
};

// Repeated sphere-moment queries about one fixed center; construction does
// the per-center precomputation (edge distance ranges etc.) once.
class MomentCache {
 public:
  SphereMoments operator()(double s) const { return eval_(s); }

  // Beyond this radius the sphere lies entirely outside the set, so moments
  // are +sigma(S_s) and 0.
  double far_radius() const { return far_; }

  // Radii where s -> m0(s) has kinks (known ones; may be empty).
  const std::vector<double>& radial_kinks() const { return kinks_; }

 private:
  friend class Shape;
  std::function<SphereMoments(double)> eval_;
  double far_ = 0;
  std::vector<double> kinks_;
};

class Shape {
 public:
  // --- constructors ------------------------------------------------------
  static Shape polygon(std::vector<Vec> verts);
  static Shape ball(const Vec& center, double radius, int dim = 2);
  static Shape ellipse(const Vec& center, double a, double b, double angle = 0,
                       int samples = kDefaultCurveSamples);
  // r(theta) = c0 + sum_k ca[k-1] cos(k theta) + cb[k-1] sin(k theta), must stay positive.
  static Shape fourier_curve(const Vec& center, double c0, std::vector<double> ca,
                             std::vector<double> cb, int samples = kDefaultCurveSamples);
  static Shape limacon(const Vec& center, double base, double dent,
                       int samples = kDefaultCurveSamples);
  // Closed curve gamma: [0,1) -> R^2; polygonized at the given resolution.
  static Shape parametric(std::function<Vec(double)> gamma, int samples = kDefaultCurveSamples);
  static Shape ellipsoid(const Vec& center, double ax, double ay, double az);
  // r(u) = r0 (1 + eps Y_l^m(u)) with the real spherical harmonic Y_l^m.
  static Shape perturbed_sphere(const Vec& center, double r0, double eps, int l, int m,
                                int n_theta = 64, int n_phi = 128);

  // --- basics -------------------------------------------------------------
  int dim() const;
  double volume() const;
  double diameter() const;
  double boundary_tol() const;  // half-width of the boundary band
  std::string describe() const;

  // --- membership ---------------------------------------------------------
  Region classify(const Vec& x) const;
  // +1 outside, -1 inside, 0 within the boundary band.
  double signed_indicator(const Vec& x) const;

  // --- boundary -----------------------------------------------------------
  // n quasi-uniform boundary points with outward frames.
  std::vector<BoundaryPoint> boundary_sample(int n) const;
  // Exact point for a given parameter (2D: curve parameter or arclength fraction).
  BoundaryPoint boundary_point_at(double param) const;

  // --- metric helpers -----------------------------------------------------
  // Distance from x to the farthest point of the set (or a tight upper bound
  // for sampled 3D surfaces; never an underestimate).
  double farthest_distance(const Vec& x) const;
  // Support function sup over the set of x . e (e need not be unit; it is
  // normalized internally).
  double directional_max(const Vec& e) const;
  // Distance from x to the boundary (exact for balls and polygon-backed
  // shapes, first-order implicit estimate otherwise).
  double boundary_distance(const Vec& x) const;
  // A ball certainly containing the set.
  Vec bounding_center() const;
  double bounding_radius() const;
  // Period of the boundary parameter used by boundary_point_at.
  double param_period() const;

  // --- integral geometry ---------------------------------------------------
  SphereMoments sphere_moments(const Vec& x, double s) const;
  MomentCache moment_cache(const Vec& x) const;
  // Volume of the part of the set on the side {x . e > lambda}.
  double cap_volume(const Vec& e, double lambda) const;

  // --- transforms ----------------------------------------------------------
  // Mirror image across {x . e = lambda}; representation is preserved
  // (balls stay balls, ellipses stay ellipses, ...).
  Shape reflected(const Vec& e, double lambda) const;
  Shape translated(const Vec& shift) const;
  Shape rotated(const Mat3& rot) const;  // about the origin; rot must be proper

  // Canonical counterclockwise polygon backing 2D shapes (the quadrature
  // proxy for curved ones); nullptr for balls and 3D shapes.
  const std::vector<Vec>* polygon_vertices() const;

 private:
  explicit Shape(std::shared_ptr<const ShapeRep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const ShapeRep> rep_;
};

}  // namespace nlmc
