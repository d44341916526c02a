#pragma once

// Internal shape representation shared by shapes.cpp and moments.cpp.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nlmc/geometry.hpp"
#include "nlmc/polygon.hpp"

namespace nlmc {

struct ShapeRep {
  enum class Kind { polygon, ball, ellipse, star, parametric, ellipsoid, perturbed } kind;
  int dim = 2;
  double volume = 0;
  double diameter = 0;
  double tolb = 0;
  std::string describe;

  // canonical counterclockwise polygon (2D shapes except balls)
  std::vector<Vec> poly;
  PolygonIndex index;
  std::vector<double> cumlen;  // size n+1
  std::vector<double> vparam;  // curve parameter at each vertex, size n+1 (wrapped end)
  double period = 1;           // parameter period (2*pi for angular parameters)

  // ball
  Vec center;
  double radius = 0;

  // ellipse / star frame: world = center + frame * body (frame proper rotation)
  Mat3 frame;
  double ea = 0, eb = 0;

  // star radial profile r(t) = c0 + sum ca[k-1] cos(k t) + cb[k-1] sin(k t)
  double c0 = 0;
  std::vector<double> ca, cb;

  // parametric: world = lin * gamma(rho(t)) + off, rho(t) = reversed ? 1-t : t
  std::function<Vec(double)> gamma;
  Mat3 lin;
  Vec off;
  bool reversed = false;

  // ellipsoid: boundary = center + emat * u over the unit sphere
  Mat3 emat, emat_inv;
  double sv_max = 0, sv_min = 0;

  // perturbed sphere: radius r0 (1 + eps Y_l^m(body dir)), body dir = pframe * world dir
  double r0 = 0, peps = 0;
  int pl = 0, pm = 0;
  Mat3 pframe;
  double rad_hi = 0;
  int ntheta = 64, nphi = 128;

  double star_r(double t) const {
    double acc = c0;
    for (size_t k = 0; k < ca.size(); ++k) acc += ca[k] * std::cos((k + 1) * t);
    for (size_t k = 0; k < cb.size(); ++k) acc += cb[k] * std::sin((k + 1) * t);
    return acc;
  }

  double star_dr(double t) const {
    double acc = 0;
    for (size_t k = 0; k < ca.size(); ++k) acc -= (k + 1) * ca[k] * std::sin((k + 1) * t);
    for (size_t k = 0; k < cb.size(); ++k) acc += (k + 1) * cb[k] * std::cos((k + 1) * t);
    return acc;
  }

  double perturbed_radius(const Vec& world_dir) const;

  // Exact curve point for 2D kinds; polygon uses the arclength fraction.
  Vec param_point(double t) const;
};

}  // namespace nlmc
