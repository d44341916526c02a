#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "nlmc/shapes.hpp"
#include "shape_rep.hpp"

namespace nlmc {

namespace {

using Kind = ShapeRep::Kind;

// ---------------------------------------------------------------------------
// Exact moments for balls.

SphereMoments ball_moments(const Vec& c, double R, int dim, const Vec& x, double s) {
  SphereMoments out;
  out.center = x;
  out.radius = s;
  out.sphere_measure = unit_sphere_area(dim) * (dim == 2 ? s : s * s);
  double t = dist(x, c);

  double sign = 0;
  if (s <= R - t)
    sign = -1;  // sphere entirely inside the ball
  else if (t <= R && s >= R + t)
    sign = +1;  // sphere encloses the ball
  else if (t > R && s <= t - R)
    sign = +1;  // sphere entirely outside
  if (sign != 0) {
    out.m0 = sign * out.sphere_measure;
    return out;
  }

  double cphi = std::clamp((s * s + t * t - R * R) / (2 * s * t), -1.0, 1.0);
  Vec w = (1.0 / t) * (c - x);
  if (dim == 2) {
    double phi0 = std::acos(cphi);
    out.m0 = 2 * s * (kPi - 2 * phi0);
    out.m1 = (-4 * s * s * std::sin(phi0)) * w;
  } else {
    out.m0 = 4 * kPi * s * s * cphi;
    double sphi2 = std::max(0.0, 1 - cphi * cphi);
    out.m1 = (-2 * kPi * s * s * s * sphi2) * w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact arc clipping for polygon-backed 2D shapes.

struct ArcData {
  std::shared_ptr<const ShapeRep> rep;  // keepalive
  Vec x;
  std::vector<double> elo, ehi;  // per-edge distance range from x
  double dmin_edge = 0;          // below: the circle misses the boundary
  double dmax_vert = 0;          // above: the circle encloses the polygon
  double center_sign = 1;        // chi~ at x (parity; boundary band ignored)
};

ArcData make_arc_data(std::shared_ptr<const ShapeRep> rep, const Vec& x) {
  ArcData d;
  d.x = {x.x, x.y, 0};
  const auto& v = rep->poly;
  size_t n = v.size();
  d.elo.resize(n);
  d.ehi.resize(n);
  d.dmin_edge = std::numeric_limits<double>::infinity();
  d.dmax_vert = 0;
  std::vector<double> vd(n);
  for (size_t i = 0; i < n; ++i) {
    vd[i] = dist(d.x, v[i]);
    d.dmax_vert = std::max(d.dmax_vert, vd[i]);
  }
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    d.elo[i] = point_segment_distance(d.x, v[i], v[j]);
    d.ehi[i] = std::max(vd[i], vd[j]);
    d.dmin_edge = std::min(d.dmin_edge, d.elo[i]);
  }
  d.center_sign = rep->index.contains(d.x) ? -1.0 : 1.0;
  d.rep = std::move(rep);
  return d;
}

SphereMoments arc_moments(const ArcData& d, double s) {
  SphereMoments out;
  out.center = d.x;
  out.radius = s;
  out.sphere_measure = 2 * kPi * s;
  if (s <= 0) return out;

  if (s >= d.dmax_vert) {
    out.m0 = out.sphere_measure;
    return out;
  }
  if (s < d.dmin_edge) {
    out.m0 = d.center_sign * out.sphere_measure;
    return out;
  }

  const auto& v = d.rep->poly;
  size_t n = v.size();
  std::vector<double> ang;
  for (size_t i = 0; i < n; ++i) {
    if (d.elo[i] > s || d.ehi[i] < s) continue;
    Vec p = v[i] - d.x;
    Vec r = v[(i + 1) % n] - v[i];
    double A = norm2(r);
    if (A == 0) continue;
    double B = dot(p, r);
    double C = norm2(p) - s * s;
    double disc = B * B - A * C;
    if (disc <= 0) continue;
    double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / A, (-B + sq) / A}) {
      if (t >= 0 && t < 1) {
        Vec z = p + t * r;
        ang.push_back(std::atan2(z.y, z.x));
      }
    }
  }

  auto probe_sign = [&](double theta) {
    Vec q = d.x + Vec{s * std::cos(theta), s * std::sin(theta), 0};
    return d.rep->index.contains(q) ? -1.0 : 1.0;
  };

  std::sort(ang.begin(), ang.end());
  // Drop tangential double hits (equal angles) including the wraparound pair.
  const double tol = 1e-12;
  std::vector<double> th;
  for (size_t i = 0; i < ang.size();) {
    if (i + 1 < ang.size() && ang[i + 1] - ang[i] < tol)
      i += 2;
    else
      th.push_back(ang[i++]);
  }
  if (th.size() >= 2 && (th.front() + 2 * kPi) - th.back() < tol) {
    th.erase(th.begin());
    th.pop_back();
  }

  if (th.empty()) {
    out.m0 = probe_sign(0.0) * out.sphere_measure;
    return out;
  }

  size_t k = th.size();
  bool alternate = (k % 2 == 0);
  double sign0 = 0;
  if (alternate) sign0 = probe_sign(0.5 * (th[0] + th[1]));
  double m0 = 0, m1x = 0, m1y = 0;
  for (size_t i = 0; i < k; ++i) {
    double a = th[i];
    double b = (i + 1 < k) ? th[i + 1] : th[0] + 2 * kPi;
    double sg = alternate ? (i % 2 == 0 ? sign0 : -sign0) : probe_sign(0.5 * (a + b));
    m0 += sg * (b - a);
    m1x += sg * (std::sin(b) - std::sin(a));
    m1y += sg * (std::cos(a) - std::cos(b));
  }
  out.m0 = s * m0;
  out.m1 = {s * s * m1x, s * s * m1y, 0};
  return out;
}

// ---------------------------------------------------------------------------
// Direction-grid moments for 3D shapes.

struct GridData {
  Shape shape;
  Vec x;
  std::vector<Vec> dirs;
  double weight = 0;
};

SphereMoments grid_moments(const GridData& g, double s) {
  SphereMoments out;
  out.center = g.x;
  out.radius = s;
  out.sphere_measure = 4 * kPi * s * s;
  out.nodes = int(g.dirs.size());
  double m0 = 0;
  Vec m1;
  for (const Vec& u : g.dirs) {
    double sv = g.shape.signed_indicator(g.x + s * u);
    m0 += sv;
    m1 += sv * u;
  }
  out.m0 = s * s * g.weight * m0;
  out.m1 = (s * s * s * g.weight) * m1;
  return out;
}

}  // namespace

MomentCache Shape::moment_cache(const Vec& x) const {
  MomentCache cache;
  cache.far_ = farthest_distance(x);
  const ShapeRep& r = *rep_;

  if (r.kind == Kind::ball) {
    Vec c = r.center;
    double R = r.radius;
    int dim = r.dim;
    Vec xs = x;
    cache.eval_ = [c, R, dim, xs](double s) { return ball_moments(c, R, dim, xs, s); };
    double t = dist(x, c);
    if (t > 0) cache.kinks_ = {std::abs(t - R), t + R};
    return cache;
  }

  if (r.dim == 3) {
    GridData g{*this, x, {}, 0};
    int nt = r.kind == Kind::perturbed ? r.ntheta : 64;
    int np = r.kind == Kind::perturbed ? r.nphi : 128;
    g.dirs.reserve(size_t(nt) * np);
    for (int i = 0; i < nt; ++i) {
      double mu = 1.0 - (2.0 * i + 1.0) / nt;
      double st = std::sqrt(std::max(0.0, 1 - mu * mu));
      for (int j = 0; j < np; ++j) {
        double phi = 2 * kPi * (j + 0.5) / np;
        g.dirs.push_back({st * std::cos(phi), st * std::sin(phi), mu});
      }
    }
    g.weight = 4 * kPi / double(g.dirs.size());
    cache.eval_ = [g = std::move(g)](double s) { return grid_moments(g, s); };
    return cache;
  }

  ArcData d = make_arc_data(rep_, x);
  cache.eval_ = [d = std::move(d)](double s) { return arc_moments(d, s); };
  return cache;
}

SphereMoments Shape::sphere_moments(const Vec& x, double s) const {
  return moment_cache(x)(s);
}

}  // namespace nlmc
