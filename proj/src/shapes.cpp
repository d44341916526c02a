#include "nlmc/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "shape_rep.hpp"

namespace nlmc {

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Golden angle, for quasi-uniform sphere sampling.
const double kGolden = kPi * (3.0 - std::sqrt(5.0));

std::vector<Vec> convex_hull(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Rotating calipers on a convex hull.
double hull_diameter(const std::vector<Vec>& h) {
  size_t n = h.size();
  if (n < 2) return 0;
  if (n == 2) return dist(h[0], h[1]);
  double best = 0;
  size_t j = 1;
  for (size_t i = 0; i < n; ++i) {
    size_t i2 = (i + 1) % n;
    Vec e = h[i2] - h[i];
    while (cross2(e, h[(j + 1) % n] - h[j]) > cross2(e, h[j] - h[j])) j = (j + 1) % n;
    best = std::max(best, dist(h[i], h[j]));
    best = std::max(best, dist(h[i2], h[j]));
  }
  return best;
}

std::string format_str(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

// Real spherical harmonic Y_l^m on the unit sphere.
double real_sph_harmonic(int l, int m, const Vec& u) {
  double theta = std::acos(std::clamp(u.z, -1.0, 1.0));
  if (m == 0) return std::sph_legendre(unsigned(l), 0, theta);
  double phi = std::atan2(u.y, u.x);
  int ma = std::abs(m);
  double base = std::sph_legendre(unsigned(l), unsigned(ma), theta) * std::sqrt(2.0);
  return m > 0 ? base * std::cos(ma * phi) : base * std::sin(ma * phi);
}

using Kind = ShapeRep::Kind;

// Orientation, spatial index and arclength tables for polygon-backed shapes.
void finalize_polygon_tables(ShapeRep& rep) {
  auto& v = rep.poly;
  require(v.size() >= 3, "shape: polygon needs at least 3 vertices");
  if (shoelace_area(v) < 0) {
    // Constructors that fill vparam always produce counterclockwise loops,
    // so parameter tables cannot survive this reversal.
    std::reverse(v.begin(), v.end());
    rep.vparam.clear();
  }
  size_t n = v.size();
  rep.cumlen.assign(n + 1, 0);
  for (size_t i = 0; i < n; ++i) rep.cumlen[i + 1] = rep.cumlen[i] + dist(v[i], v[(i + 1) % n]);
  rep.index.build(v);
  if (rep.vparam.empty()) {
    rep.vparam.resize(n + 1);
    double L = rep.cumlen[n];
    for (size_t i = 0; i <= n; ++i) rep.vparam[i] = rep.cumlen[i] / L;
    rep.period = 1;
  }
}

}  // namespace

double ShapeRep::perturbed_radius(const Vec& world_dir) const {
  Vec u = pframe.apply(world_dir);
  return r0 * (1.0 + peps * real_sph_harmonic(pl, pm, u));
}

Vec ShapeRep::param_point(double t) const {
  switch (kind) {
    case Kind::ellipse:
      return center + frame.apply({ea * std::cos(t), eb * std::sin(t), 0});
    case Kind::star: {
      double r = star_r(t);
      return center + frame.apply({r * std::cos(t), r * std::sin(t), 0});
    }
    case Kind::parametric: {
      double p = t - std::floor(t);
      return lin.apply(gamma(reversed ? 1.0 - p : p)) + off;
    }
    case Kind::ball:
      return center + Vec{radius * std::cos(t), radius * std::sin(t), 0};
    default:
      break;
  }
  // polygon: t is the arclength fraction
  double p = t - std::floor(t);
  double L = cumlen.back();
  double ell = p * L;
  size_t n = poly.size();
  size_t i = size_t(std::upper_bound(cumlen.begin(), cumlen.end(), ell) - cumlen.begin());
  i = std::min(std::max<size_t>(i, 1), n) - 1;
  double seg = cumlen[i + 1] - cumlen[i];
  double f = seg > 0 ? (ell - cumlen[i]) / seg : 0;
  return poly[i] + f * (poly[(i + 1) % n] - poly[i]);
}

// ---------------------------------------------------------------------------
// Constructors

Shape Shape::polygon(std::vector<Vec> verts) {
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::polygon;
  rep->dim = 2;
  std::vector<Vec> v;
  double scale = 0;
  for (const Vec& p : verts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  double weld = 1e-14 * std::max(scale, 1.0);
  for (const Vec& p : verts)
    if (v.empty() || dist(v.back(), {p.x, p.y, 0}) > weld) v.push_back({p.x, p.y, 0});
  if (v.size() > 1 && dist(v.front(), v.back()) <= weld) v.pop_back();
  rep->poly = std::move(v);
  finalize_polygon_tables(*rep);
  rep->volume = shoelace_area(rep->poly);
  rep->diameter = hull_diameter(convex_hull(rep->poly));
  rep->describe = format_str("polygon(%g vertices)", double(rep->poly.size()));
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::ball(const Vec& center, double radius, int dim) {
  require(radius > 0, "shape: ball radius must be positive");
  require(dim == 2 || dim == 3, "shape: dim must be 2 or 3");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::ball;
  rep->dim = dim;
  rep->center = center;
  if (dim == 2) rep->center.z = 0;
  rep->radius = radius;
  rep->volume = ball_volume(dim, radius);
  rep->diameter = 2 * radius;
  rep->period = 2 * kPi;
  rep->describe = format_str(dim == 2 ? "disk(radius=%g)" : "ball(radius=%g)", radius);
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::ellipse(const Vec& center, double a, double b, double angle, int samples) {
  require(a > 0 && b > 0, "shape: ellipse semi-axes must be positive");
  require(samples >= 8, "shape: need at least 8 boundary samples");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::ellipse;
  rep->dim = 2;
  rep->center = {center.x, center.y, 0};
  rep->ea = a;
  rep->eb = b;
  rep->frame = Mat3::rotation2(angle);
  rep->period = 2 * kPi;
  rep->poly.resize(samples);
  rep->vparam.resize(samples + 1);
  for (int k = 0; k < samples; ++k) {
    double t = 2 * kPi * k / samples;
    rep->vparam[k] = t;
    rep->poly[k] = rep->param_point(t);
  }
  rep->vparam[samples] = 2 * kPi;
  finalize_polygon_tables(*rep);
  rep->volume = kPi * a * b;
  rep->diameter = 2 * std::max(a, b);
  rep->describe = format_str("ellipse(a=%g, b=%g, angle=%g)", a, b, angle);
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::fourier_curve(const Vec& center, double c0, std::vector<double> ca,
                           std::vector<double> cb, int samples) {
  require(samples >= 8, "shape: need at least 8 boundary samples");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::star;
  rep->dim = 2;
  rep->center = {center.x, center.y, 0};
  rep->c0 = c0;
  rep->ca = std::move(ca);
  rep->cb = std::move(cb);
  rep->frame = Mat3::identity();
  rep->period = 2 * kPi;
  double rmin = kBig;
  for (int k = 0; k < 4 * samples; ++k)
    rmin = std::min(rmin, rep->star_r(2 * kPi * k / (4 * samples)));
  require(rmin > 0, "shape: radial profile must stay positive");
  rep->poly.resize(samples);
  rep->vparam.resize(samples + 1);
  for (int k = 0; k < samples; ++k) {
    double t = 2 * kPi * k / samples;
    rep->vparam[k] = t;
    rep->poly[k] = rep->param_point(t);
  }
  rep->vparam[samples] = 2 * kPi;
  finalize_polygon_tables(*rep);
  double sq = c0 * c0;
  for (double c : rep->ca) sq += 0.5 * c * c;
  for (double c : rep->cb) sq += 0.5 * c * c;
  rep->volume = kPi * sq;
  rep->diameter = hull_diameter(convex_hull(rep->poly));
  rep->describe = format_str("fourier_curve(c0=%g, %g cosine and %g sine modes)", c0,
                             double(rep->ca.size()), double(rep->cb.size()));
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::limacon(const Vec& center, double base, double dent, int samples) {
  Shape s = fourier_curve(center, base, {dent}, {}, samples);
  auto rep = std::make_shared<ShapeRep>(*s.rep_);
  rep->describe = format_str("limacon(base=%g, dent=%g)", base, dent);
  return Shape(rep);
}

Shape Shape::parametric(std::function<Vec(double)> gamma, int samples) {
  require(bool(gamma), "shape: parametric curve must be callable");
  require(samples >= 8, "shape: need at least 8 boundary samples");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::parametric;
  rep->dim = 2;
  rep->gamma = std::move(gamma);
  rep->lin = Mat3::identity();
  rep->off = {};
  rep->period = 1;

  auto build = [&](bool reversed) {
    rep->reversed = reversed;
    rep->poly.resize(samples);
    rep->vparam.resize(samples + 1);
    for (int k = 0; k < samples; ++k) {
      double t = double(k) / samples;
      rep->vparam[k] = t;
      rep->poly[k] = rep->param_point(t);
      rep->poly[k].z = 0;
    }
    rep->vparam[samples] = 1;
  };
  build(false);
  if (shoelace_area(rep->poly) < 0) build(true);
  finalize_polygon_tables(*rep);
  rep->volume = shoelace_area(rep->poly);
  rep->diameter = hull_diameter(convex_hull(rep->poly));
  rep->describe = format_str("parametric(%g samples)", double(samples));
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::ellipsoid(const Vec& center, double ax, double ay, double az) {
  require(ax > 0 && ay > 0 && az > 0, "shape: ellipsoid semi-axes must be positive");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::ellipsoid;
  rep->dim = 3;
  rep->center = center;
  rep->emat = Mat3{{ax, 0, 0, 0, ay, 0, 0, 0, az}};
  rep->emat_inv = Mat3{{1 / ax, 0, 0, 0, 1 / ay, 0, 0, 0, 1 / az}};
  rep->sv_max = std::max({ax, ay, az});
  rep->sv_min = std::min({ax, ay, az});
  rep->volume = (4.0 / 3.0) * kPi * ax * ay * az;
  rep->diameter = 2 * rep->sv_max;
  rep->describe = format_str("ellipsoid(%g, %g, %g)", ax, ay, az);
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

Shape Shape::perturbed_sphere(const Vec& center, double r0, double eps, int l, int m,
                              int n_theta, int n_phi) {
  require(r0 > 0, "shape: base radius must be positive");
  require(l >= 0 && std::abs(m) <= l, "shape: spherical harmonic needs |m| <= l");
  auto rep = std::make_shared<ShapeRep>();
  rep->kind = Kind::perturbed;
  rep->dim = 3;
  rep->center = center;
  rep->r0 = r0;
  rep->peps = eps;
  rep->pl = l;
  rep->pm = m;
  rep->pframe = Mat3::identity();
  rep->ntheta = n_theta;
  rep->nphi = n_phi;

  double hi = 0, lo = kBig, vol = 0;
  int nt = 4 * n_theta, np = 2 * n_phi;
  for (int i = 0; i < nt; ++i) {
    double mu = 1.0 - (2.0 * i + 1.0) / nt;
    double st = std::sqrt(std::max(0.0, 1 - mu * mu));
    for (int jj = 0; jj < np; ++jj) {
      double phi = 2 * kPi * (jj + 0.5) / np;
      Vec u{st * std::cos(phi), st * std::sin(phi), mu};
      double r = rep->perturbed_radius(u);
      hi = std::max(hi, r);
      lo = std::min(lo, r);
      vol += r * r * r;
    }
  }
  require(lo > 0, "shape: perturbation makes the radius nonpositive");
  rep->rad_hi = hi * (1 + 1e-3) + 1e-12;  // safe upper bound for the far field
  rep->volume = vol * (4 * kPi / (double(nt) * np)) / 3.0;
  rep->diameter = 2 * rep->rad_hi;
  rep->describe =
      format_str("perturbed_sphere(r0=%g, eps=%g, l=%g, m=%g)", r0, eps, double(l), double(m));
  rep->tolb = 1e-10 * rep->diameter;
  return Shape(rep);
}

// ---------------------------------------------------------------------------
// Basics

int Shape::dim() const { return rep_->dim; }
double Shape::volume() const { return rep_->volume; }
double Shape::diameter() const { return rep_->diameter; }
double Shape::boundary_tol() const { return rep_->tolb; }
std::string Shape::describe() const { return rep_->describe; }

const std::vector<Vec>* Shape::polygon_vertices() const {
  return rep_->poly.empty() ? nullptr : &rep_->poly;
}

double Shape::param_period() const {
  switch (rep_->kind) {
    case Kind::ball:
    case Kind::ellipse:
    case Kind::star:
      return 2 * kPi;
    default:
      return 1.0;
  }
}

// ---------------------------------------------------------------------------
// Membership

Region Shape::classify(const Vec& x) const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball: {
      double f = dist(x, r.center) - r.radius;
      if (std::abs(f) <= r.tolb) return Region::boundary;
      return f < 0 ? Region::inside : Region::outside;
    }
    case Kind::ellipse: {
      Vec q = r.frame.transposed().apply(x - r.center);
      double fx = q.x / r.ea, fy = q.y / r.eb;
      double f = fx * fx + fy * fy - 1;
      if (f < -0.5) return Region::inside;
      double g = 2 * std::sqrt(fx * fx / (r.ea * r.ea) + fy * fy / (r.eb * r.eb));
      if (std::abs(f) / g <= r.tolb) return Region::boundary;
      return f < 0 ? Region::inside : Region::outside;
    }
    case Kind::star: {
      Vec q = r.frame.transposed().apply(x - r.center);
      double rho = std::hypot(q.x, q.y);
      double t = std::atan2(q.y, q.x);
      double rr = r.star_r(t);
      double f = rho - rr;
      if (f < -0.5 * rr) return Region::inside;
      double slope = std::sqrt(1 + std::pow(r.star_dr(t) / rho, 2));
      if (std::abs(f) / slope <= r.tolb) return Region::boundary;
      return f < 0 ? Region::inside : Region::outside;
    }
    case Kind::ellipsoid: {
      Vec u = r.emat_inv.apply(x - r.center);
      double nu = norm(u);
      double f = nu - 1;
      if (f < -0.5) return Region::inside;
      Vec grad = r.emat_inv.transposed().apply((1.0 / nu) * u);
      if (std::abs(f) / norm(grad) <= r.tolb) return Region::boundary;
      return f < 0 ? Region::inside : Region::outside;
    }
    case Kind::perturbed: {
      Vec w = x - r.center;
      double nw = norm(w);
      if (nw <= 0.25 * r.r0) return Region::inside;
      double f = nw - r.perturbed_radius((1.0 / nw) * w);
      if (std::abs(f) <= r.tolb) return Region::boundary;
      return f < 0 ? Region::inside : Region::outside;
    }
    default: {
      double d = r.index.distance_within(x, r.tolb);
      if (d <= r.tolb) return Region::boundary;
      return r.index.contains(x) ? Region::inside : Region::outside;
    }
  }
}

double Shape::signed_indicator(const Vec& x) const {
  switch (classify(x)) {
    case Region::inside: return -1;
    case Region::outside: return +1;
    default: return 0;
  }
}

// ---------------------------------------------------------------------------
// Boundary sampling

namespace {

void fill_3d_frame(BoundaryPoint& bp) {
  Vec helper = std::abs(bp.normal.z) < 0.9 ? Vec{0, 0, 1} : Vec{1, 0, 0};
  bp.tangent = normalized(helper - dot(helper, bp.normal) * bp.normal);
  bp.tangent2 = {bp.normal.y * bp.tangent.z - bp.normal.z * bp.tangent.y,
                 bp.normal.z * bp.tangent.x - bp.normal.x * bp.tangent.z,
                 bp.normal.x * bp.tangent.y - bp.normal.y * bp.tangent.x};
}

BoundaryPoint boundary_point_3d(const ShapeRep& r, const Vec& u, double param) {
  BoundaryPoint bp;
  bp.param = param;
  if (r.kind == ShapeRep::Kind::ball) {
    bp.pos = r.center + r.radius * u;
    bp.normal = u;
  } else if (r.kind == ShapeRep::Kind::ellipsoid) {
    bp.pos = r.center + r.emat.apply(u);
    bp.normal = normalized(r.emat_inv.transposed().apply(r.emat_inv.apply(bp.pos - r.center)));
  } else {
    Vec w = r.pframe.transposed().apply(u);
    bp.pos = r.center + r.perturbed_radius(w) * w;
    double h = 1e-6 * r.r0;
    auto fval = [&](const Vec& y) {
      Vec d = y - r.center;
      double nd = norm(d);
      return nd - r.perturbed_radius((1.0 / nd) * d);
    };
    Vec g{(fval(bp.pos + Vec{h, 0, 0}) - fval(bp.pos - Vec{h, 0, 0})) / (2 * h),
          (fval(bp.pos + Vec{0, h, 0}) - fval(bp.pos - Vec{0, h, 0})) / (2 * h),
          (fval(bp.pos + Vec{0, 0, h}) - fval(bp.pos - Vec{0, 0, h})) / (2 * h)};
    bp.normal = normalized(g);
  }
  fill_3d_frame(bp);
  return bp;
}

}  // namespace

BoundaryPoint Shape::boundary_point_at(double param) const {
  const ShapeRep& r = *rep_;
  if (r.dim == 3) {
    // Continuous golden-spiral chart, param in [0,1).
    double p = param - std::floor(param);
    double z = 1 - 2 * p;
    double st = std::sqrt(std::max(0.0, 1 - z * z));
    double phi = kGolden * p * 4096;
    Vec u{st * std::cos(phi), st * std::sin(phi), z};
    return boundary_point_3d(r, u, param);
  }

  BoundaryPoint bp;
  bp.param = param;
  Vec tan;
  switch (r.kind) {
    case Kind::ball: {
      double c = std::cos(param), s = std::sin(param);
      bp.pos = r.center + Vec{r.radius * c, r.radius * s, 0};
      bp.normal = {c, s, 0};
      bp.tangent = {-s, c, 0};
      return bp;
    }
    case Kind::ellipse: {
      double c = std::cos(param), s = std::sin(param);
      bp.pos = r.center + r.frame.apply({r.ea * c, r.eb * s, 0});
      tan = r.frame.apply({-r.ea * s, r.eb * c, 0});
      break;
    }
    case Kind::star: {
      double c = std::cos(param), s = std::sin(param);
      double rr = r.star_r(param), dr = r.star_dr(param);
      bp.pos = r.center + r.frame.apply({rr * c, rr * s, 0});
      tan = r.frame.apply({dr * c - rr * s, dr * s + rr * c, 0});
      break;
    }
    case Kind::parametric: {
      double h = 1e-7;
      bp.pos = r.param_point(param);
      tan = r.param_point(param + h) - r.param_point(param - h);
      break;
    }
    default: {  // polygon: arclength-fraction parameter
      double p = param - std::floor(param);
      bp.pos = r.param_point(p);
      double L = r.cumlen.back();
      double ell = p * L;
      size_t n = r.poly.size();
      size_t i =
          size_t(std::upper_bound(r.cumlen.begin(), r.cumlen.end(), ell) - r.cumlen.begin());
      i = std::min(std::max<size_t>(i, 1), n) - 1;
      tan = r.poly[(i + 1) % n] - r.poly[i];
      break;
    }
  }
  bp.tangent = normalized(tan);
  bp.normal = {bp.tangent.y, -bp.tangent.x, 0};  // outward for counterclockwise traversal
  return bp;
}

std::vector<BoundaryPoint> Shape::boundary_sample(int n) const {
  require(n >= 1, "shape: boundary_sample needs n >= 1");
  const ShapeRep& r = *rep_;
  std::vector<BoundaryPoint> out;
  out.reserve(n);

  if (r.dim == 3) {
    for (int k = 0; k < n; ++k) {
      double z = 1.0 - (2.0 * k + 1.0) / n;
      double st = std::sqrt(std::max(0.0, 1 - z * z));
      double phi = kGolden * k;
      Vec u{st * std::cos(phi), st * std::sin(phi), z};
      out.push_back(boundary_point_3d(r, u, (k + 0.5) / n));
    }
    return out;
  }

  if (r.kind == Kind::ball) {
    for (int k = 0; k < n; ++k) out.push_back(boundary_point_at(2 * kPi * k / n));
    return out;
  }

  // Equal-arclength stations mapped back to the native curve parameter.
  // Stations start at the curve origin so symmetric counts hit the symmetry
  // points; polygons take the half-offset so stations sit inside edges, not
  // on corners.
  double L = r.cumlen.back();
  size_t nv = r.poly.size();
  double shift = r.kind == Kind::polygon ? 0.5 : 0.0;
  for (int k = 0; k < n; ++k) {
    double ell = L * (k + shift) / n;
    size_t i =
        size_t(std::upper_bound(r.cumlen.begin(), r.cumlen.end(), ell) - r.cumlen.begin());
    i = std::min(std::max<size_t>(i, 1), nv) - 1;
    double seg = r.cumlen[i + 1] - r.cumlen[i];
    double f = seg > 0 ? (ell - r.cumlen[i]) / seg : 0;
    double param = r.vparam[i] + f * (r.vparam[i + 1] - r.vparam[i]);
    out.push_back(boundary_point_at(param));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Farthest distance

namespace {

double refine_max(const std::function<double(double)>& g, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (g(m1) < g(m2))
      lo = m1;
    else
      hi = m2;
  }
  return g(0.5 * (lo + hi));
}

}  // namespace

double Shape::farthest_distance(const Vec& x) const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball:
      return dist(x, r.center) + r.radius;
    case Kind::ellipsoid:
      return dist(x, r.center) + r.sv_max;
    case Kind::perturbed:
      return dist(x, r.center) + r.rad_hi;
    case Kind::polygon: {
      double best = 0;
      for (const Vec& v : r.poly) best = std::max(best, dist(x, v));
      return best;
    }
    default: {
      size_t besti = 0;
      double best = -1;
      for (size_t i = 0; i < r.poly.size(); ++i) {
        double d = dist(x, r.poly[i]);
        if (d > best) {
          best = d;
          besti = i;
        }
      }
      double window = 2 * (r.vparam[1] - r.vparam[0]);
      double t0 = r.vparam[besti];
      auto g = [&](double t) { return dist(x, r.param_point(t)); };
      return std::max(best, refine_max(g, t0 - window, t0 + window));
    }
  }
}

double Shape::directional_max(const Vec& e) const {
  const ShapeRep& r = *rep_;
  Vec u = normalized(e);
  switch (r.kind) {
    case Kind::ball:
      return dot(r.center, u) + r.radius;
    case Kind::ellipse: {
      Vec w = r.frame.transposed().apply(u);
      return dot(r.center, u) + std::hypot(r.ea * w.x, r.eb * w.y);
    }
    case Kind::ellipsoid:
      return dot(r.center, u) + norm(r.emat.transposed().apply(u));
    case Kind::perturbed: {
      int nt = 4 * r.ntheta, np = 2 * r.nphi;
      double best = -kBig;
      for (int it = 0; it < nt; ++it) {
        double ct = -1 + (2.0 * it + 1) / nt;  // equal-area in cos(theta)
        double st = std::sqrt(std::max(0.0, 1 - ct * ct));
        for (int ip = 0; ip < np; ++ip) {
          double phi = 2 * kPi * (ip + 0.5) / np;
          Vec dir{st * std::cos(phi), st * std::sin(phi), ct};
          double rho = r.perturbed_radius(dir);
          best = std::max(best, dot(r.center + rho * dir, u));
        }
      }
      return best;
    }
    case Kind::polygon: {
      double best = -kBig;
      for (const Vec& v : r.poly) best = std::max(best, dot(v, u));
      return best;
    }
    default: {
      size_t besti = 0;
      double best = -kBig;
      for (size_t i = 0; i < r.poly.size(); ++i) {
        double d = dot(r.poly[i], u);
        if (d > best) {
          best = d;
          besti = i;
        }
      }
      double window = 2 * (r.vparam[1] - r.vparam[0]);
      double t0 = r.vparam[besti];
      auto g = [&](double t) { return dot(r.param_point(t), u); };
      return std::max(best, refine_max(g, t0 - window, t0 + window));
    }
  }
}

double Shape::boundary_distance(const Vec& x) const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball:
      return std::fabs(dist(x, r.center) - r.radius);
    case Kind::ellipsoid: {
      Vec p = r.emat_inv.apply(x - r.center);
      double f = norm2(p) - 1;
      double gn = 2 * norm(r.emat_inv.transposed().apply(p));
      return gn > 0 ? std::fabs(f) / gn : dist(x, r.center);
    }
    case Kind::perturbed: {
      Vec w = x - r.center;
      double nw = norm(w);
      if (nw == 0) return r.perturbed_radius(r.pframe.apply(Vec{0, 0, 1}));
      return std::fabs(nw - r.perturbed_radius((1.0 / nw) * w));
    }
    default:
      // every 2D kind carries a fine polygonization
      return polygon_boundary_distance(r.poly, x);
  }
}

Vec Shape::bounding_center() const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball:
    case Kind::ellipse:
    case Kind::ellipsoid:
    case Kind::perturbed:
      return r.center;
    default: {
      Vec lo = r.poly.front(), hi = lo;
      for (const Vec& v : r.poly) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
      }
      return 0.5 * (lo + hi);
    }
  }
}

double Shape::bounding_radius() const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball:
      return r.radius;
    case Kind::ellipse:
      return std::max(r.ea, r.eb);
    case Kind::ellipsoid:
      return r.sv_max;
    case Kind::perturbed:
      return r.rad_hi;
    default: {
      Vec c = bounding_center();
      double best = 0;
      for (const Vec& v : r.poly) best = std::max(best, dist(c, v));
      // inscribed-polygon slack for curved kinds
      return r.kind == Kind::polygon ? best : best * (1 + 1e-4);
    }
  }
}

// ---------------------------------------------------------------------------
// Cap volumes

namespace {

double unit_disk_cap_fraction(double h) {
  if (h <= -1) return 1;
  if (h >= 1) return 0;
  return (std::acos(h) - h * std::sqrt(1 - h * h)) / kPi;
}

double unit_ball_cap_fraction(double h) {
  if (h <= -1) return 1;
  if (h >= 1) return 0;
  return 0.25 * (1 - h) * (1 - h) * (2 + h);
}

}  // namespace

double Shape::cap_volume(const Vec& e, double lambda) const {
  const ShapeRep& r = *rep_;
  Vec en = normalized(e);
  switch (r.kind) {
    case Kind::ball: {
      double h = (lambda - dot(r.center, en)) / r.radius;
      return r.volume * (r.dim == 2 ? unit_disk_cap_fraction(h) : unit_ball_cap_fraction(h));
    }
    case Kind::ellipse: {
      Vec pulled = r.frame.transposed().apply(en);
      double scale = std::hypot(r.ea * pulled.x, r.eb * pulled.y);
      double h = (lambda - dot(r.center, en)) / scale;
      return r.volume * unit_disk_cap_fraction(h);
    }
    case Kind::ellipsoid: {
      double scale = norm(r.emat.transposed().apply(en));
      double h = (lambda - dot(r.center, en)) / scale;
      return r.volume * unit_ball_cap_fraction(h);
    }
    case Kind::perturbed: {
      // Radial slicing on an equal-area direction grid.
      double lam = lambda - dot(r.center, en);
      int nt = r.ntheta * 2, np = r.nphi * 2;
      double w = 4 * kPi / (double(nt) * np);
      double acc = 0;
      for (int i = 0; i < nt; ++i) {
        double mu = 1.0 - (2.0 * i + 1.0) / nt;
        double st = std::sqrt(std::max(0.0, 1 - mu * mu));
        for (int jj = 0; jj < np; ++jj) {
          double phi = 2 * kPi * (jj + 0.5) / np;
          Vec u{st * std::cos(phi), st * std::sin(phi), mu};
          double rad = r.perturbed_radius(r.pframe.transposed().apply(u));
          double ue = dot(u, en);
          double slo = 0, shi = rad;
          if (ue > 0)
            slo = std::clamp(lam / ue, 0.0, rad);
          else if (ue < 0)
            shi = std::clamp(lam / ue, 0.0, rad);
          else if (lam >= 0)
            shi = 0;
          if (shi > slo) acc += (shi * shi * shi - slo * slo * slo) / 3.0;
        }
      }
      return acc * w;
    }
    default:
      return shoelace_area(clip_halfplane(r.poly, en, lambda));
  }
}

// ---------------------------------------------------------------------------
// Transforms

Shape Shape::reflected(const Vec& e, double lambda) const {
  const ShapeRep& r = *rep_;
  Vec en = normalized(e);
  Mat3 H = Mat3::householder(en);
  const Mat3 mirror{{1, 0, 0, 0, -1, 0, 0, 0, 1}};

  switch (r.kind) {
    case Kind::ball:
      return ball(reflect_point(r.center, en, lambda), r.radius, r.dim);
    case Kind::ellipse: {
      Mat3 f = H.times(r.frame).times(mirror);
      double angle = std::atan2(f.m[3], f.m[0]);
      return ellipse(reflect_point(r.center, en, lambda), r.ea, r.eb, angle, int(r.poly.size()));
    }
    case Kind::star: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->center = reflect_point(r.center, en, lambda);
      rep->frame = H.times(r.frame).times(mirror);
      for (double& c : rep->cb) c = -c;  // radial profile r(t) -> r(-t)
      int n = int(r.poly.size());
      rep->poly.resize(n);
      rep->vparam.assign(n + 1, 0);
      for (int k = 0; k < n; ++k) {
        double t = 2 * kPi * k / n;
        rep->vparam[k] = t;
        rep->poly[k] = rep->param_point(t);
      }
      rep->vparam[n] = 2 * kPi;
      finalize_polygon_tables(*rep);
      return Shape(rep);
    }
    case Kind::parametric: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->lin = H.times(r.lin);
      rep->off = reflect_point(r.off, en, lambda);
      int n = int(r.poly.size());
      rep->vparam.assign(n + 1, 0);
      for (int k = 0; k <= n; ++k) rep->vparam[k] = double(k) / n;
      rep->poly.resize(n);
      auto build = [&](bool reversed) {
        rep->reversed = reversed;
        for (int k = 0; k < n; ++k) {
          rep->poly[k] = rep->param_point(rep->vparam[k]);
          rep->poly[k].z = 0;
        }
      };
      build(!r.reversed);
      if (shoelace_area(rep->poly) < 0) build(r.reversed);
      finalize_polygon_tables(*rep);
      rep->volume = shoelace_area(rep->poly);
      return Shape(rep);
    }
    case Kind::ellipsoid: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->center = reflect_point(r.center, en, lambda);
      rep->emat = H.times(r.emat);
      rep->emat_inv = r.emat_inv.times(H);
      return Shape(rep);
    }
    case Kind::perturbed: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->center = reflect_point(r.center, en, lambda);
      rep->pframe = r.pframe.times(H);
      return Shape(rep);
    }
    default: {
      std::vector<Vec> v(r.poly.rbegin(), r.poly.rend());
      for (Vec& p : v) p = reflect_point(p, en, lambda);
      return polygon(std::move(v));
    }
  }
}

Shape Shape::translated(const Vec& shift) const {
  const ShapeRep& r = *rep_;
  if (r.kind == Kind::polygon) {
    std::vector<Vec> v = r.poly;
    for (Vec& p : v) p += shift;
    return polygon(std::move(v));
  }
  auto rep = std::make_shared<ShapeRep>(r);
  rep->center = r.center + shift;
  rep->off = r.off + shift;
  if (!rep->poly.empty()) {
    for (Vec& p : rep->poly) p += shift;
    rep->index.build(rep->poly);
  }
  return Shape(rep);
}

Shape Shape::rotated(const Mat3& rot) const {
  const ShapeRep& r = *rep_;
  switch (r.kind) {
    case Kind::ball:
      return ball(rot.apply(r.center), r.radius, r.dim);
    case Kind::polygon: {
      std::vector<Vec> v = r.poly;
      for (Vec& p : v) p = rot.apply(p);
      return polygon(std::move(v));
    }
    case Kind::parametric: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->lin = rot.times(r.lin);
      rep->off = rot.apply(r.off);
      for (Vec& p : rep->poly) p = rot.apply(p);
      rep->index.build(rep->poly);
      return Shape(rep);
    }
    default: {
      auto rep = std::make_shared<ShapeRep>(r);
      rep->center = rot.apply(r.center);
      if (r.kind == Kind::ellipse || r.kind == Kind::star) rep->frame = rot.times(r.frame);
      if (r.kind == Kind::ellipsoid) {
        rep->emat = rot.times(r.emat);
        rep->emat_inv = r.emat_inv.times(rot.transposed());
      }
      if (r.kind == Kind::perturbed) rep->pframe = r.pframe.times(rot.transposed());
      if (!rep->poly.empty()) {
        for (Vec& p : rep->poly) p = rot.apply(p);
        rep->index.build(rep->poly);
      }
      return Shape(rep);
    }
  }
}

}  // namespace nlmc
