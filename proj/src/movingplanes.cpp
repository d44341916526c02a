#include "nlmc/movingplanes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nlmc/parallel.hpp"
#include "nlmc/polygon.hpp"
#include "nlmc/rng.hpp"

namespace nlmc {

const char* critical_kind_name(CriticalKind k) {
  switch (k) {
    case CriticalKind::touching: return "touching";
    case CriticalKind::non_transversal: return "non_transversal";
    case CriticalKind::both: return "both";
    default: return "undetermined";
  }
}

namespace {

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double f = 1, r = 0;
  while (i) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

// Everything the sweep needs for one direction, built once.
struct SweepContext {
  const Shape* shape = nullptr;
  int dim = 2;
  Vec e, f1, f2;          // orthonormal; e is the sweep direction
  Vec box_center;
  double box_radius = 0;
  double smin = 0, smax = 0;
  double tol_lambda = 0;
  std::vector<Vec> bpos;  // boundary points sorted by decreasing pos . e
  std::vector<double> bu;
};

SweepContext make_context(const Shape& shape, const Vec& e,
                          const MovingPlanesOptions& opts) {
  SweepContext cx;
  cx.shape = &shape;
  cx.dim = shape.dim();
  cx.e = normalized(e);
  if (norm(cx.e) == 0) throw std::invalid_argument("moving planes: zero direction");
  if (cx.dim == 2) {
    cx.f1 = perp2(cx.e);
  } else {
    double ax = std::fabs(cx.e.x), ay = std::fabs(cx.e.y), az = std::fabs(cx.e.z);
    Vec a = ax <= ay && ax <= az ? Vec{1, 0, 0} : (ay <= az ? Vec{0, 1, 0} : Vec{0, 0, 1});
    cx.f1 = normalized(a - dot(a, cx.e) * cx.e);
    cx.f2 = cross(cx.e, cx.f1);
  }
  cx.box_center = shape.bounding_center();
  cx.box_radius = shape.bounding_radius() * (1 + 1e-9);
  cx.smax = shape.directional_max(cx.e);
  cx.smin = -shape.directional_max(-cx.e);
  cx.tol_lambda = opts.tol_lambda > 0 ? opts.tol_lambda : 1e-7 * shape.diameter();

  std::vector<BoundaryPoint> bp = shape.boundary_sample(std::max(16, opts.boundary_samples));
  std::vector<size_t> idx(bp.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::vector<double> u(bp.size());
  for (size_t i = 0; i < bp.size(); ++i) u[i] = dot(bp[i].pos, cx.e);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return u[a] > u[b]; });
  cx.bpos.reserve(bp.size());
  cx.bu.reserve(bp.size());
  for (size_t i : idx) {
    cx.bpos.push_back(bp[i].pos);
    cx.bu.push_back(u[i]);
  }
  return cx;
}

// Does reflecting E \cap {x . e > mu} across {x . e = mu} stay inside the
// closure of E?  Boundary points beyond the plane must reflect into the
// closure; a low-discrepancy interior sample guards against contacts that a
// coarse boundary sweep could miss.
bool slab_reflects_inside(const SweepContext& cx, double mu,
                          const MovingPlanesOptions& opts) {
  const Shape& sh = *cx.shape;
  if (mu >= cx.smax) return true;

  for (size_t i = 0; i < cx.bpos.size() && cx.bu[i] > mu; ++i)
    if (sh.signed_indicator(reflect_point(cx.bpos[i], cx.e, mu)) > 0) return false;

  double v0 = dot(cx.box_center, cx.f1), w0 = dot(cx.box_center, cx.f2);
  int want = std::max(1, opts.cap_samples);
  std::uint64_t tries = 12 * std::uint64_t(want);
  int got = 0;
  for (std::uint64_t t = 1; t <= tries && got < want; ++t) {
    double u = mu + (cx.smax - mu) * radical_inverse(t, 2);
    double v = v0 + cx.box_radius * (2 * radical_inverse(t, 3) - 1);
    Vec x = u * cx.e + v * cx.f1;
    if (cx.dim == 3) x += (w0 + cx.box_radius * (2 * radical_inverse(t, 5) - 1)) * cx.f2;
    if (sh.classify(x) != Region::inside) continue;
    ++got;
    if (sh.signed_indicator(reflect_point(x, cx.e, mu)) > 0) return false;
  }
  return true;
}

// First plane position mu > lambda whose slab fails to reflect inside, or
// NaN when all of them pass.  The grid is quadratically clustered toward
// lambda, with an extra geometric boundary layer so that contacts only a few
// tolerances above lambda are still seen.
double first_violation(const SweepContext& cx, double lambda,
                       const MovingPlanesOptions& opts) {
  double range = cx.smax - lambda;
  double nan = std::numeric_limits<double>::quiet_NaN();
  if (range <= 0) return nan;
  int grid = std::max(4, opts.lambda_grid);
  double floor_off = range * (0.5 / grid) * (0.5 / grid);
  for (double off = cx.tol_lambda; off < floor_off; off *= 4)
    if (!slab_reflects_inside(cx, lambda + off, opts)) return lambda + off;
  for (int i = 0; i < grid; ++i) {
    double u = (i + 0.5) / grid;
    double mu = lambda + range * u * u;
    if (!slab_reflects_inside(cx, mu, opts)) return mu;
  }
  return nan;
}

double critical_lambda_in(const SweepContext& cx, const MovingPlanesOptions& opts) {
  double lo = cx.smin, hi = cx.smax;
  while (hi - lo > cx.tol_lambda) {
    double mid = 0.5 * (lo + hi);
    double w = first_violation(cx, mid, opts);
    if (std::isnan(w))
      hi = mid;
    else
      lo = std::max(mid, w);  // a violation at w rules out every lambda < w
  }
  return hi;
}

}  // namespace

double directional_max(const Shape& shape, const Vec& e) {
  return shape.directional_max(e);
}

double critical_lambda(const Shape& shape, const Vec& e, const MovingPlanesOptions& opts) {
  SweepContext cx = make_context(shape, e, opts);
  return critical_lambda_in(cx, opts);
}

double symmetric_difference_measure(const Shape& shape, const Vec& e, double lambda,
                                    std::uint64_t seed, std::size_t samples,
                                    double* se_out) {
  Vec en = normalized(e);
  int dim = shape.dim();
  Vec c1 = shape.bounding_center();
  Vec c2 = reflect_point(c1, en, lambda);
  double br = shape.bounding_radius();
  Vec lo{std::min(c1.x, c2.x) - br, std::min(c1.y, c2.y) - br,
         dim == 3 ? std::min(c1.z, c2.z) - br : 0};
  Vec hi{std::max(c1.x, c2.x) + br, std::max(c1.y, c2.y) + br,
         dim == 3 ? std::max(c1.z, c2.z) + br : 0};

  int g = dim == 2 ? 16 : 8;
  int cells = dim == 2 ? g * g : g * g * g;
  std::size_t per = std::max<std::size_t>(1, samples / std::size_t(cells));
  Vec step{(hi.x - lo.x) / g, (hi.y - lo.y) / g, dim == 3 ? (hi.z - lo.z) / g : 0};
  double cell_vol = step.x * step.y * (dim == 3 ? step.z : 1.0);

  std::vector<double> frac(cells);
  parallel_for(size_t(cells), [&](size_t ci) {
    int ix = int(ci) % g, iy = (int(ci) / g) % g, iz = int(ci) / (g * g);
    Rng rng(substream_seed(seed, ci));
    std::size_t hits = 0;
    for (std::size_t k = 0; k < per; ++k) {
      Vec x{lo.x + (ix + rng.uniform()) * step.x,
            lo.y + (iy + rng.uniform()) * step.y,
            dim == 3 ? lo.z + (iz + rng.uniform()) * step.z : 0};
      bool in_set = shape.signed_indicator(x) < 0;
      bool in_mirror = shape.signed_indicator(reflect_point(x, en, lambda)) < 0;
      hits += (in_set != in_mirror) ? 1 : 0;
    }
    frac[ci] = double(hits) / double(per);
  });

  double total = 0, var = 0;
  for (double p : frac) {
    total += p * cell_vol;
    var += p * (1 - p) / double(per) * cell_vol * cell_vol;
  }
  if (se_out) *se_out = std::sqrt(var);
  return total;
}

CriticalPlaneReport critical_plane(const Shape& shape, const Vec& e,
                                   const MovingPlanesOptions& opts) {
  SweepContext cx = make_context(shape, e, opts);
  CriticalPlaneReport rep;
  rep.direction = cx.e;
  rep.s_max = cx.smax;
  rep.s_min = cx.smin;
  rep.lambda = critical_lambda_in(cx, opts);

  // Contact classification on a finer boundary sweep.
  int nf = std::max(4 * std::max(16, opts.boundary_samples), 4096);
  std::vector<BoundaryPoint> fine = shape.boundary_sample(nf);
  double spacing = 0;
  for (size_t i = 0; i < fine.size(); ++i)
    spacing = std::max(spacing, dist(fine[i].pos, fine[(i + 1) % fine.size()].pos));
  double diam = shape.diameter();
  double contact_tol = opts.contact_factor * cx.tol_lambda;
  // the quadratic term is what tangential sampling offsets cost near a contact
  double touch_tol = std::max(contact_tol, 25 * spacing * spacing / diam);
  double plane_band = std::max(contact_tol, 1.5 * spacing);

  double best_touch = kInf;
  double margin = 2 * std::max(plane_band, touch_tol);
  for (const BoundaryPoint& bp : fine) {
    if (dot(bp.pos, cx.e) - rep.lambda <= margin) continue;
    double d = shape.boundary_distance(reflect_point(bp.pos, cx.e, rep.lambda));
    if (d < best_touch) {
      best_touch = d;
      rep.touch_point = bp.pos;
    }
  }
  rep.has_touch_point = best_touch <= touch_tol;

  double best_flat = kInf;
  if (cx.dim == 2) {
    // refine each plane crossing along the boundary parameter
    double period = shape.param_period();
    size_t n = fine.size();
    for (size_t i = 0; i < n; ++i) {
      double ga = dot(fine[i].pos, cx.e) - rep.lambda;
      double gb = dot(fine[(i + 1) % n].pos, cx.e) - rep.lambda;
      if ((ga > 0) == (gb > 0)) continue;
      double ta = fine[i].param, tb = fine[(i + 1) % n].param;
      if (tb <= ta) tb += period;
      for (int it = 0; it < 80; ++it) {
        double tm = 0.5 * (ta + tb);
        double gm = dot(shape.boundary_point_at(tm).pos, cx.e) - rep.lambda;
        if ((gm > 0) == (ga > 0)) {
          ta = tm;
          ga = gm;
        } else {
          tb = tm;
        }
      }
      BoundaryPoint y = shape.boundary_point_at(0.5 * (ta + tb));
      double ne = std::fabs(dot(y.normal, cx.e));
      if (ne < best_flat) {
        best_flat = ne;
        rep.flat_point = y.pos;
      }
    }
    rep.has_flat_point = best_flat <= opts.normal_angle_tol;
  } else {
    // sample-level check only; 3D parameters are chart-based
    for (const BoundaryPoint& bp : fine) {
      if (std::fabs(dot(bp.pos, cx.e) - rep.lambda) > plane_band) continue;
      double ne = std::fabs(dot(bp.normal, cx.e));
      if (ne < best_flat) {
        best_flat = ne;
        rep.flat_point = bp.pos;
      }
    }
    rep.has_flat_point = best_flat <= std::max(opts.normal_angle_tol, 0.05);
  }

  if (rep.has_touch_point && rep.has_flat_point)
    rep.kind = CriticalKind::both;
  else if (rep.has_touch_point)
    rep.kind = CriticalKind::touching;
  else if (rep.has_flat_point)
    rep.kind = CriticalKind::non_transversal;
  else
    rep.kind = CriticalKind::undetermined;

  rep.sym_diff = symmetric_difference_measure(shape, cx.e, rep.lambda, opts.seed,
                                              opts.mc_samples, &rep.sym_diff_se);
  if (cx.dim == 2) {
    const std::vector<Vec>* va = shape.polygon_vertices();
    Shape mirror = shape.reflected(cx.e, rep.lambda);
    const std::vector<Vec>* vb = mirror.polygon_vertices();
    if (va && vb)
      rep.sym_diff_exact = shoelace_area(*va) + shoelace_area(*vb) -
                           2 * polygon_intersection_area(*va, *vb);
  }

  double measure = rep.sym_diff_exact >= 0 ? rep.sym_diff_exact : rep.sym_diff;
  rep.symmetric = measure <= std::max(3 * rep.sym_diff_se, 1e-5 * shape.volume());
  return rep;
}

double reflection_deficit(const Shape& shape, const Kernel& kernel, const Vec& e,
                          double lambda, const Vec& p, int grid_n) {
  if (kernel.dim() != shape.dim())
    throw std::invalid_argument("reflection_deficit: kernel and shape dimensions differ");
  Vec en = normalized(e);
  int dim = shape.dim();
  Vec c = shape.bounding_center();
  double br = shape.bounding_radius();
  int n = std::max(8, dim == 3 ? std::min(grid_n, 160) : grid_n);
  double h = 2 * br / n;
  double cell = dim == 3 ? h * h * h : h * h;
  int nz = dim == 3 ? n : 1;

  const int sub = dim == 3 ? 2 : 4;  // sublattice for cells straddling the cut

  auto member = [&](const Vec& y) {
    return shape.classify(y) == Region::inside &&
           shape.signed_indicator(reflect_point(y, en, lambda)) > 0;  // E \ R(E)
  };
  auto integrand = [&](const Vec& y, double guard) {
    if (!member(y)) return 0.0;
    double r1 = dist(p, y);
    if (r1 < guard) return 0.0;  // skip the singular cell of the midpoint rule
    return kernel.j(r1) - kernel.j(dist(p, reflect_point(y, en, lambda)));
  };

  std::vector<double> row(n, 0.0);
  parallel_for(size_t(n), [&](size_t iy) {
    double acc = 0;
    for (int iz = 0; iz < nz; ++iz)
      for (int ix = 0; ix < n; ++ix) {
        Vec y{c.x - br + (ix + 0.5) * h, c.y - br + (iy + 0.5) * h,
              dim == 3 ? c.z - br + (iz + 0.5) * h : 0};
        // Cells crossed by the boundary of E \ R(E) dominate the midpoint
        // error; detect them by comparing membership at the center and the
        // corners, and resolve them on a finer lattice instead of refining
        // the whole grid.
        bool m0 = member(y);
        bool straddles = false;
        for (int k = 0; k < 4 * (dim == 3 ? 2 : 1) && !straddles; ++k) {
          Vec corner{y.x + (k & 1 ? 0.5 : -0.5) * h, y.y + (k & 2 ? 0.5 : -0.5) * h,
                     dim == 3 ? y.z + (k & 4 ? 0.5 : -0.5) * h : 0};
          straddles = member(corner) != m0;
        }
        if (!straddles) {
          if (m0) acc += integrand(y, 0.75 * h);
          continue;
        }
        double hs = h / sub;
        int subz = dim == 3 ? sub : 1;
        double sacc = 0;
        for (int jz = 0; jz < subz; ++jz)
          for (int jy = 0; jy < sub; ++jy)
            for (int jx = 0; jx < sub; ++jx) {
              Vec ys{y.x - h / 2 + (jx + 0.5) * hs, y.y - h / 2 + (jy + 0.5) * hs,
                     dim == 3 ? y.z - h / 2 + (jz + 0.5) * hs : 0};
              sacc += integrand(ys, 0.75 * hs);
            }
        acc += sacc / (sub * sub * subz);
      }
    row[iy] = acc;
  });
  double s = 0;
  for (double v : row) s += v;
  return s * cell;
}

AlexandrovProbe alexandrov_probe(const Shape& shape, const Kernel& kernel,
                                 const std::vector<Vec>& directions, int profile_n,
                                 const EvalOptions& eval_opts,
                                 const MovingPlanesOptions& mp_opts) {
  AlexandrovProbe pr;
  pr.kernel_admissibility = levy_admissibility(kernel);
  pr.kernel_nondegenerate = nondegenerate_at_zero(kernel);
  if (!pr.kernel_admissibility.admissible) {
    pr.verdict = "kernel fails the near-origin integrability test; the curvature integral diverges";
    return pr;
  }

  pr.profile = curvature_profile(shape, kernel, profile_n, eval_opts);
  pr.curvature_constant = pr.profile.report.constant_within_tol;

  bool all_sym = !directions.empty();
  for (const Vec& d : directions) {
    pr.planes.push_back(critical_plane(shape, d, mp_opts));
    all_sym = all_sym && pr.planes.back().symmetric;
  }
  pr.symmetric_all_directions = all_sym;

  if (!pr.curvature_constant)
    pr.verdict = "nonlocal curvature varies along the boundary";
  else if (pr.symmetric_all_directions)
    pr.verdict = pr.kernel_nondegenerate
                     ? "constant nonlocal curvature and reflection symmetry in every "
                       "tested direction; consistent with a ball"
                     : "reflection symmetric in every tested direction";
  else
    pr.verdict = pr.kernel_nondegenerate
                     ? "constant nonlocal curvature yet asymmetric; unexpected for a "
                       "kernel active at every scale, inspect tolerances"
                     : "constant nonlocal curvature without reflection symmetry; the "
                       "kernel ignores small scales, so constancy alone does not force "
                       "roundness";
  return pr;
}

}  // namespace nlmc
