#include "nlmc/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "nlmc/parallel.hpp"
#include "nlmc/quadrature.hpp"

namespace nlmc {

namespace {

// Known kinks/jumps of s -> j(s) m0(s) inside (lo, hi).
std::vector<double> integrand_breaks(const Kernel& kernel, const MomentCache& cache, double lo,
                                     double hi) {
  std::vector<double> b = kernel.measure().atom_locations(lo, hi);
  if (kernel.measure().has_density())
    for (double k : kernel.measure().density().kinks)
      if (k > lo && k < hi) b.push_back(k);
  for (double k : cache.radial_kinks())
    if (k > lo && k < hi) b.push_back(k);
  double sup = kernel.support_radius();
  if (sup > lo && sup < hi) b.push_back(sup);
  return b;
}

// Integral of j(s) m0(x,s) ds over (lo, hi), adaptively.
double shell_integral(const Kernel& kernel, const MomentCache& cache, double lo, double hi,
                      double abs_tol, double* err_acc) {
  hi = std::min(hi, kernel.support_radius());
  if (!(hi > lo)) return 0;
  auto f = [&](double s) { return kernel.j(s) * cache(s).m0; };
  IntegrationResult r = integrate(f, lo, hi, abs_tol, 1e-12, integrand_breaks(kernel, cache, lo, hi));
  if (err_acc) *err_acc += r.abserr;
  return r.value;
}

double h_epsilon_cached(const Kernel& kernel, const MomentCache& cache, double eps,
                        double quad_abs_tol, double* quad_err) {
  double far = cache.far_radius();
  if (eps >= far) return tail_volume(kernel, eps);
  double acc = shell_integral(kernel, cache, eps, far, quad_abs_tol, quad_err);
  return acc + tail_volume(kernel, far);
}

// Generic dyadic-cutoff limit: base value at eps0 plus increments over
// (eps_k, eps_{k-1}], extrapolated assuming geometric decay of the residual.
CurvatureResult pv_limit(double eps0, double base, double base_err,
                         const std::function<double(double, double, double*)>& increment,
                         double order_hint, const EvalOptions& opts) {
  CurvatureResult out;
  out.epsilons.push_back(eps0);
  out.raw_values.push_back(base);

  double quad_err = base_err;
  double H = base;
  double extrap_prev = base;
  double extrap = base;
  double extrap_jump = kInf;
  double rho_hint = std::pow(0.5, std::clamp(order_hint, 0.25, 4.0));
  double eps_prev = eps0;

  for (int k = 1; k <= opts.max_levels; ++k) {
    double eps = eps0 * std::pow(0.5, k);
    double delta = increment(eps, eps_prev, &quad_err);
    H += delta;
    out.epsilons.push_back(eps);
    out.raw_values.push_back(H);
    out.levels = k;

    size_t n = out.raw_values.size();
    double scale = std::max(1.0, std::abs(H));
    if (n >= 3) {
      double d1 = out.raw_values[n - 2] - out.raw_values[n - 3];
      double d2 = out.raw_values[n - 1] - out.raw_values[n - 2];
      double rho = (d1 != 0) ? d2 / d1 : 0.0;
      if (!(rho > 0 && rho < 0.95)) rho = rho_hint;
      extrap = H + d2 * rho / (1 - rho);
      if (std::abs(d2) <= 1e-15 * scale) extrap = H;  // rounding floor reached
    } else {
      extrap = H;
    }

    extrap_jump = std::abs(extrap - extrap_prev);
    if (k >= 3 && extrap_jump <= opts.tol * scale) {
      out.converged = true;
      extrap_prev = extrap;
      break;
    }
    extrap_prev = extrap;
    eps_prev = eps;
  }

  out.value = extrap;
  out.error_estimate = std::max(extrap_jump, 0.05 * std::abs(extrap - H)) + quad_err +
                       1e-15 * std::abs(extrap);
  return out;
}

}  // namespace

double h_epsilon(const Shape& shape, const Kernel& kernel, const Vec& x, double eps,
                 double quad_abs_tol, double* quad_err) {
  MomentCache cache = shape.moment_cache(x);
  if (quad_err) *quad_err = 0;
  return h_epsilon_cached(kernel, cache, eps, quad_abs_tol, quad_err);
}

Vec grad_h_epsilon(const Shape& shape, const Kernel& kernel, const Vec& x, double eps,
                   double quad_abs_tol) {
  MomentCache cache = shape.moment_cache(x);
  double far = cache.far_radius();
  Vec g;

  if (eps < far) {
    const TailMeasure& nu = kernel.measure();
    // atoms of nu in (eps, far]
    g += nu.sum_atoms(eps, far, [&](double a) { return cache(a).m1.x / a; }) * Vec{1, 0, 0};
    g += nu.sum_atoms(eps, far, [&](double a) { return cache(a).m1.y / a; }) * Vec{0, 1, 0};
    if (shape.dim() == 3)
      g += nu.sum_atoms(eps, far, [&](double a) { return cache(a).m1.z / a; }) * Vec{0, 0, 1};

    if (nu.has_density()) {
      const DensityPart& den = nu.density();
      double lo = std::max(eps, den.lo), hi = std::min(far, den.hi);
      if (hi > lo) {
        std::vector<double> breaks = den.kinks;
        for (double k : cache.radial_kinks())
          if (k > lo && k < hi) breaks.push_back(k);
        auto comp = [&](int c) {
          auto f = [&](double s) {
            Vec m1 = cache(s).m1;
            double val = c == 0 ? m1.x : (c == 1 ? m1.y : m1.z);
            return den.n(s) * val / s;
          };
          return integrate(f, lo, hi, quad_abs_tol, 1e-12, breaks).value;
        };
        g += Vec{comp(0), comp(1), shape.dim() == 3 ? comp(2) : 0};
      }
    }
  }

  // Boundary term from the moving cutoff sphere.
  double jeps = kernel.j(eps);
  if (jeps > 0 && eps < far) g -= (jeps / eps) * cache(eps).m1;
  return g;
}

CurvatureResult nonlocal_mean_curvature(const Shape& shape, const Kernel& kernel, const Vec& x,
                                        const EvalOptions& opts) {
  MomentCache cache = shape.moment_cache(x);
  double far = cache.far_radius();
  double eps0 = std::min(opts.eps0_factor * shape.diameter(), 0.5 * far);
  double quad_tol = opts.quad_abs_tol > 0 ? opts.quad_abs_tol : std::max(opts.tol * 1e-4, 1e-14);

  double base_err = 0;
  double base = h_epsilon_cached(kernel, cache, eps0, quad_tol, &base_err);

  // Residual H(eps) - H(0) ~ eps^(d + 1 - p) for boundary points on smooth
  // arcs (m0 ~ s^d near 0, j ~ s^-p).
  double order = shape.dim() + 1 - kernel.origin_power();
  auto inc = [&](double lo, double hi, double* err) {
    return shell_integral(kernel, cache, lo, hi, quad_tol, err);
  };
  return pv_limit(eps0, base, base_err, inc, order, opts);
}

CurvatureResult tangential_derivative(const Shape& shape, const Kernel& kernel, const Vec& x,
                                      const Vec& v, const EvalOptions& opts) {
  MomentCache cache = shape.moment_cache(x);
  double far = cache.far_radius();
  double eps0 = std::min(opts.eps0_factor * shape.diameter(), 0.5 * far);
  double quad_tol = opts.quad_abs_tol > 0 ? opts.quad_abs_tol : std::max(opts.tol * 1e-4, 1e-14);
  const TailMeasure& nu = kernel.measure();

  // integral over (lo, hi] of s^-1 (m1 . v) nu(ds); m1 vanishes beyond far.
  auto window = [&](double lo, double hi, double* err) {
    double hi_eff = std::min(hi, far);
    double acc = 0;
    if (hi_eff > lo)
      acc += nu.sum_atoms(lo, hi_eff, [&](double a) { return dot(cache(a).m1, v) / a; });
    if (nu.has_density()) {
      const DensityPart& den = nu.density();
      double qlo = std::max(lo, den.lo), qhi = std::min(hi_eff, den.hi);
      if (qhi > qlo) {
        auto f = [&](double s) { return den.n(s) * dot(cache(s).m1, v) / s; };
        IntegrationResult r = integrate(f, qlo, qhi, quad_tol, 1e-12, den.kinks);
        acc += r.value;
        if (err) *err += r.abserr;
      }
    }
    return acc;
  };

  double base_err = 0;
  double base = window(eps0, kInf, &base_err);

  // m1 . v ~ s^(d + beta) near the boundary, so the residual integral runs
  // like eps^(d + beta - 1 - p) for power kernels (and better for bounded ones).
  double p = kernel.origin_power();
  double order = p > 0 ? shape.dim() + kernel.beta() - 1 - p : shape.dim() + kernel.beta();
  auto inc = [&](double lo, double hi, double* err) { return window(lo, hi, err); };
  return pv_limit(eps0, base, base_err, inc, order, opts);
}

CurvatureProfile curvature_profile(const Shape& shape, const Kernel& kernel, int n,
                                   const EvalOptions& opts) {
  CurvatureProfile prof;
  std::vector<BoundaryPoint> pts = shape.boundary_sample(n);
  prof.entries.resize(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    prof.entries[i].point = pts[i];
    prof.entries[i].curvature = nonlocal_mean_curvature(shape, kernel, pts[i].pos, opts);
  });

  ConstancyReport& rep = prof.report;
  rep.tol = opts.tol;
  if (!prof.entries.empty()) {
    rep.min = kInf;
    rep.max = -kInf;
    double sum = 0;
    for (const ProfileEntry& e : prof.entries) {
      sum += e.curvature.value;
      rep.min = std::min(rep.min, e.curvature.value);
      rep.max = std::max(rep.max, e.curvature.value);
      rep.max_error_estimate = std::max(rep.max_error_estimate, e.curvature.error_estimate);
    }
    rep.mean = sum / double(prof.entries.size());
    rep.spread = rep.max - rep.min;
    rep.constant_within_tol = rep.spread <= opts.tol * std::max(1.0, std::abs(rep.mean));
  }
  return prof;
}

std::optional<double> closed_form_small_set(const Shape& shape, const Kernel& kernel) {
  double rstar = kernel.measure().inf_support();
  if (!(rstar > 0) || !std::isfinite(rstar)) return std::nullopt;
  if (!(shape.diameter() < rstar)) return std::nullopt;
  double c = kernel.j(0.5 * rstar);  // j is constant on (0, r*)
  return c * (ball_volume(shape.dim(), rstar) - 2 * shape.volume()) + tail_volume(kernel, rstar);
}

}  // namespace nlmc
