#pragma once

#include <optional>
#include <vector>

#include "nlmc/kernels.hpp"
#include "nlmc/shapes.hpp"

namespace nlmc {

struct EvalOptions {
  double tol = 1e-6;        // stop when consecutive extrapolants differ by less
                            // than tol * max(1, |value|)
  int max_levels = 24;      // dyadic cutoff levels after the starting one
  double eps0_factor = 0.1; // starting cutoff = factor * diameter
  double quad_abs_tol = 0;  // per-integral absolute tolerance; 0 picks one from tol
};

struct CurvatureResult {
  double value = 0;            // extrapolated limit
  double error_estimate = 0;   // extrapolation + quadrature error bound
  bool converged = false;
  int levels = 0;              // cutoff levels actually used
  std::vector<double> epsilons;
  std::vector<double> raw_values;  // truncated values at each cutoff
};

// Curvature integral truncated at eps: integral of chi~(y) j(|x-y|) over
// |y - x| > eps.  quad_err, when given, receives the quadrature error bound.
double h_epsilon(const Shape& shape, const Kernel& kernel, const Vec& x, double eps,
                 double quad_abs_tol = 1e-12, double* quad_err = nullptr);

// Spatial gradient of the truncated curvature at fixed eps.
Vec grad_h_epsilon(const Shape& shape, const Kernel& kernel, const Vec& x, double eps,
                   double quad_abs_tol = 1e-12);

// Principal-value limit of h_epsilon as eps -> 0, via dyadic cutoffs and
// empirical-order extrapolation.
CurvatureResult nonlocal_mean_curvature(const Shape& shape, const Kernel& kernel, const Vec& x,
                                        const EvalOptions& opts = {});

// Directional derivative of the curvature along v at a boundary point
// (v should be tangent there):
//   lim_{eps->0} integral over (eps, inf) of s^-1 (m1(x,s) . v) nu(ds).
CurvatureResult tangential_derivative(const Shape& shape, const Kernel& kernel, const Vec& x,
                                      const Vec& v, const EvalOptions& opts = {});

struct ProfileEntry {
  BoundaryPoint point;
  CurvatureResult curvature;
};

struct ConstancyReport {
  double mean = 0;
  double min = 0;
  double max = 0;
  double spread = 0;               // max - min
  double max_error_estimate = 0;
  bool constant_within_tol = false;
  double tol = 0;
};

struct CurvatureProfile {
  std::vector<ProfileEntry> entries;
  ConstancyReport report;
};

// Curvature at n quasi-uniform boundary points (parallelized).
CurvatureProfile curvature_profile(const Shape& shape, const Kernel& kernel, int n,
                                   const EvalOptions& opts = {});

// When the kernel is constant on (0, r*) with r* = inf supp(nu) and the set
// has diameter < r*, the curvature is the same at every point of the set:
//   H = j(0+) (|B_r*| - 2|E|) + tail_volume(r*).
// Returns nothing when the geometry does not satisfy that condition.
std::optional<double> closed_form_small_set(const Shape& shape, const Kernel& kernel);

}  // namespace nlmc
