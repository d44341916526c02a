#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlmc/curvature.hpp"
#include "nlmc/geometry.hpp"
#include "nlmc/kernels.hpp"
#include "nlmc/shapes.hpp"

namespace nlmc {

struct MovingPlanesOptions {
  double tol_lambda = 0;        // plane-position tolerance; 0 means 1e-7 * diameter
  int lambda_grid = 96;         // slab positions tested per plane candidate
  int cap_samples = 256;        // interior points sampled per slab
  int boundary_samples = 2048;  // boundary points reused across slab tests
  std::size_t mc_samples = 1000000;  // Monte Carlo budget for |E \xor R(E)|
  std::uint64_t seed = 42;
  double contact_factor = 10;   // contact tolerance = factor * tol_lambda
  double normal_angle_tol = 1e-4;  // |n . e| threshold for a grazing plane
};

enum class CriticalKind { touching, non_transversal, both, undetermined };

const char* critical_kind_name(CriticalKind k);

// The critical plane {x . e = lambda} for one sweep direction, with the
// classification of how the reflected cap first makes contact and a measure
// of how far the set is from being symmetric about that plane.
struct CriticalPlaneReport {
  Vec direction;
  double s_max = 0;       // sup of x . e over the set
  double s_min = 0;       // inf of x . e over the set
  double lambda = 0;      // critical plane position
  CriticalKind kind = CriticalKind::undetermined;
  bool has_touch_point = false;
  Vec touch_point;        // boundary point off the plane whose reflection
                          // lands back on the boundary
  bool has_flat_point = false;
  Vec flat_point;         // boundary point on the plane met non-transversally
  double sym_diff = 0;        // Monte Carlo estimate of |E \xor R(E)|
  double sym_diff_se = 0;     // standard error of that estimate
  double sym_diff_exact = -1;  // exact polygon value when available, else -1
  bool symmetric = false;     // sym. difference indistinguishable from zero
};

struct AlexandrovProbe {
  AdmissibilityReport kernel_admissibility;
  bool kernel_nondegenerate = false;
  CurvatureProfile profile;
  bool curvature_constant = false;
  std::vector<CriticalPlaneReport> planes;
  bool symmetric_all_directions = false;
  std::string verdict;
};

// Largest extent of the set in direction e (support function).
double directional_max(const Shape& shape, const Vec& e);

// Position of the critical plane for the sweep from s_max downward: the
// smallest lambda such that reflecting E \cap {x . e > mu} across every plane
// {x . e = mu}, mu > lambda, stays inside the closure of E.
double critical_lambda(const Shape& shape, const Vec& e,
                       const MovingPlanesOptions& opts = {});

// critical_lambda plus contact classification and symmetry measurement.
CriticalPlaneReport critical_plane(const Shape& shape, const Vec& e,
                                   const MovingPlanesOptions& opts = {});

// |E \xor R(E)| for the reflection across {x . e = lambda}, by stratified
// Monte Carlo over a box containing both sets.  Deterministic for a fixed
// seed.  Optionally reports the standard error.
double symmetric_difference_measure(const Shape& shape, const Vec& e,
                                    double lambda, std::uint64_t seed,
                                    std::size_t samples,
                                    double* se_out = nullptr);

// Midpoint-rule value of  \int_{E \ R(E)} [ j(|p-y|) - j(|p - R(y)|) ] dy,
// the quantity that is nonnegative for p in the reflected side whenever the
// kernel is nonincreasing.  grid_n cells span the bounding box per axis;
// cells straddling the boundary of E \ R(E) are resolved on a finer sublattice.
double reflection_deficit(const Shape& shape, const Kernel& kernel,
                          const Vec& e, double lambda, const Vec& p,
                          int grid_n = 1200);

// Full diagnostic: admissibility and degeneracy of the kernel, a curvature
// profile over the boundary, and a critical-plane sweep for each direction.
AlexandrovProbe alexandrov_probe(const Shape& shape, const Kernel& kernel,
                                 const std::vector<Vec>& directions,
                                 int profile_n = 24,
                                 const EvalOptions& eval_opts = {},
                                 const MovingPlanesOptions& mp_opts = {});

}  // namespace nlmc
