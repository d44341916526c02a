#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlmc/geometry.hpp"

namespace nlmc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial interaction kernels are handled through their tail representation
//   j(r) = nu((r, infinity)),
// where nu is a nonnegative measure on (0, infinity) split into point masses
// and an absolutely continuous part with a closed-form tail.  All
// admissibility, degeneracy and truncation-volume questions reduce to
// questions about nu.

struct Atom {
  double loc = 0;
  double mass = 0;
};

// Atoms at a*q^n with masses b*g^n, n = 0, 1, 2, ...  (0 < q < 1 so the
// locations accumulate at the origin).
struct GeometricAtomRule {
  double a = 1, q = 0.5, b = 1, g = 1;
};

struct DensityPart {
  std::function<double(double)> n;     // density of nu
  std::function<double(double)> tail;  // closed form of integral of n over (r, inf)
  double lo = 0;                       // support bounds
  double hi = kInf;
  double origin_exponent = 0;          // n(s) ~ s^e near 0, meaningful when lo == 0
  std::vector<double> kinks;           // interior non-smooth points
};

class TailMeasure {
 public:
  TailMeasure() = default;

  void add_atom(double loc, double mass);
  void set_rule(const GeometricAtomRule& rule);
  void set_density(DensityPart density);

  // nu((r, infinity)) for r > 0.
  double tail_mass(double r) const;

  double inf_support() const;
  bool charges_every_neighborhood_of_zero() const;

  // Sum of mass * f(loc) over all atoms with lo < loc <= hi.
  template <class F>
  double sum_atoms(double lo, double hi, F&& f) const {
    double acc = 0;
    for (const Atom& a : atoms_)
      if (a.loc > lo && a.loc <= hi) acc += a.mass * f(a.loc);
    if (rule_) {
      const auto& r = *rule_;
      double loc = r.a, mass = r.b;
      for (int n = 0; n < kMaxRuleAtoms && loc > lo; ++n) {
        if (loc <= hi) acc += mass * f(loc);
        loc *= r.q;
        mass *= r.g;
      }
    }
    return acc;
  }

  // Atom locations inside (lo, hi); used as quadrature breakpoints.
  std::vector<double> atom_locations(double lo, double hi) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<GeometricAtomRule>& rule() const { return rule_; }
  bool has_density() const { return density_.has_value(); }
  const DensityPart& density() const { return *density_; }

  static constexpr int kMaxRuleAtoms = 4096;

 private:
  std::vector<Atom> atoms_;
  std::optional<GeometricAtomRule> rule_;
  std::optional<DensityPart> density_;
};

enum class KernelFamily { fractional, truncated_constant, step_geometric, exponential, table };

class Kernel {
 public:
  // j(r) = r^(-dim-alpha): the fractional-perimeter kernel.
  static Kernel fractional(int dim, double alpha, double beta);
  // j = c on (0, r0], 0 beyond: nu = c * delta_{r0}.
  static Kernel truncated_constant(double c, double r0, double beta, int dim = 2);
  // Atoms at a*q^n with masses b*g^n.  Requires g*q^(beta+1) < 1 so the
  // regularized curvature integrals converge.
  static Kernel step_geometric(double a, double q, double b, double g, double beta, int dim = 2);
  // nu has density lambda*exp(-lambda*s): j(r) = exp(-lambda*r).
  static Kernel exponential(double lambda, double beta, int dim = 2);
  // Log-log piecewise interpolation of sampled (r_k, j_k): constant below the
  // first knot, zero beyond the last (j jumps to 0 there; j is taken
  // right-continuous).
  static Kernel table(std::vector<double> r, std::vector<double> j, double beta, int dim = 2);

  double j(double r) const;          // kernel profile, r > 0
  double j_limit_at_zero() const;    // may be +inf
  double origin_power() const;       // j(r) ~ r^(-p) near 0; 0 when bounded
  double support_radius() const;     // sup supp(j); may be +inf

  int dim() const { return dim_; }
  double beta() const { return beta_; }
  KernelFamily family() const { return family_; }
  const TailMeasure& measure() const { return nu_; }
  std::string describe() const;

 private:
  Kernel() = default;

  int dim_ = 2;
  double beta_ = 1;
  KernelFamily family_ = KernelFamily::fractional;
  TailMeasure nu_;
  std::function<double(double)> j_closed_;            // optional fast profile
  std::function<double(double)> tail_volume_closed_;  // optional closed-form truncation volume
  double origin_power_ = 0;
  double j_zero_ = kInf;
  double support_radius_ = kInf;
  std::string describe_;

  friend double tail_volume(const Kernel&, double);
};

struct AdmissibilityReport {
  bool admissible = false;
  double near_origin = kInf;  // omega_{d-1} * integral over (0,1) of r^(beta+d-2) j(r) dr
  double tail = kInf;         // truncation volume at radius 1
  std::string note;
};

// Integrability check: the kernel generates a finite regularized curvature
// iff both the near-origin moment and the truncation volume are finite.
AdmissibilityReport levy_admissibility(const Kernel& k);

// Degeneracy dichotomy: j is strictly larger near 0 than at every fixed
// radius iff nu charges every neighborhood of the origin.
bool nondegenerate_at_zero(const Kernel& k);

// Integral of j(|z|) over the exterior of the ball of radius R (a finite
// number exactly when the admissibility tail part is finite).
double tail_volume(const Kernel& k, double R);

}  // namespace nlmc
