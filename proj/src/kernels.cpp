#include "nlmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "nlmc/quadrature.hpp"

namespace nlmc {

namespace {

std::string format_str(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_dim_beta(int dim, double beta) {
  require(dim == 2 || dim == 3, "kernel: dim must be 2 or 3");
  require(beta > 0 && beta <= 2, "kernel: beta must lie in (0, 2]");
}

}  // namespace

void TailMeasure::add_atom(double loc, double mass) {
  require(loc > 0 && mass > 0, "tail measure: atoms need positive location and mass");
  atoms_.push_back({loc, mass});
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.loc > b.loc; });
}

void TailMeasure::set_rule(const GeometricAtomRule& rule) {
  require(rule.a > 0 && rule.b > 0 && rule.g > 0, "tail measure: rule parameters must be positive");
  require(rule.q > 0 && rule.q < 1, "tail measure: rule ratio q must lie in (0, 1)");
  rule_ = rule;
}

void TailMeasure::set_density(DensityPart density) { density_ = std::move(density); }

double TailMeasure::tail_mass(double r) const {
  require(r > 0, "tail measure: tail_mass needs r > 0");
  double acc = sum_atoms(r, kInf, [](double) { return 1.0; });
  if (density_) {
    if (r < density_->hi) acc += density_->tail(std::max(r, density_->lo));
  }
  return acc;
}

double TailMeasure::inf_support() const {
  double lo = kInf;
  for (const Atom& a : atoms_) lo = std::min(lo, a.loc);
  if (rule_) lo = 0;  // locations a*q^n accumulate at the origin
  if (density_) lo = std::min(lo, density_->lo);
  return lo;
}

bool TailMeasure::charges_every_neighborhood_of_zero() const { return inf_support() == 0; }

std::vector<double> TailMeasure::atom_locations(double lo, double hi) const {
  std::vector<double> locs;
  for (const Atom& a : atoms_)
    if (a.loc > lo && a.loc < hi) locs.push_back(a.loc);
  if (rule_) {
    double loc = rule_->a;
    for (int n = 0; n < kMaxRuleAtoms && loc > lo; ++n) {
      if (loc < hi) locs.push_back(loc);
      loc *= rule_->q;
    }
  }
  std::sort(locs.begin(), locs.end());
  return locs;
}

// ---------------------------------------------------------------------------
// Kernel zoo

Kernel Kernel::fractional(int dim, double alpha, double beta) {
  require_dim_beta(dim, beta);
  require(alpha > 0, "fractional kernel: alpha must be positive");
  Kernel k;
  k.dim_ = dim;
  k.beta_ = beta;
  k.family_ = KernelFamily::fractional;
  double p = dim + alpha;
  DensityPart den;
  den.n = [p](double s) { return p * std::pow(s, -p - 1); };
  den.tail = [p](double r) { return std::pow(r, -p); };
  den.lo = 0;
  den.hi = kInf;
  den.origin_exponent = -p - 1;
  k.nu_.set_density(std::move(den));
  k.j_closed_ = [p](double r) { return std::pow(r, -p); };
  double omega = unit_sphere_area(dim);
  k.tail_volume_closed_ = [omega, alpha](double R) { return omega * std::pow(R, -alpha) / alpha; };
  k.origin_power_ = p;
  k.j_zero_ = kInf;
  k.support_radius_ = kInf;
  k.describe_ = format_str("fractional(dim=%d, alpha=%g)", dim, alpha);
  return k;
}

Kernel Kernel::truncated_constant(double c, double r0, double beta, int dim) {
  require_dim_beta(dim, beta);
  require(c > 0 && r0 > 0, "truncated constant kernel: c and r0 must be positive");
  Kernel k;
  k.dim_ = dim;
  k.beta_ = beta;
  k.family_ = KernelFamily::truncated_constant;
  k.nu_.add_atom(r0, c);
  k.j_closed_ = [c, r0](double r) { return r < r0 ? c : 0.0; };
  k.tail_volume_closed_ = [c, r0, dim](double R) {
    return R >= r0 ? 0.0 : c * (ball_volume(dim, r0) - ball_volume(dim, R));
  };
  k.origin_power_ = 0;
  k.j_zero_ = c;
  k.support_radius_ = r0;
  k.describe_ = format_str("truncated_constant(c=%g, r0=%g)", c, r0);
  return k;
}

Kernel Kernel::step_geometric(double a, double q, double b, double g, double beta, int dim) {
  require_dim_beta(dim, beta);
  require(a > 0 && b > 0 && g > 0, "step kernel: a, b, g must be positive");
  require(q > 0 && q < 1, "step kernel: q must lie in (0, 1)");
  // Sum of b_n * a_n^(beta+1) must converge, else the kernel fails the
  // curvature moment bounds no matter how smooth the boundary is.
  require(g * std::pow(q, beta + 1) < 1.0,
          "step kernel: g*q^(beta+1) >= 1, masses grow too fast toward the origin");
  Kernel k;
  k.dim_ = dim;
  k.beta_ = beta;
  k.family_ = KernelFamily::step_geometric;
  GeometricAtomRule rule{a, q, b, g};
  k.nu_.set_rule(rule);
  k.origin_power_ = g > 1 ? std::log(g) / std::log(1.0 / q) : 0.0;
  k.j_zero_ = g < 1 ? b / (1 - g) : kInf;
  k.support_radius_ = a;
  k.describe_ = format_str("step_geometric(a=%g, q=%g, b=%g, g=%g)", a, q, b, g);
  return k;
}

Kernel Kernel::exponential(double lambda, double beta, int dim) {
  require_dim_beta(dim, beta);
  require(lambda > 0, "exponential kernel: lambda must be positive");
  Kernel k;
  k.dim_ = dim;
  k.beta_ = beta;
  k.family_ = KernelFamily::exponential;
  DensityPart den;
  den.n = [lambda](double s) { return lambda * std::exp(-lambda * s); };
  den.tail = [lambda](double r) { return std::exp(-lambda * r); };
  den.lo = 0;
  den.hi = kInf;
  den.origin_exponent = 0;
  k.nu_.set_density(std::move(den));
  k.j_closed_ = [lambda](double r) { return std::exp(-lambda * r); };
  double omega = unit_sphere_area(dim);
  if (dim == 2) {
    k.tail_volume_closed_ = [omega, lambda](double R) {
      return omega * std::exp(-lambda * R) * (R / lambda + 1.0 / (lambda * lambda));
    };
  } else {
    k.tail_volume_closed_ = [omega, lambda](double R) {
      double l2 = lambda * lambda;
      return omega * std::exp(-lambda * R) * (R * R / lambda + 2 * R / l2 + 2.0 / (l2 * lambda));
    };
  }
  k.origin_power_ = 0;
  k.j_zero_ = 1.0;
  k.support_radius_ = kInf;
  k.describe_ = format_str("exponential(lambda=%g)", lambda);
  return k;
}

Kernel Kernel::table(std::vector<double> r, std::vector<double> jv, double beta, int dim) {
  require_dim_beta(dim, beta);
  require(r.size() >= 2 && r.size() == jv.size(), "table kernel: need >= 2 matching samples");
  for (size_t i = 0; i < r.size(); ++i) {
    require(r[i] > 0 && jv[i] > 0, "table kernel: samples must be positive");
    if (i) {
      require(r[i] > r[i - 1], "table kernel: radii must be strictly increasing");
      require(jv[i] <= jv[i - 1], "table kernel: values must be nonincreasing");
    }
  }
  size_t m = r.size();
  // Piecewise power-law interpolation (linear in log-log coordinates).
  auto interp = [r, jv](double x) -> double {
    if (x <= r.front()) return jv.front();
    if (x >= r.back()) return 0.0;  // right-continuous drop to zero at the last knot
    size_t k = size_t(std::upper_bound(r.begin(), r.end(), x) - r.begin()) - 1;
    if (jv[k + 1] == jv[k]) return jv[k];
    double p = std::log(jv[k + 1] / jv[k]) / std::log(r[k + 1] / r[k]);
    return jv[k] * std::pow(x / r[k], p);
  };

  Kernel k;
  k.dim_ = dim;
  k.beta_ = beta;
  k.family_ = KernelFamily::table;
  double jN = jv.back();
  k.nu_.add_atom(r.back(), jN);
  DensityPart den;
  den.n = [r, jv](double s) -> double {
    if (s <= r.front() || s >= r.back()) return 0.0;
    size_t k2 = size_t(std::upper_bound(r.begin(), r.end(), s) - r.begin()) - 1;
    if (jv[k2 + 1] == jv[k2]) return 0.0;
    double p = std::log(jv[k2 + 1] / jv[k2]) / std::log(r[k2 + 1] / r[k2]);
    return -p * jv[k2] * std::pow(s / r[k2], p) / s;
  };
  den.tail = [interp, jN, rN = r.back()](double x) {
    return x >= rN ? 0.0 : interp(x) - jN;
  };
  den.lo = r.front();
  den.hi = r.back();
  den.kinks.assign(r.begin() + 1, r.end() - 1);
  k.nu_.set_density(std::move(den));
  k.j_closed_ = interp;
  k.origin_power_ = 0;
  k.j_zero_ = jv.front();
  k.support_radius_ = r.back();
  k.describe_ = format_str("table(%zu knots on [%g, %g])", m, r.front(), r.back());
  return k;
}

double Kernel::j(double r) const {
  require(r > 0, "kernel: j(r) needs r > 0");
  if (j_closed_) return j_closed_(r);
  return nu_.tail_mass(r);
}

double Kernel::j_limit_at_zero() const { return j_zero_; }
double Kernel::origin_power() const { return origin_power_; }
double Kernel::support_radius() const { return support_radius_; }
std::string Kernel::describe() const { return describe_; }

// ---------------------------------------------------------------------------
// Admissibility

namespace {

// integral over (0,1] of r^(p-1) * j(r) dr recast through the measure:
// equals (1/p) * integral of min(t,1)^p nu(dt).  Returns +inf when divergent.
double near_origin_moment(const Kernel& k, double p) {
  const TailMeasure& nu = k.measure();
  double acc = 0;

  for (const Atom& a : nu.atoms()) acc += a.mass * std::pow(std::min(a.loc, 1.0), p);

  if (nu.rule()) {
    const auto& r = *nu.rule();
    // Ratio of consecutive terms once a*q^n <= 1 is g*q^p.
    double ratio = r.g * std::pow(r.q, p);
    if (ratio >= 1.0 - 1e-12) return kInf;
    double loc = r.a, mass = r.b;
    int n = 0;
    while (loc > 1.0 && n < TailMeasure::kMaxRuleAtoms) {
      acc += mass;
      loc *= r.q;
      mass *= r.g;
      ++n;
    }
    acc += mass * std::pow(loc, p) / (1.0 - ratio);
  }

  if (nu.has_density()) {
    const DensityPart& den = nu.density();
    if (den.lo == 0 && p + den.origin_exponent <= -1 + 1e-12) return kInf;
    if (den.hi > 1.0) acc += den.tail(std::max(1.0, den.lo));
    double hi = std::min(den.hi, 1.0);
    if (den.lo > 0) {
      if (hi > den.lo) {
        auto f = [&](double s) { return std::pow(s, p) * den.n(s); };
        acc += integrate(f, den.lo, hi, 1e-14, 1e-12, den.kinks).value;
      }
    } else {
      // Dyadic blocks toward the origin; terms decay geometrically because
      // the combined exponent p + origin_exponent exceeds -1.
      auto f = [&](double s) { return std::pow(s, p) * den.n(s); };
      double upper = hi;
      for (int blk = 0; blk < 1200 && upper > 0; ++blk) {
        double lower = upper / 2;
        double term = integrate(f, lower, upper, 1e-16, 1e-12, den.kinks).value;
        acc += term;
        if (blk > 4 && std::abs(term) < 1e-17 * std::max(1.0, std::abs(acc))) break;
        upper = lower;
      }
    }
  }

  return acc / p;
}

}  // namespace

AdmissibilityReport levy_admissibility(const Kernel& k) {
  AdmissibilityReport rep;
  double p = k.beta() + k.dim() - 1;
  double omega = unit_sphere_area(k.dim());
  double near = near_origin_moment(k, p);
  rep.near_origin = std::isfinite(near) ? omega * near : kInf;
  rep.tail = tail_volume(k, 1.0);
  rep.admissible = std::isfinite(rep.near_origin) && std::isfinite(rep.tail);
  if (rep.admissible)
    rep.note = "finite near-origin moment and finite truncation volume";
  else if (!std::isfinite(rep.near_origin))
    rep.note = "near-origin moment diverges: kernel too singular for this boundary regularity";
  else
    rep.note = "truncation volume diverges";
  return rep;
}

bool nondegenerate_at_zero(const Kernel& k) {
  return k.measure().charges_every_neighborhood_of_zero();
}

double tail_volume(const Kernel& k, double R) {
  require(R >= 0, "tail_volume: R must be nonnegative");
  if (k.tail_volume_closed_) return k.tail_volume_closed_(R);
  // Generic route through the measure: integral over nu(dt) of the volume of
  // the spherical shell R < |z| < t.
  const TailMeasure& nu = k.measure();
  int d = k.dim();
  double VR = ball_volume(d, R);
  double acc = nu.sum_atoms(R, kInf, [&](double t) { return ball_volume(d, t) - VR; });
  if (nu.has_density()) {
    const DensityPart& den = nu.density();
    double lo = std::max(R, den.lo);
    if (den.hi > lo) {
      auto f = [&](double s) { return (ball_volume(d, s) - VR) * den.n(s); };
      if (std::isfinite(den.hi)) {
        acc += integrate(f, lo, den.hi, 1e-13, 1e-11, den.kinks).value;
      } else {
        double a = lo, width = std::max(1.0, lo);
        for (int blk = 0; blk < 400; ++blk) {
          double term = integrate(f, a, a + width, 1e-15, 1e-11, den.kinks).value;
          acc += term;
          if (blk > 2 && std::abs(term) < 1e-16 * std::max(1.0, std::abs(acc))) break;
          a += width;
          width *= 2;
        }
      }
    }
  }
  return acc;
}

}  // namespace nlmc
