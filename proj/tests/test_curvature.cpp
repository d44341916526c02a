#include <cmath>
#include <optional>

#include "doctest.h"
#include "nlmc/curvature.hpp"
#include "oracles.hpp"

using namespace nlmc;

namespace {

// Independent value for the disk: H = total - 2 integral over E of j(|y-x|),
// with the set integral done in polar coordinates about the disk center
// (a decomposition the library never uses).
double disk_exponential_oracle(double lambda, const Vec& x) {
  auto inner = [&](double rho) {
    auto f = [&](double th) {
      Vec y{rho * std::cos(th), rho * std::sin(th), 0};
      return std::exp(-lambda * dist(y, x)) * rho;
    };
    return oracle::simpson(f, 0, 2 * kPi, 2400);
  };
  double I = oracle::simpson(inner, 0, 1, 1200);
  return oracle::total_j_exponential(lambda, 0) - 2 * I;  // total = 2 pi / lambda^2 at 0
}

// Truncated kernel on a disk reduces H_eps to two lens areas.
double disk_truncated_h_eps(double c, double r0, double R, double d, double eps) {
  double inner = oracle::lens_area(R, r0, d) - oracle::lens_area(R, eps, d);
  return c * kPi * (r0 * r0 - eps * eps) - 2 * c * inner;
}

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("disk with exponential kernel against a polar quadrature oracle") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  Kernel k = Kernel::exponential(1.0, 1.5);
  EvalOptions opts;
  opts.tol = 1e-7;
  CurvatureResult r = nonlocal_mean_curvature(disk, k, {1, 0, 0}, opts);
  double expect = disk_exponential_oracle(1.0, {1, 0, 0});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(expect).epsilon(2e-6));
  // the reported error bound is honest against the oracle
  CHECK(std::fabs(r.value - expect) <= std::max(5 * r.error_estimate, 1e-7));
}

TEST_CASE("truncated curvature against the lens closed form") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  Kernel k = Kernel::truncated_constant(1.0, 0.5, 1.0);
  for (double d : {0.97, 0.85}) {
    for (double eps : {0.1, 0.22}) {
      CAPTURE(d);
      CAPTURE(eps);
      double got = h_epsilon(disk, k, {d, 0, 0}, eps);
      double expect = disk_truncated_h_eps(1.0, 0.5, 1.0, d, eps);
      CHECK(got == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("gradient of the truncated curvature, including the cutoff boundary term") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  Kernel k = Kernel::truncated_constant(1.0, 0.5, 1.0);
  double d = 0.97, eps = 0.1, h = 1e-6;
  Vec g = grad_h_epsilon(disk, k, {d, 0, 0}, eps);
  double fd = (disk_truncated_h_eps(1.0, 0.5, 1.0, d + h, eps) -
               disk_truncated_h_eps(1.0, 0.5, 1.0, d - h, eps)) / (2 * h);
  CHECK(g.x == doctest::Approx(fd).epsilon(1e-6));
  CHECK(std::fabs(g.y) <= 1e-10);
}

TEST_CASE("gradient matches finite differences of h_epsilon") {
  // dense polygonization: the FD step must out-resolve the arc-clipping proxy
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5, 0.0, 1 << 16);
  Kernel k = Kernel::exponential(1.0, 1.5);
  double h = 1e-5, qtol = 1e-14;
  for (double eps : {0.1, 0.35}) {
    CAPTURE(eps);
    Vec x = el.boundary_point_at(0.9).pos;
    Vec g = grad_h_epsilon(el, k, x, eps, qtol);
    double fx = (h_epsilon(el, k, {x.x + h, x.y, 0}, eps, qtol) -
                 h_epsilon(el, k, {x.x - h, x.y, 0}, eps, qtol)) / (2 * h);
    double fy = (h_epsilon(el, k, {x.x, x.y + h, 0}, eps, qtol) -
                 h_epsilon(el, k, {x.x, x.y - h, 0}, eps, qtol)) / (2 * h);
    CHECK(g.x == doctest::Approx(fx).epsilon(1e-4));
    CHECK(g.y == doctest::Approx(fy).epsilon(1e-4));
  }
}

TEST_CASE("small sets under a flat kernel have a closed-form curvature") {
  Kernel flat = Kernel::truncated_constant(1.0, 1.0, 1.0);
  Shape ball = Shape::ball({0, 0, 0}, 0.2);
  Shape el = Shape::ellipse({0, 0, 0}, 0.2, 0.1);

  std::optional<double> hb = closed_form_small_set(ball, flat);
  REQUIRE(hb.has_value());
  CHECK(*hb == doctest::Approx(0.92 * kPi).epsilon(1e-14));

  std::optional<double> he = closed_form_small_set(el, flat);
  REQUIRE(he.has_value());
  CHECK(*he == doctest::Approx(0.96 * kPi).epsilon(1e-14));

  // no closed form once the kernel is active at small scales or the set too big
  CHECK_FALSE(closed_form_small_set(ball, Kernel::exponential(1.0, 1.0)).has_value());
  CHECK_FALSE(closed_form_small_set(ball, Kernel::step_geometric(1.0, 0.5, 1.0, 0.5, 1.0)).has_value());
  CHECK_FALSE(closed_form_small_set(ball, Kernel::truncated_constant(1.0, 0.3, 1.0)).has_value());

  // flat-start table kernel: j = 2 on (0, 0.5)
  Kernel tab = Kernel::table({0.5, 5.0}, {2.0, 0.5}, 1.0);
  std::optional<double> ht = closed_form_small_set(ball, tab);
  REQUIRE(ht.has_value());
  CHECK(*ht == doctest::Approx(2 * (kPi * 0.25 - 2 * ball.volume()) + tail_volume(tab, 0.5)));
}

TEST_CASE("the flat-kernel value holds at interior points too") {
  Shape el = Shape::ellipse({0, 0, 0}, 0.2, 0.1);
  Kernel flat = Kernel::truncated_constant(1.0, 1.0, 1.0);
  EvalOptions opts;
  opts.tol = 1e-7;
  CurvatureResult r = nonlocal_mean_curvature(el, flat, {0.05, 0.02, 0}, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.96 * kPi).epsilon(1e-6));
}

TEST_CASE("tangential derivative vanishes on the disk") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  Kernel k = Kernel::exponential(1.0, 1.5);
  CurvatureResult r = tangential_derivative(disk, k, {1, 0, 0}, {0, 1, 0});
  CHECK(r.converged);
  CHECK(std::fabs(r.value) <= 1e-8);
}

TEST_CASE("tangential derivative matches the curvature slope along the boundary") {
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5);
  Kernel k = Kernel::exponential(1.0, 1.5);
  EvalOptions opts;
  opts.tol = 1e-8;
  double t = 0.934188;  // generic station away from the vertices
  BoundaryPoint bp = el.boundary_point_at(t);
  CurvatureResult formula = tangential_derivative(el, k, bp.pos, bp.tangent, opts);

  double h = 0.01;
  CurvatureResult hp = nonlocal_mean_curvature(el, k, el.boundary_point_at(t + h).pos, opts);
  CurvatureResult hm = nonlocal_mean_curvature(el, k, el.boundary_point_at(t - h).pos, opts);
  double speed = std::hypot(-std::sin(t), 0.5 * std::cos(t));  // |gamma'(t)|
  double fd = (hp.value - hm.value) / (2 * h) / speed;
  CHECK(formula.converged);
  CHECK(formula.value == doctest::Approx(fd).epsilon(5e-3));
}

TEST_CASE("three dimensional ball with exponential kernel") {
  Shape ball = Shape::ball({0, 0, 0}, 1.0, 3);
  Kernel k = Kernel::exponential(1.0, 1.5, 3);
  CurvatureResult r = nonlocal_mean_curvature(ball, k, {1, 0, 0});
  // Shell decomposition about the boundary point gives 12 pi (1 - 3 e^-2).
  double expect = 12 * kPi * (1 - 3 * std::exp(-2.0));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("profiles are deterministic and internally consistent") {
  Shape el = Shape::ellipse({0, 0, 0}, 0.2, 0.1);
  Kernel flat = Kernel::truncated_constant(1.0, 1.0, 1.0);
  CurvatureProfile a = curvature_profile(el, flat, 8);
  CurvatureProfile b = curvature_profile(el, flat, 8);
  REQUIRE(a.entries.size() == 8);
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].curvature.value == b.entries[i].curvature.value);
    CHECK(a.entries[i].curvature.error_estimate == b.entries[i].curvature.error_estimate);
  }
  CHECK(a.report.min <= a.report.mean);
  CHECK(a.report.mean <= a.report.max);
  CHECK(a.report.spread == doctest::Approx(a.report.max - a.report.min));
  CHECK(a.report.constant_within_tol);
  CHECK(a.report.mean == doctest::Approx(0.96 * kPi).epsilon(1e-6));
}

TEST_CASE("curvature is invariant under rigid motions") {
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5);
  Kernel k = Kernel::exponential(1.0, 1.5);
  Mat3 rot = Mat3::rotation2(0.61);
  Vec shift{0.4, -0.9, 0};
  Shape moved = el.rotated(rot).translated(shift);

  Vec x = el.boundary_point_at(0.7).pos;
  Vec xm = rot.apply(x) + shift;
  CurvatureResult a = nonlocal_mean_curvature(el, k, x);
  CurvatureResult b = nonlocal_mean_curvature(moved, k, xm);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::fabs(a.value - b.value) <=
        3 * (a.error_estimate + b.error_estimate) + 1e-9);
}

TEST_CASE("diverging configurations are reported, not silently averaged") {
  // With alpha >= 1 the near-boundary cancellation is too weak even for a
  // smooth set: truncated values blow up as the cutoff shrinks, and the
  // extrapolation must refuse to claim convergence.
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  Kernel k = Kernel::fractional(2, 1.5, 1.0);
  EvalOptions opts;
  opts.tol = 1e-10;
  opts.max_levels = 10;
  CurvatureResult r = nonlocal_mean_curvature(disk, k, {1, 0, 0}, opts);
  CHECK_FALSE(r.converged);
}

}  // TEST_SUITE
