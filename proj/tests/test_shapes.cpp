#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nlmc/kernels.hpp"
#include "nlmc/polygon.hpp"
#include "nlmc/rng.hpp"
#include "nlmc/shapes.hpp"
#include "oracles.hpp"

using namespace nlmc;

namespace {

std::vector<Vec> unit_square() { return {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}; }

double angle_between(const Vec& a, const Vec& b) {
  double c = std::clamp(dot(normalized(a), normalized(b)), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

TEST_SUITE("shapes") {

TEST_CASE("signed indicator takes the three prescribed values") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  CHECK(disk.signed_indicator({0.5, 0, 0}) == -1.0);
  CHECK(disk.signed_indicator({2.0, 0, 0}) == +1.0);
  CHECK(disk.signed_indicator({1.0, 0, 0}) == 0.0);
  CHECK(disk.classify({0, 0, 0}) == Region::inside);

  Shape sq = Shape::polygon(unit_square());
  CHECK(sq.signed_indicator({0.5, 0.5, 0}) == -1.0);
  CHECK(sq.signed_indicator({1.5, 0.5, 0}) == +1.0);
  CHECK(sq.signed_indicator({1.0, 0.5, 0}) == 0.0);

  Shape el = Shape::ellipse({0, 0, 0}, 2.0, 1.0);
  CHECK(el.signed_indicator({0, 0, 0}) == -1.0);
  CHECK(el.signed_indicator({2.5, 0, 0}) == +1.0);
  CHECK(el.signed_indicator({2.0, 0, 0}) == 0.0);
  CHECK(el.signed_indicator({0, 1.0, 0}) == 0.0);
}

TEST_CASE("areas and volumes") {
  CHECK(Shape::polygon(unit_square()).volume() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Shape::ellipse({0, 0, 0}, 0.2, 0.1).volume() == doctest::Approx(0.02 * kPi));
  // r(t) = 1 + 0.3 cos t integrates to pi (1 + 0.3^2 / 2)
  CHECK(Shape::limacon({0, 0, 0}, 1.0, 0.3).volume() == doctest::Approx(kPi * 1.045));
  CHECK(Shape::ball({0, 0, 0}, 1.0, 3).volume() == doctest::Approx(4 * kPi / 3));
  CHECK(Shape::ellipsoid({0, 0, 0}, 1.0, 0.7, 0.4).volume() ==
        doctest::Approx(4 * kPi / 3 * 0.28));
  CHECK(Shape::ball({0, 0, 0}, 2.0).diameter() == doctest::Approx(4.0));
  CHECK(Shape::polygon(unit_square()).diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("clockwise polygon input is reoriented") {
  Shape cw = Shape::polygon({{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}});
  CHECK(cw.volume() == doctest::Approx(1.0));
  CHECK(cw.signed_indicator({0.5, 0.5, 0}) == -1.0);
}

TEST_CASE("disk boundary sample starts on the positive axis") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  std::vector<BoundaryPoint> pts = disk.boundary_sample(4);
  REQUIRE(pts.size() == 4);
  Vec expect[] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  for (int k = 0; k < 4; ++k) {
    CAPTURE(k);
    CHECK(dist(pts[k].pos, expect[k]) <= 1e-14);
    CHECK(dist(pts[k].normal, expect[k]) <= 1e-14);      // outward normal = position
    CHECK(std::fabs(dot(pts[k].normal, pts[k].tangent)) <= 1e-14);
    CHECK(cross2(pts[k].normal, pts[k].tangent) > 0);    // counterclockwise frame
  }
}

TEST_CASE("square boundary sample sits at edge midpoints") {
  Shape sq = Shape::polygon(unit_square());
  std::vector<BoundaryPoint> pts = sq.boundary_sample(4);
  REQUIRE(pts.size() == 4);
  Vec expect[] = {{0.5, 0, 0}, {1, 0.5, 0}, {0.5, 1, 0}, {0, 0.5, 0}};
  Vec normals[] = {{0, -1, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}};
  for (int k = 0; k < 4; ++k) {
    CAPTURE(k);
    CHECK(dist(pts[k].pos, expect[k]) <= 1e-12);
    CHECK(dist(pts[k].normal, normals[k]) <= 1e-12);
  }
}

TEST_CASE("ellipse boundary frame at the vertex") {
  Shape el = Shape::ellipse({0.5, -0.25, 0}, 1.0, 0.5);
  BoundaryPoint bp = el.boundary_point_at(0.0);
  CHECK(dist(bp.pos, {1.5, -0.25, 0}) <= 1e-14);
  CHECK(dist(bp.normal, {1, 0, 0}) <= 1e-14);
  CHECK(dist(bp.tangent, {0, 1, 0}) <= 1e-14);
  BoundaryPoint top = el.boundary_point_at(kPi / 2);
  CHECK(dist(top.pos, {0.5, 0.25, 0}) <= 1e-14);
  CHECK(dist(top.normal, {0, 1, 0}) <= 1e-14);
}

TEST_CASE("curve frames agree with parametric finite differences") {
  Shape lim = Shape::limacon({0, 0, 0}, 1.0, 0.3);
  double h = 1e-5;
  for (double t : {0.3, 1.1, 2.0, 2.9, 3.7, 4.6, 5.5}) {
    CAPTURE(t);
    BoundaryPoint bp = lim.boundary_point_at(t);
    Vec fd = normalized(lim.boundary_point_at(t + h).pos - lim.boundary_point_at(t - h).pos);
    CHECK(angle_between(bp.tangent, fd) <= 1e-6);
    CHECK(std::fabs(dot(bp.normal, bp.tangent)) <= 1e-12);
    double step = 1e-4 * lim.diameter();
    CHECK(lim.classify(bp.pos + step * bp.normal) == Region::outside);
    CHECK(lim.classify(bp.pos - step * bp.normal) == Region::inside);
  }
}

TEST_CASE("boundary samples land on the boundary band") {
  for (const Shape& s : {Shape::ellipse({0.3, 0.1, 0}, 1.0, 0.5, 0.4),
                         Shape::limacon({0, 0, 0}, 1.0, 0.25),
                         Shape::fourier_curve({0, 0, 0}, 1.0, {0.1, 0.05}, {0.0, 0.08})}) {
    CAPTURE(s.describe());
    for (const BoundaryPoint& bp : s.boundary_sample(64)) {
      CHECK(s.boundary_distance(bp.pos) <= 1e-6 * s.diameter());
      CHECK(std::fabs(norm(bp.normal) - 1) <= 1e-12);
      CHECK(std::fabs(norm(bp.tangent) - 1) <= 1e-12);
    }
  }
}

TEST_CASE("reflection mirrors the set exactly") {
  Vec e = normalized({1.0, 0.4, 0});
  double lambda = 0.37;
  Rng rng(404);
  for (const Shape& s : {Shape::ball({1.0, 2.0, 0}, 0.5), Shape::ellipse({0.2, -0.1, 0}, 1.0, 0.6, 0.3),
                         Shape::limacon({0.1, 0.0, 0}, 1.0, 0.3), Shape::polygon(unit_square())}) {
    CAPTURE(s.describe());
    Shape m = s.reflected(e, lambda);
    CHECK(m.volume() == doctest::Approx(s.volume()).epsilon(1e-12));
    CHECK(m.diameter() == doctest::Approx(s.diameter()).epsilon(1e-12));
    for (int i = 0; i < 200; ++i) {
      Vec x{rng.uniform(-2, 3), rng.uniform(-2, 3), 0};
      CHECK(m.classify(reflect_point(x, e, lambda)) == s.classify(x));
    }
  }
}

TEST_CASE("reflecting twice is the identity") {
  Vec e = normalized({0.3, -1.0, 0});
  Shape lim = Shape::limacon({0.2, 0.1, 0}, 1.0, 0.3);
  Shape twice = lim.reflected(e, 0.2).reflected(e, 0.2);
  Rng rng(405);
  for (int i = 0; i < 300; ++i) {
    Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    CHECK(twice.classify(x) == lim.classify(x));
  }
}

TEST_CASE("limacon is symmetric about its axis") {
  Shape lim = Shape::limacon({0, 0, 0}, 1.0, 0.3);
  Shape m = lim.reflected({0, 1, 0}, 0.0);
  Rng rng(406);
  for (int i = 0; i < 300; ++i) {
    Vec x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), 0};
    if (lim.classify(x) == Region::boundary) continue;  // band edges may flip
    CHECK(m.classify(x) == lim.classify(x));
  }
}

TEST_CASE("rigid motions preserve membership") {
  Shape el = Shape::ellipse({0.2, -0.1, 0}, 1.0, 0.6, 0.3);
  Mat3 rot = Mat3::rotation2(0.77);
  Vec shift{0.3, -1.1, 0};
  Shape moved = el.rotated(rot).translated(shift);
  CHECK(moved.volume() == doctest::Approx(el.volume()).epsilon(1e-12));
  Rng rng(407);
  for (int i = 0; i < 300; ++i) {
    Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    CHECK(moved.classify(rot.apply(x) + shift) == el.classify(x));
  }
}

TEST_CASE("cap volumes") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  double lam = 0.3;
  double exact = std::acos(lam) - lam * std::sqrt(1 - lam * lam);
  CHECK(disk.cap_volume({1, 0, 0}, lam) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(disk.cap_volume({1, 0, 0}, -2.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(disk.cap_volume({1, 0, 0}, 2.0) == 0.0);

  // Affine scaling of the unit-disk cap: area = a b * cap(lambda / a).
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5);
  double cap = std::acos(0.5) - 0.5 * std::sqrt(0.75);
  CHECK(el.cap_volume({1, 0, 0}, 0.5) == doctest::Approx(0.5 * cap).epsilon(1e-6));

  Shape sq = Shape::polygon(unit_square());
  CHECK(sq.cap_volume({1, 0, 0}, 0.25) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sq.cap_volume({0, 1, 0}, 0.9) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("support function against dense boundary sampling") {
  Rng rng(408);
  for (const Shape& s : {Shape::ball({0.3, -0.2, 0}, 0.8), Shape::ellipse({0.1, 0.2, 0}, 1.0, 0.5, 0.6),
                         Shape::limacon({0, 0, 0}, 1.0, 0.3), Shape::polygon(unit_square())}) {
    CAPTURE(s.describe());
    std::vector<BoundaryPoint> pts = s.boundary_sample(4096);
    for (int i = 0; i < 12; ++i) {
      double t = rng.uniform(0, 2 * kPi);
      Vec e{std::cos(t), std::sin(t), 0};
      double sampled = -kInf;
      for (const BoundaryPoint& bp : pts) sampled = std::max(sampled, dot(bp.pos, e));
      double h = s.directional_max(e);
      CHECK(h >= sampled - 1e-9 * s.diameter());
      // half-offset polygon stations can miss a corner by half a spacing
      CHECK(h <= sampled + 1e-3 * s.diameter());
    }
  }
  // Closed form for the rotated ellipse support function.
  Shape el = Shape::ellipse({0.4, -0.3, 0}, 1.2, 0.5, 0.7);
  Vec u1{std::cos(0.7), std::sin(0.7), 0}, u2{-std::sin(0.7), std::cos(0.7), 0};
  Rng rng2(409);
  for (int i = 0; i < 20; ++i) {
    double t = rng2.uniform(0, 2 * kPi);
    Vec e{std::cos(t), std::sin(t), 0};
    double expect = dot(Vec{0.4, -0.3, 0}, e) + std::hypot(1.2 * dot(e, u1), 0.5 * dot(e, u2));
    CHECK(el.directional_max(e) == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("bounding ball contains the boundary") {
  for (const Shape& s : {Shape::ellipse({0.3, 0.1, 0}, 1.0, 0.5, 0.4),
                         Shape::limacon({-0.2, 0.5, 0}, 1.0, 0.3),
                         Shape::ball({1, 1, 0}, 0.7), Shape::polygon(unit_square())}) {
    CAPTURE(s.describe());
    Vec c = s.bounding_center();
    double r = s.bounding_radius();
    for (const BoundaryPoint& bp : s.boundary_sample(512))
      CHECK(dist(bp.pos, c) <= r + 1e-12);
  }
}

TEST_CASE("farthest distance") {
  Shape disk = Shape::ball({1, 0, 0}, 0.5);
  CHECK(disk.farthest_distance({3, 0, 0}) == doctest::Approx(2.5).epsilon(1e-14));
  Shape sq = Shape::polygon(unit_square());
  CHECK(sq.farthest_distance({2, 0.5, 0}) == doctest::Approx(std::hypot(2.0, 0.5)).epsilon(1e-12));
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5);
  double far = el.farthest_distance({2, 0, 0});
  double sampled = 0;
  for (const BoundaryPoint& bp : el.boundary_sample(2048))
    sampled = std::max(sampled, dist(bp.pos, {2, 0, 0}));
  CHECK(far >= sampled - 1e-12);
  CHECK(far <= sampled + 1e-3);
}

TEST_CASE("boundary distance") {
  Shape disk = Shape::ball({0, 0, 0}, 1.0);
  CHECK(disk.boundary_distance({0.25, 0, 0}) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(disk.boundary_distance({2.0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  Shape sq = Shape::polygon(unit_square());
  CHECK(sq.boundary_distance({0.5, 0.5, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.boundary_distance({2.0, 0.5, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  Shape el = Shape::ellipse({0, 0, 0}, 1.0, 0.5);
  double bd = el.boundary_distance({1.1, 0, 0});
  CHECK(bd == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("polygon intersection area") {
  std::vector<Vec> a = unit_square();
  std::vector<Vec> b = unit_square();
  CHECK(polygon_intersection_area(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  for (Vec& v : b) v += Vec{0.5, 0.5, 0};
  CHECK(polygon_intersection_area(a, b) == doctest::Approx(0.25).epsilon(1e-12));
  for (Vec& v : b) v += Vec{2.0, 0, 0};
  CHECK(polygon_intersection_area(a, b) == doctest::Approx(0.0));
  std::vector<Vec> tri = {{0.1, 0.1, 0}, {0.9, 0.1, 0}, {0.5, 0.9, 0}};
  CHECK(polygon_intersection_area(a, tri) == doctest::Approx(shoelace_area(tri)).epsilon(1e-12));
}

TEST_CASE("three dimensional membership") {
  Shape ball = Shape::ball({0, 0, 0}, 1.0, 3);
  CHECK(ball.signed_indicator({0, 0, 0.5}) == -1.0);
  CHECK(ball.signed_indicator({0, 0, 1.5}) == +1.0);
  CHECK(ball.signed_indicator({0, 0, 1.0}) == 0.0);

  Shape ell = Shape::ellipsoid({0, 0, 0}, 1.0, 0.7, 0.4);
  CHECK(ell.classify({0.99, 0, 0}) == Region::inside);
  CHECK(ell.classify({0, 0, 0.41}) == Region::outside);
  CHECK(ell.classify({0, 0.7, 0}) == Region::boundary);

  Shape ps = Shape::perturbed_sphere({0, 0, 0}, 1.0, 0.0, 2, 1);
  CHECK(ps.volume() == doctest::Approx(4 * kPi / 3).epsilon(1e-9));
  CHECK(ps.classify({0.5, 0, 0}) == Region::inside);
  CHECK(ps.classify({1.5, 0, 0}) == Region::outside);
}

TEST_CASE("shape parameter validation") {
  CHECK_THROWS_AS(Shape::ball({0, 0, 0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::ellipse({0, 0, 0}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::polygon({{0, 0, 0}, {1, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Shape::limacon({0, 0, 0}, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(Shape::ellipsoid({0, 0, 0}, 1.0, -0.1, 0.4), std::invalid_argument);
}

}  // TEST_SUITE
