#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace nlmc {

inline constexpr double kPi = std::numbers::pi;

// Point/vector in R^2 or R^3.  Planar data keeps z = 0, so inner products,
// norms and reflections can be written once for both dimensions.
struct Vec {
  double x = 0, y = 0, z = 0;

  Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec& operator*=(double t) { x *= t; y *= t; z *= t; return *this; }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double t, Vec a) { return a *= t; }
inline Vec operator*(Vec a, double t) { return a *= t; }
inline Vec operator-(const Vec& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  return n > 0 ? (1.0 / n) * a : Vec{};
}

// z-component of the planar cross product.
inline double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }

inline Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Counterclockwise rotation by pi/2 in the plane.
inline Vec perp2(const Vec& a) { return {-a.y, a.x, 0}; }

// Reflection across the hyperplane {x . e = lambda}; e must be a unit vector.
inline Vec reflect_point(const Vec& p, const Vec& e, double lambda) {
  return p - (2.0 * (dot(p, e) - lambda)) * e;
}

// Small dense 3x3 matrix, row major.  2D rigid motions embed with the z row
// and column left as identity.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }

  static Mat3 rotation2(double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {{c, -s, 0, s, c, 0, 0, 0, 1}};
  }

  // Householder reflection I - 2 e e^T (e unit).
  static Mat3 householder(const Vec& e) {
    Mat3 h;
    const double v[3] = {e.x, e.y, e.z};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h.m[3 * i + j] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j];
    return h;
  }

  Vec apply(const Vec& p) const {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z,
            m[3] * p.x + m[4] * p.y + m[5] * p.z,
            m[6] * p.x + m[7] * p.y + m[8] * p.z};
  }

  Mat3 times(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
        r.m[3 * i + j] = s;
      }
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[3 * i + j] = m[3 * j + i];
    return r;
  }
};

// Surface measure of the unit sphere S^{d-1}.
inline double unit_sphere_area(int dim) { return dim == 2 ? 2.0 * kPi : 4.0 * kPi; }

// Lebesgue measure of a ball of radius r in R^d.
inline double ball_volume(int dim, double r) {
  if (r <= 0) return 0;
  return dim == 2 ? kPi * r * r : (4.0 / 3.0) * kPi * r * r * r;
}

}  // namespace nlmc
