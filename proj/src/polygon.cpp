#include "nlmc/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlmc {

double shoelace_area(const std::vector<Vec>& v) {
  double acc = 0;
  size_t n = v.size();
  for (size_t i = 0; i < n; ++i) acc += cross2(v[i], v[(i + 1) % n]);
  return 0.5 * acc;
}

double polygon_perimeter(const std::vector<Vec>& v) {
  double acc = 0;
  size_t n = v.size();
  for (size_t i = 0; i < n; ++i) acc += dist(v[i], v[(i + 1) % n]);
  return acc;
}

std::vector<Vec> clip_halfplane(const std::vector<Vec>& v, const Vec& e, double lambda) {
  std::vector<Vec> out;
  size_t n = v.size();
  if (n == 0) return out;
  out.reserve(n + 4);
  double prev_s = dot(v[n - 1], e) - lambda;
  for (size_t i = 0; i < n; ++i) {
    double s = dot(v[i], e) - lambda;
    const Vec& prev = v[(i + n - 1) % n];
    if (s > 0) {
      if (prev_s < 0) {
        double t = prev_s / (prev_s - s);
        out.push_back(prev + t * (v[i] - prev));
      }
      out.push_back(v[i]);
    } else {
      if (prev_s > 0) {
        double t = prev_s / (prev_s - s);
        out.push_back(prev + t * (v[i] - prev));
      }
      if (s == 0) out.push_back(v[i]);
    }
    prev_s = s;
  }
  return out;
}

double point_segment_distance(const Vec& q, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double len2 = norm2(ab);
  if (len2 == 0) return dist(q, a);
  double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
  return dist(q, a + t * ab);
}

double polygon_boundary_distance(const std::vector<Vec>& v, const Vec& q) {
  double best = std::numeric_limits<double>::infinity();
  size_t n = v.size();
  for (size_t i = 0; i < n; ++i)
    best = std::min(best, point_segment_distance(q, v[i], v[(i + 1) % n]));
  return best;
}

void PolygonIndex::build(std::vector<Vec> verts) {
  verts_ = std::move(verts);
  size_t n = verts_.size();
  x0_ = y0_ = std::numeric_limits<double>::infinity();
  x1_ = y1_ = -std::numeric_limits<double>::infinity();
  for (const Vec& p : verts_) {
    x0_ = std::min(x0_, p.x);
    x1_ = std::max(x1_, p.x);
    y0_ = std::min(y0_, p.y);
    y1_ = std::max(y1_, p.y);
  }
  nstrips_ = std::clamp<int>(int(n), 16, 1024);
  double height = y1_ - y0_;
  strip_h_ = height > 0 ? height / nstrips_ : 1.0;
  strips_.assign(nstrips_, {});
  for (size_t i = 0; i < n; ++i) {
    const Vec& a = verts_[i];
    const Vec& b = verts_[(i + 1) % n];
    double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
    int s0 = std::clamp(int((lo - y0_) / strip_h_), 0, nstrips_ - 1);
    int s1 = std::clamp(int((hi - y0_) / strip_h_), 0, nstrips_ - 1);
    for (int s = s0; s <= s1; ++s) strips_[s].push_back(int(i));
  }
}

bool PolygonIndex::contains(const Vec& q) const {
  if (q.x < x0_ || q.x > x1_ || q.y < y0_ || q.y > y1_) return false;
  int s = std::clamp(int((q.y - y0_) / strip_h_), 0, nstrips_ - 1);
  bool in = false;
  size_t n = verts_.size();
  for (int i : strips_[s]) {
    const Vec& a = verts_[i];
    const Vec& b = verts_[(size_t(i) + 1) % n];
    if ((a.y > q.y) != (b.y > q.y)) {
      double xint = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < xint) in = !in;
    }
  }
  return in;
}

double PolygonIndex::distance_within(const Vec& q, double r) const {
  double best = std::numeric_limits<double>::infinity();
  if (q.y + r < y0_ || q.y - r > y1_) return best;
  int s0 = std::clamp(int((q.y - r - y0_) / strip_h_), 0, nstrips_ - 1);
  int s1 = std::clamp(int((q.y + r - y0_) / strip_h_), 0, nstrips_ - 1);
  size_t n = verts_.size();
  for (int s = s0; s <= s1; ++s)
    for (int i : strips_[s]) {
      const Vec& a = verts_[i];
      const Vec& b = verts_[(size_t(i) + 1) % n];
      best = std::min(best, point_segment_distance(q, a, b));
    }
  return best;
}

namespace {

// Directed-fragment contribution to the Green's-theorem area integral.
double fragment_area(const Vec& p, const Vec& q) { return 0.5 * cross2(p, q); }

double clipped_boundary_area(const std::vector<Vec>& a, const PolygonIndex& b_index,
                             double tol, bool include_boundary) {
  const std::vector<Vec>& b = b_index.verts();
  size_t na = a.size(), nb = b.size();
  double bx0 = std::numeric_limits<double>::infinity(), bx1 = -bx0;
  double by0 = bx0, by1 = -bx0;
  for (const Vec& p : b) {
    bx0 = std::min(bx0, p.x);
    bx1 = std::max(bx1, p.x);
    by0 = std::min(by0, p.y);
    by1 = std::max(by1, p.y);
  }

  double acc = 0;
  std::vector<double> cuts;
  for (size_t i = 0; i < na; ++i) {
    const Vec& p = a[i];
    const Vec& q = a[(i + 1) % na];
    Vec r = q - p;

    cuts.clear();
    cuts.push_back(0);
    cuts.push_back(1);
    double elo_x = std::min(p.x, q.x), ehi_x = std::max(p.x, q.x);
    double elo_y = std::min(p.y, q.y), ehi_y = std::max(p.y, q.y);
    bool overlaps = !(ehi_x < bx0 || elo_x > bx1 || ehi_y < by0 || elo_y > by1);
    if (overlaps) {
      for (size_t k = 0; k < nb; ++k) {
        const Vec& u = b[k];
        const Vec& v = b[(k + 1) % nb];
        if (std::max(u.x, v.x) < elo_x || std::min(u.x, v.x) > ehi_x ||
            std::max(u.y, v.y) < elo_y || std::min(u.y, v.y) > ehi_y)
          continue;
        Vec w = v - u;
        double denom = cross2(r, w);
        if (denom == 0) continue;
        double t = cross2(u - p, w) / denom;
        double s = cross2(u - p, r) / denom;
        if (s >= 0 && s <= 1 && t > 0 && t < 1) cuts.push_back(t);
      }
      std::sort(cuts.begin(), cuts.end());
    }

    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      double t0 = cuts[c], t1 = cuts[c + 1];
      if (t1 - t0 < 1e-14) continue;
      Vec f0 = p + t0 * r, f1 = p + t1 * r;
      Vec mid = p + (0.5 * (t0 + t1)) * r;
      bool inside = b_index.contains(mid);
      if (!inside && include_boundary) inside = b_index.distance_within(mid, tol) <= tol;
      if (inside && !include_boundary && b_index.distance_within(mid, tol) <= tol) inside = false;
      if (inside) acc += fragment_area(f0, f1);
    }
  }
  return acc;
}

}  // namespace

double polygon_intersection_area(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) return 0;
  double scale = 0;
  for (const Vec& p : a) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
  for (const Vec& p : b) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
  double tol = 1e-12 * std::max(scale, 1.0);
  PolygonIndex ia(a), ib(b);
  return clipped_boundary_area(a, ib, tol, true) + clipped_boundary_area(b, ia, tol, false);
}

}  // namespace nlmc
