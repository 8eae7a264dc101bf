#include "sgvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgvem {

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double distance(Point2 a, Point2 b) { return norm(a - b); }

std::vector<Point2> Rect::corners() const {
  return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
}

bool Rect::contains(Point2 p) const {
  return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
}

double polygon_signed_area(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

Point2 polygon_centroid(std::span<const Point2> poly, double signed_area) {
  if (signed_area == 0.0)
    throw std::invalid_argument("polygon_centroid: zero area polygon");
  const std::size_t n = poly.size();
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const double w = cross(a, b);
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  const double s = 1.0 / (6.0 * signed_area);
  return {s * cx, s * cy};
}

double polygon_diameter(std::span<const Point2> poly) {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      best = std::max(best, distance(poly[i], poly[j]));
  return best;
}

std::vector<Point2> clip_halfplane(std::span<const Point2> poly, Point2 n,
                                   double c, double tol) {
  std::vector<Point2> out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 cur = poly[i];
    const Point2 nxt = poly[(i + 1) % m];
    const double dc = dot(n, cur) - c;
    const double dn = dot(n, nxt) - c;
    const bool in_cur = dc <= tol;
    const bool in_nxt = dn <= tol;
    if (in_cur) out.push_back(cur);
    if (in_cur != in_nxt) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  // Merge duplicates introduced by vertices sitting on the clip line.
  std::vector<Point2> clean;
  clean.reserve(out.size());
  for (const Point2& p : out) {
    if (clean.empty() || distance(clean.back(), p) > tol) clean.push_back(p);
  }
  while (clean.size() > 1 && distance(clean.front(), clean.back()) <= tol)
    clean.pop_back();
  if (clean.size() < 3) clean.clear();
  return clean;
}

std::vector<Point2> polygon_kernel(std::span<const Point2> poly, double tol) {
  std::vector<Point2> kernel(poly.begin(), poly.end());
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m && !kernel.empty(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % m];
    const Point2 d = b - a;
    const double len = norm(d);
    if (len <= 0.0) throw std::invalid_argument("polygon_kernel: zero-length edge");
    // Outward normal of a counterclockwise edge; keep the inner side.
    const Point2 nrm{d.y / len, -d.x / len};
    kernel = clip_halfplane(kernel, nrm, dot(nrm, a), tol);
  }
  return kernel;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  const double eps = 1e-14 * (norm(b - a) * norm(c - a) + 1e-300);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
         std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace sgvem
