#include "sgvem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sgvem {

namespace {

struct BaryPoint {
  double a, b, c, w;
};

void push_symmetric(std::vector<BaryPoint>& rule, double a, double w) {
  const double b = 0.5 * (1.0 - a);
  rule.push_back({a, b, b, w});
  rule.push_back({b, a, b, w});
  rule.push_back({b, b, a, w});
}

/// Barycentric rules with weights normalized to sum 1.
const std::vector<BaryPoint>& reference_rule(int degree) {
  static const std::vector<BaryPoint> deg2 = [] {
    std::vector<BaryPoint> r;
    push_symmetric(r, 2.0 / 3.0, 1.0 / 3.0);
    return r;
  }();
  static const std::vector<BaryPoint> deg4 = [] {
    std::vector<BaryPoint> r;
    push_symmetric(r, 1.0 - 2.0 * 0.445948490915965, 0.223381589678011);
    push_symmetric(r, 1.0 - 2.0 * 0.091576213509771, 0.109951743655322);
    return r;
  }();
  static const std::vector<BaryPoint> deg5 = [] {
    std::vector<BaryPoint> r;
    r.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
    push_symmetric(r, 1.0 - 2.0 * 0.470142064105115, 0.132394152788506);
    push_symmetric(r, 1.0 - 2.0 * 0.101286507323456, 0.125939180544827);
    return r;
  }();
  if (degree <= 2) return deg2;
  if (degree <= 4) return deg4;
  if (degree <= 5) return deg5;
  throw std::invalid_argument("reference_rule: degree above 5 not supported");
}

double tri_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

std::vector<QuadPoint> triangle_quadrature(Point2 a, Point2 b, Point2 c,
                                           int degree) {
  const double area = tri_area(a, b, c);
  if (!(area > 0.0))
    throw std::invalid_argument("triangle_quadrature: non-positive triangle");
  const auto& rule = reference_rule(degree);
  std::vector<QuadPoint> out;
  out.reserve(rule.size());
  for (const BaryPoint& q : rule)
    out.push_back({{q.a * a.x + q.b * b.x + q.c * c.x,
                    q.a * a.y + q.b * b.y + q.c * c.y},
                   q.w * area});
  return out;
}

std::vector<std::array<Point2, 3>> triangulate_polygon(
    std::span<const Point2> poly, Point2 fan_point) {
  const std::size_t n = poly.size();
  if (n < 3) throw std::invalid_argument("triangulate_polygon: fewer than 3 vertices");
  const double total = polygon_signed_area(poly);
  if (!(total > 0.0))
    throw std::invalid_argument("triangulate_polygon: polygon not counterclockwise");
  const double eps = 1e-14 * total;

  bool fan_ok = true;
  for (std::size_t i = 0; i < n && fan_ok; ++i)
    fan_ok = tri_area(fan_point, poly[i], poly[(i + 1) % n]) > eps;
  if (fan_ok) {
    std::vector<std::array<Point2, 3>> tris;
    tris.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      tris.push_back({fan_point, poly[i], poly[(i + 1) % n]});
    return tris;
  }

  // Ear clipping for cells whose fan point misses the kernel.
  std::vector<Point2> pts(poly.begin(), poly.end());
  std::vector<std::array<Point2, 3>> tris;
  tris.reserve(n - 2);
  while (pts.size() > 3) {
    const std::size_t m = pts.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m; ++i) {
      const Point2 prev = pts[(i + m - 1) % m];
      const Point2 cur = pts[i];
      const Point2 next = pts[(i + 1) % m];
      if (tri_area(prev, cur, next) <= eps) continue;
      bool contains_other = false;
      for (std::size_t j = 0; j < m && !contains_other; ++j) {
        if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
        const Point2 p = pts[j];
        contains_other = tri_area(prev, cur, p) >= -eps &&
                         tri_area(cur, next, p) >= -eps &&
                         tri_area(next, prev, p) >= -eps;
      }
      if (contains_other) continue;
      tris.push_back({prev, cur, next});
      pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw std::runtime_error("triangulate_polygon: no ear found (degenerate polygon)");
  }
  tris.push_back({pts[0], pts[1], pts[2]});
  return tris;
}

std::vector<QuadPoint> polygon_quadrature(std::span<const Point2> poly,
                                          Point2 fan_point, int degree) {
  const auto tris = triangulate_polygon(poly, fan_point);
  std::vector<QuadPoint> out;
  out.reserve(tris.size() * reference_rule(degree).size());
  for (const auto& t : tris) {
    const auto part = triangle_quadrature(t[0], t[1], t[2], degree);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<QuadPoint> polygon_quadrature(std::span<const Point2> poly,
                                          int degree) {
  const double area = polygon_signed_area(poly);
  return polygon_quadrature(poly, polygon_centroid(poly, area), degree);
}

}  // namespace sgvem
