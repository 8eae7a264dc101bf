#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sgvem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

/// Axis-aligned rectangular domain.
struct Rect {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  /// Longest side, used to scale geometric tolerances.
  double scale() const { return width() > height() ? width() : height(); }
  bool degenerate() const { return !(xmax > xmin) || !(ymax > ymin); }
  /// Corner loop in counterclockwise order starting at (xmin, ymin).
  std::vector<Point2> corners() const;
  bool contains(Point2 p) const;
};

/// Shoelace area; positive for counterclockwise orientation.
double polygon_signed_area(std::span<const Point2> poly);

/// Area centroid. `signed_area` must be the matching shoelace value.
Point2 polygon_centroid(std::span<const Point2> poly, double signed_area);

/// Largest pairwise vertex distance.
double polygon_diameter(std::span<const Point2> poly);

/// Sutherland-Hodgman clip of a convex or simple polygon against the
/// half-plane dot(n, p) <= c. Points within `tol` of the line count as
/// inside; consecutive output points closer than `tol` are merged.
/// `n` should be unit length so `tol` acts as a distance.
std::vector<Point2> clip_halfplane(std::span<const Point2> poly, Point2 n,
                                   double c, double tol);

/// Kernel of a simple counterclockwise polygon: the intersection of the
/// inner half-planes of all edges. Empty means not star-shaped.
std::vector<Point2> polygon_kernel(std::span<const Point2> poly, double tol);

/// True if the closed segments [a,b] and [c,d] share any point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// Deterministic uniform doubles in [0, 1). The mantissa mapping is spelled
/// out so streams depend only on the mt19937_64 specification, not on
/// library distribution internals.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

  double next() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double range(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sgvem
