#pragma once

#include <array>
#include <span>
#include <vector>

#include "sgvem/geometry.hpp"

namespace sgvem {

struct QuadPoint {
  Point2 p;
  double w = 0.0;
};

/// Symmetric Gauss rule on the triangle (a, b, c), exact for polynomials of
/// total degree up to `degree` (supported up to 5). Weights sum to the
/// triangle area.
std::vector<QuadPoint> triangle_quadrature(Point2 a, Point2 b, Point2 c,
                                           int degree);

/// Splits a simple counterclockwise polygon into positively oriented
/// triangles. Fans from `fan_point` when all fan triangles are positive
/// (i.e. the point lies in the kernel); otherwise falls back to ear
/// clipping.
std::vector<std::array<Point2, 3>> triangulate_polygon(
    std::span<const Point2> poly, Point2 fan_point);

/// Quadrature over a simple counterclockwise polygon, exact for polynomials
/// up to `degree`. Weights sum to the polygon area.
std::vector<QuadPoint> polygon_quadrature(std::span<const Point2> poly,
                                          Point2 fan_point, int degree);

/// Same, fanning from the polygon centroid.
std::vector<QuadPoint> polygon_quadrature(std::span<const Point2> poly,
                                          int degree);

}  // namespace sgvem
