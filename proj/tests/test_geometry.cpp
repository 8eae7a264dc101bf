#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgvem/geometry.hpp"

using namespace sgvem;

namespace {

const std::vector<Point2> unit_square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const std::vector<Point2> right_triangle = {{0, 0}, {1, 0}, {0, 1}};
// L-shape: three unit squares, reflex corner at (1,1).
const std::vector<Point2> l_hexagon = {{0, 0}, {2, 0}, {2, 1},
                                       {1, 1}, {1, 2}, {0, 2}};

}  // namespace

TEST_CASE("signed_area_orientation") {
  CHECK(polygon_signed_area(unit_square) == doctest::Approx(1.0));
  CHECK(polygon_signed_area(right_triangle) == doctest::Approx(0.5));
  CHECK(polygon_signed_area(l_hexagon) == doctest::Approx(3.0));

  std::vector<Point2> cw(unit_square.rbegin(), unit_square.rend());
  CHECK(polygon_signed_area(cw) == doctest::Approx(-1.0));
}

TEST_CASE("centroid") {
  Point2 c = polygon_centroid(unit_square, 1.0);
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));

  c = polygon_centroid(right_triangle, 0.5);
  CHECK(c.x == doctest::Approx(1.0 / 3.0));
  CHECK(c.y == doctest::Approx(1.0 / 3.0));

  // Sum of the three unit squares' centroids weighted by area.
  c = polygon_centroid(l_hexagon, 3.0);
  CHECK(c.x == doctest::Approx(2.5 / 3.0));
  CHECK(c.y == doctest::Approx(2.5 / 3.0));
}

TEST_CASE("diameter_is_max_pairwise_distance") {
  CHECK(polygon_diameter(unit_square) == doctest::Approx(std::sqrt(2.0)));
  CHECK(polygon_diameter(right_triangle) == doctest::Approx(std::sqrt(2.0)));
  CHECK(polygon_diameter(l_hexagon) == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("rect_helpers") {
  Rect r{-1.0, 3.0, 0.0, 2.0};
  CHECK(r.width() == doctest::Approx(4.0));
  CHECK(r.height() == doctest::Approx(2.0));
  CHECK(r.area() == doctest::Approx(8.0));
  CHECK(r.scale() == doctest::Approx(4.0));
  CHECK(!r.degenerate());
  CHECK(Rect{0, 0, 0, 1}.degenerate());

  const std::vector<Point2> corners = r.corners();
  REQUIRE(corners.size() == 4);
  CHECK(polygon_signed_area(corners) == doctest::Approx(8.0));
  CHECK(corners[0].x == doctest::Approx(-1.0));
  CHECK(corners[0].y == doctest::Approx(0.0));

  CHECK(r.contains({0.0, 1.0}));
  CHECK(!r.contains({4.0, 1.0}));
}

TEST_CASE("clip_halfplane") {
  const double tol = 1e-12;

  SUBCASE("keeps the inner half of a square") {
    // x <= 0.5
    auto clipped = clip_halfplane(unit_square, {1.0, 0.0}, 0.5, tol);
    CHECK(polygon_signed_area(clipped) == doctest::Approx(0.5));
    for (Point2 p : clipped) CHECK(p.x <= 0.5 + tol);
  }

  SUBCASE("polygon fully inside is unchanged") {
    auto clipped = clip_halfplane(unit_square, {1.0, 0.0}, 2.0, tol);
    CHECK(clipped.size() == 4);
    CHECK(polygon_signed_area(clipped) == doctest::Approx(1.0));
  }

  SUBCASE("polygon fully outside vanishes") {
    auto clipped = clip_halfplane(unit_square, {1.0, 0.0}, -1.0, tol);
    CHECK(clipped.empty());
  }

  SUBCASE("diagonal cut of the square") {
    // x + y <= 1 keeps the lower triangle.
    const double s = 1.0 / std::sqrt(2.0);
    auto clipped = clip_halfplane(unit_square, {s, s}, s, tol);
    CHECK(polygon_signed_area(clipped) == doctest::Approx(0.5));
  }
}

TEST_CASE("polygon_kernel") {
  const double tol = 1e-12;

  SUBCASE("convex polygon is its own kernel") {
    auto kernel = polygon_kernel(unit_square, tol);
    CHECK(polygon_signed_area(kernel) == doctest::Approx(1.0));
  }

  SUBCASE("l_shape kernel is the corner square") {
    // Half-planes y <= 1 and x <= 1 from the reflex corner cut it to [0,1]^2.
    auto kernel = polygon_kernel(l_hexagon, tol);
    CHECK(polygon_signed_area(kernel) == doctest::Approx(1.0));
    for (Point2 p : kernel) {
      CHECK(p.x <= 1.0 + 1e-9);
      CHECK(p.y <= 1.0 + 1e-9);
    }
  }

  SUBCASE("u_shape has empty kernel") {
    const std::vector<Point2> u_shape = {{0, 0}, {3, 0}, {3, 3}, {2, 3},
                                         {2, 1}, {1, 1}, {1, 3}, {0, 3}};
    auto kernel = polygon_kernel(u_shape, tol);
    CHECK(kernel.empty());
  }
}

TEST_CASE("segments_intersect") {
  CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  CHECK(!segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  // Shared endpoint counts.
  CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 5}));
  // Collinear overlap.
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  CHECK(!segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST_CASE("uniform_rng_determinism_and_range") {
  UniformRng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff_seed = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a.next();
    const double vb = b.next();
    const double vc = c.next();
    all_equal = all_equal && (va == vb);
    any_diff_seed = any_diff_seed || (va != vc);
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);

  UniformRng r(7);
  for (int i = 0; i < 100; ++i) {
    const double v = r.range(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}
