#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "sgvem/mesh.hpp"

using namespace sgvem;

namespace {

double total_area(const PolygonalMesh& mesh) {
  double a = 0.0;
  for (const PolygonCell& c : mesh.cells) a += c.area;
  return a;
}

// Any interior angle turning clockwise marks a reflex vertex.
bool has_reflex_vertex(const PolygonalMesh& mesh, const PolygonCell& cell) {
  const int n = static_cast<int>(cell.vertex_ids.size());
  for (int i = 0; i < n; ++i) {
    const Point2 a = mesh.vertices[cell.vertex_ids[(i + n - 1) % n]];
    const Point2 b = mesh.vertices[cell.vertex_ids[i]];
    const Point2 c = mesh.vertices[cell.vertex_ids[(i + 1) % n]];
    if (cross(b - a, c - b) < 0.0) return true;
  }
  return false;
}

bool on_rect_boundary(Point2 p, const Rect& r, double tol) {
  return std::abs(p.x - r.xmin) < tol || std::abs(p.x - r.xmax) < tol ||
         std::abs(p.y - r.ymin) < tol || std::abs(p.y - r.ymax) < tol;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("cell_geometry_reference_polygons") {
  const std::vector<Point2> verts = {{0, 0}, {1, 0}, {1, 1}, {0, 1},
                                     {2, 0}, {2, 1}, {1, 2}, {0, 2}};

  SUBCASE("unit square") {
    const CellGeometry g = cell_geometry(verts, {0, 1, 2, 3});
    CHECK(g.area == doctest::Approx(1.0));
    CHECK(g.centroid.x == doctest::Approx(0.5));
    CHECK(g.centroid.y == doctest::Approx(0.5));
    CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)));
  }

  SUBCASE("right triangle") {
    const CellGeometry g = cell_geometry(verts, {0, 1, 3});
    CHECK(g.area == doctest::Approx(0.5));
    CHECK(g.centroid.x == doctest::Approx(1.0 / 3.0));
    CHECK(g.centroid.y == doctest::Approx(1.0 / 3.0));
    CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)));
  }

  SUBCASE("l_shaped hexagon") {
    const CellGeometry g = cell_geometry(verts, {0, 4, 5, 2, 6, 7});
    CHECK(g.area == doctest::Approx(3.0));
    CHECK(g.diameter == doctest::Approx(2.0 * std::sqrt(2.0)));
  }

  SUBCASE("clockwise polygon rejected") {
    CHECK_THROWS(cell_geometry(verts, {0, 3, 2, 1}));
  }

  SUBCASE("degenerate polygon rejected") {
    CHECK_THROWS(cell_geometry(verts, {0, 1}));
  }
}

TEST_CASE("voronoi_of_symmetric_seeds_is_square_grid") {
  const std::vector<Point2> seeds = {{0.25, 0.25}, {0.75, 0.25},
                                     {0.25, 0.75}, {0.75, 0.75}};
  const PolygonalMesh mesh = voronoi_from_seeds(Rect{}, seeds, 0);
  REQUIRE(mesh.n_cells() == 4);
  for (const PolygonCell& c : mesh.cells) {
    CHECK(c.area == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(c.vertex_ids.size() == 4);
  }
  CHECK(total_area(mesh) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("voronoi_generator_invariants") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 100, 20, 42);
  validate_mesh(mesh);
  CHECK(mesh.n_cells() == 100);
  CHECK(total_area(mesh) == doctest::Approx(1.0).epsilon(1e-10));

  for (const PolygonCell& c : mesh.cells) {
    const std::vector<Point2> poly = cell_polygon(mesh, c);
    CHECK(polygon_signed_area(poly) > 0.0);
    CHECK(!has_reflex_vertex(mesh, c));  // Voronoi cells are convex
  }

  for (int v = 0; v < mesh.n_vertices(); ++v) {
    CHECK(static_cast<bool>(mesh.boundary_flags[v]) ==
          on_rect_boundary(mesh.vertices[v], mesh.domain,
                           1e-9 * mesh.domain.scale()));
  }
}

TEST_CASE("lloyd_smoothing_improves_edge_ratio") {
  const MeshQualityReport rough =
      check_regularity(generate_voronoi(Rect{}, 100, 0, 42));
  const MeshQualityReport smooth =
      check_regularity(generate_voronoi(Rect{}, 100, 20, 42));
  CHECK(smooth.min_edge_ratio > rough.min_edge_ratio);
  CHECK(rough.min_edge_ratio > 0.0);
  CHECK(smooth.worst_cell_id >= 0);
}

TEST_CASE("voronoi_determinism") {
  const PolygonalMesh a = generate_voronoi(Rect{}, 100, 20, 42);
  const PolygonalMesh b = generate_voronoi(Rect{}, 100, 20, 42);
  REQUIRE(a.n_vertices() == b.n_vertices());
  bool identical = true;
  for (int v = 0; v < a.n_vertices(); ++v)
    identical = identical && a.vertices[v].x == b.vertices[v].x &&
                a.vertices[v].y == b.vertices[v].y;
  CHECK(identical);

  const PolygonalMesh c = generate_voronoi(Rect{}, 100, 20, 43);
  CHECK(c.vertices[0].x != a.vertices[0].x);
}

TEST_CASE("distorted_quads") {
  SUBCASE("zero distortion is the uniform grid") {
    const PolygonalMesh mesh = generate_distorted_quads(4, 4, 0.0, 1);
    REQUIRE(mesh.n_cells() == 16);
    for (const PolygonCell& c : mesh.cells)
      CHECK(c.area == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  }

  SUBCASE("interior perturbation preserves the tiling") {
    const PolygonalMesh mesh = generate_distorted_quads(4, 4, 0.3, 7);
    validate_mesh(mesh);
    CHECK(mesh.n_cells() == 16);
    CHECK(total_area(mesh) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("boundary vertices unmoved") {
    const PolygonalMesh flat = generate_distorted_quads(5, 5, 0.0, 3);
    const PolygonalMesh bent = generate_distorted_quads(5, 5, 0.4, 3);
    REQUIRE(flat.n_vertices() == bent.n_vertices());
    for (int v = 0; v < flat.n_vertices(); ++v) {
      if (!flat.boundary_flags[v]) continue;
      CHECK(bent.vertices[v].x == flat.vertices[v].x);
      CHECK(bent.vertices[v].y == flat.vertices[v].y);
    }
  }

  SUBCASE("near_limit distortion never yields a silent bad mesh") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      try {
        validate_mesh(generate_distorted_quads(4, 4, 0.49, seed));
      } catch (const std::exception&) {
        // Inverted-cell rejection is the documented alternative.
      }
    }
  }
}

TEST_CASE("nonconvex_generator") {
  SUBCASE("single square splits into two congruent halves") {
    const PolygonalMesh mesh = generate_nonconvex(1, 1);
    REQUIRE(mesh.n_cells() == 2);
    CHECK(mesh.cells[0].area == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mesh.cells[1].area == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("every cell is concave") {
    const PolygonalMesh mesh = generate_nonconvex(4, 4);
    validate_mesh(mesh);
    REQUIRE(mesh.n_cells() == 32);
    for (const PolygonCell& c : mesh.cells) CHECK(has_reflex_vertex(mesh, c));
  }

  SUBCASE("boundary flags only on the rectangle edge") {
    const PolygonalMesh mesh = generate_nonconvex(2, 2);
    for (int v = 0; v < mesh.n_vertices(); ++v)
      CHECK(static_cast<bool>(mesh.boundary_flags[v]) ==
            on_rect_boundary(mesh.vertices[v], mesh.domain, 1e-12));
  }
}

TEST_CASE("triangle_generator") {
  const PolygonalMesh mesh = generate_triangles(8, 8, Rect{-1, 1, -1, 1});
  validate_mesh(mesh);
  CHECK(mesh.n_cells() == 128);
  CHECK(total_area(mesh) == doctest::Approx(4.0).epsilon(1e-10));
  for (const PolygonCell& c : mesh.cells) CHECK(c.vertex_ids.size() == 3);
}

TEST_CASE("regularity_report") {
  SUBCASE("uniform square grid") {
    const PolygonalMesh mesh = generate_distorted_quads(4, 4, 0.0, 1);
    const MeshQualityReport rep = check_regularity(mesh);
    // Shortest vertex pair = edge, h_K = diagonal.
    CHECK(rep.min_edge_ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rep.min_star_ratio > 0.0);
    CHECK(rep.min_star_ratio <= 1.0);
  }

  SUBCASE("equilateral triangle cell") {
    PolygonalMesh mesh;
    mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    PolygonCell cell;
    cell.vertex_ids = {0, 1, 2};
    const CellGeometry g = cell_geometry(mesh.vertices, cell.vertex_ids);
    cell.area = g.area;
    cell.centroid = g.centroid;
    cell.diameter = g.diameter;
    mesh.cells = {cell};
    mesh.boundary_flags = {1, 1, 1};
    mesh.mesh_size = g.diameter;
    const MeshQualityReport rep = check_regularity(mesh);
    CHECK(rep.min_edge_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mesh_file_round_trip") {
  const std::string path = temp_path("sgvem_mesh_roundtrip.txt");

  SUBCASE("square grid connectivity survives") {
    const PolygonalMesh mesh = generate_distorted_quads(2, 2, 0.0, 1);
    write_mesh(mesh, path);
    const PolygonalMesh back = read_mesh(path);
    REQUIRE(back.n_vertices() == mesh.n_vertices());
    REQUIRE(back.n_cells() == mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c)
      CHECK(back.cells[c].vertex_ids == mesh.cells[c].vertex_ids);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      CHECK(back.vertices[v].x == mesh.vertices[v].x);
      CHECK(back.vertices[v].y == mesh.vertices[v].y);
      CHECK(back.boundary_flags[v] == mesh.boundary_flags[v]);
    }
  }

  SUBCASE("voronoi area is preserved") {
    const PolygonalMesh mesh = generate_voronoi(Rect{}, 100, 5, 9);
    write_mesh(mesh, path);
    const PolygonalMesh back = read_mesh(path);
    CHECK(back.n_cells() == mesh.n_cells());
    CHECK(total_area(back) == doctest::Approx(total_area(mesh)).epsilon(1e-12));
  }

  SUBCASE("out_of_range vertex index names the cell") {
    std::ofstream out(path);
    out << "polymesh 1\n3\n0 0 1\n1 0 1\n0 1 1\n1\n3 0 1 99\n";
    out.close();
    CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("cell 0"),
                         std::runtime_error);
  }

  SUBCASE("bad header rejected") {
    std::ofstream out(path);
    out << "not_a_mesh\n";
    out.close();
    CHECK_THROWS(read_mesh(path));
  }

  std::remove(path.c_str());
}
