#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgvem/geometry.hpp"

namespace sgvem {

/// Derived per-cell quantities used to scale the local monomial basis.
struct CellGeometry {
  double area = 0.0;
  Point2 centroid{};
  double diameter = 0.0;
};

/// One polygonal cell, vertices in counterclockwise order.
struct PolygonCell {
  std::vector<int> vertex_ids;
  double area = 0.0;
  Point2 centroid{};
  double diameter = 0.0;
};

struct PolygonalMesh {
  std::vector<Point2> vertices;
  std::vector<PolygonCell> cells;
  /// 1 when the vertex lies on the boundary of `domain`.
  std::vector<std::uint8_t> boundary_flags;
  Rect domain{};
  /// Largest cell diameter.
  double mesh_size = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
};

struct MeshQualityReport {
  /// min over cells of (largest ball radius the cell is star-shaped with
  /// respect to) / diameter.
  double min_star_ratio = 0.0;
  /// min over cells of (shortest distance between any two vertices) / diameter.
  double min_edge_ratio = 0.0;
  /// Cell attaining min_edge_ratio.
  int worst_cell_id = -1;
};

/// Area, centroid and diameter of one cell given the global vertex table.
/// Throws if the polygon is degenerate or clockwise.
CellGeometry cell_geometry(const std::vector<Point2>& vertices,
                           const std::vector<int>& vertex_ids);

/// Vertex coordinates of a cell in order.
std::vector<Point2> cell_polygon(const PolygonalMesh& mesh,
                                 const PolygonCell& cell);

/// Clipped Voronoi diagram of the given seeds, optionally smoothed by Lloyd
/// iterations (each iteration moves every seed to its cell centroid).
PolygonalMesh voronoi_from_seeds(const Rect& domain,
                                 std::vector<Point2> seeds,
                                 int lloyd_iterations);

/// Voronoi mesh of `n_cells` uniformly seeded cells.
PolygonalMesh generate_voronoi(const Rect& domain, int n_cells,
                               int lloyd_iterations, std::uint64_t rng_seed);

/// nx-by-ny quadrilateral grid with interior nodes displaced by a uniform
/// random offset of at most `distortion` times the cell width.
PolygonalMesh generate_distorted_quads(int nx, int ny, double distortion,
                                       std::uint64_t rng_seed,
                                       const Rect& domain = Rect{});

/// nx-by-ny grid where each square is split into two congruent nonconvex
/// hexagons by a zigzag cut between the bottom and top edge midpoints.
PolygonalMesh generate_nonconvex(int nx, int ny, const Rect& domain = Rect{});

/// Structured triangle mesh; each grid square split along one diagonal.
PolygonalMesh generate_triangles(int nx, int ny, const Rect& domain = Rect{});

/// Shape-regularity proxies for the whole mesh.
MeshQualityReport check_regularity(const PolygonalMesh& mesh);

/// Checks the mesh invariants (orientation, index bounds, tiling of the
/// domain, boundary flag consistency). Throws on the first violation.
void validate_mesh(const PolygonalMesh& mesh);

/// Plain-text mesh format:
///   polymesh 1
///   <vertex count>
///   x y flag            (one line per vertex)
///   <cell count>
///   n i1 ... in         (one line per cell)
/// Coordinates round-trip exactly; the domain rectangle is recovered as the
/// bounding box of the vertices.
PolygonalMesh read_mesh(const std::string& path);
void write_mesh(const PolygonalMesh& mesh, const std::string& path);

}  // namespace sgvem
