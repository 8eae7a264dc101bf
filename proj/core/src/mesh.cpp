#include "sgvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace sgvem {

namespace {

std::runtime_error mesh_error(const std::string& where, const std::string& what) {
  return std::runtime_error(where + ": " + what);
}

/// Merges nearly coincident points via a quantized grid. Candidate buckets
/// from the 3x3 key neighborhood are scanned so points straddling a bucket
/// border still merge.
class VertexMerger {
 public:
  explicit VertexMerger(double tol)
      : tol_(tol), inv_cell_(1.0 / (4.0 * (tol > 0.0 ? tol : 1.0))) {}

  int insert(Point2 p) {
    const long long ix = static_cast<long long>(std::floor(p.x * inv_cell_));
    const long long iy = static_cast<long long>(std::floor(p.y * inv_cell_));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(ix + dx, iy + dy));
        if (it == buckets_.end()) continue;
        for (int idx : it->second)
          if (distance(points_[idx], p) <= tol_) return idx;
      }
    }
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    buckets_[key(ix, iy)].push_back(idx);
    return idx;
  }

  std::vector<Point2> take() { return std::move(points_); }

 private:
  static long long key(long long ix, long long iy) {
    return (ix << 32) ^ (iy & 0xffffffffLL);
  }

  double tol_;
  double inv_cell_;
  std::vector<Point2> points_;
  std::unordered_map<long long, std::vector<int>> buckets_;
};

/// Uniform bucket grid over the seed set for radius queries.
class SeedGrid {
 public:
  SeedGrid(const Rect& rect, const std::vector<Point2>& seeds) : rect_(rect) {
    const int n = static_cast<int>(seeds.size());
    const double target = std::sqrt(rect.area() / std::max(n, 1)) * 1.5;
    nx_ = std::max(1, static_cast<int>(rect.width() / target));
    ny_ = std::max(1, static_cast<int>(rect.height() / target));
    dx_ = rect.width() / nx_;
    dy_ = rect.height() / ny_;
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int i = 0; i < n; ++i) buckets_[bucket_of(seeds[i])].push_back(i);
    seeds_ = &seeds;
  }

  void gather(Point2 p, double radius, std::vector<int>& out) const {
    const int i0 = clamp_x(static_cast<int>(std::floor((p.x - radius - rect_.xmin) / dx_)));
    const int i1 = clamp_x(static_cast<int>(std::floor((p.x + radius - rect_.xmin) / dx_)));
    const int j0 = clamp_y(static_cast<int>(std::floor((p.y - radius - rect_.ymin) / dy_)));
    const int j1 = clamp_y(static_cast<int>(std::floor((p.y + radius - rect_.ymin) / dy_)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        for (int s : buckets_[static_cast<std::size_t>(j) * nx_ + i])
          if (distance((*seeds_)[s], p) <= radius) out.push_back(s);
      }
    }
  }

 private:
  int clamp_x(int i) const { return std::clamp(i, 0, nx_ - 1); }
  int clamp_y(int j) const { return std::clamp(j, 0, ny_ - 1); }
  std::size_t bucket_of(Point2 p) const {
    const int i = clamp_x(static_cast<int>(std::floor((p.x - rect_.xmin) / dx_)));
    const int j = clamp_y(static_cast<int>(std::floor((p.y - rect_.ymin) / dy_)));
    return static_cast<std::size_t>(j) * nx_ + i;
  }

  Rect rect_;
  int nx_ = 1, ny_ = 1;
  double dx_ = 1.0, dy_ = 1.0;
  const std::vector<Point2>* seeds_ = nullptr;
  std::vector<std::vector<int>> buckets_;
};

/// Clipped Voronoi polygons, one per seed, in seed order. Each cell is cut
/// only against seeds within twice its current circumradius: any seed
/// farther away has its bisector beyond the cell, so the result equals the
/// full diagram.
std::vector<std::vector<Point2>> voronoi_polygons(const Rect& rect,
                                                  const std::vector<Point2>& seeds) {
  const int n = static_cast<int>(seeds.size());
  const double scale = rect.scale();
  const double tol = 1e-12 * scale;
  const double diag = std::hypot(rect.width(), rect.height());
  const double spacing = std::sqrt(rect.area() / n);
  SeedGrid grid(rect, seeds);

  std::vector<std::vector<Point2>> polys(n);
  std::vector<int> stamp(n, -1);
  std::vector<int> cand;
  std::vector<std::pair<double, int>> order;
  const std::vector<Point2> box = rect.corners();

  for (int i = 0; i < n; ++i) {
    std::vector<Point2> poly = box;
    double radius = 2.5 * spacing;
    while (true) {
      cand.clear();
      grid.gather(seeds[i], radius, cand);
      order.clear();
      for (int j : cand) {
        if (j == i || stamp[j] == i) continue;
        order.emplace_back(distance(seeds[i], seeds[j]), j);
      }
      std::sort(order.begin(), order.end());
      for (const auto& [dist_ij, j] : order) {
        stamp[j] = i;
        if (dist_ij <= tol)
          throw mesh_error("voronoi_polygons", "duplicate seeds");
        const Point2 nrm = (1.0 / dist_ij) * (seeds[j] - seeds[i]);
        const Point2 mid = 0.5 * (seeds[i] + seeds[j]);
        poly = clip_halfplane(poly, nrm, dot(nrm, mid), tol);
        if (poly.empty())
          throw mesh_error("voronoi_polygons", "seed outside its cell");
      }
      double rmax = 0.0;
      for (const Point2& v : poly) rmax = std::max(rmax, distance(seeds[i], v));
      if (radius >= 2.0 * rmax || radius > 2.0 * diag) break;
      radius = std::max(2.0 * rmax, 1.5 * radius);
    }
    polys[i] = std::move(poly);
  }
  return polys;
}

/// Snaps near-boundary coordinates onto the rectangle, assigns boundary
/// flags, fills per-cell geometry and runs the full validator.
void finish_mesh(PolygonalMesh& mesh) {
  const Rect& r = mesh.domain;
  const double snap = 1e-12 * r.scale();
  for (Point2& p : mesh.vertices) {
    if (std::abs(p.x - r.xmin) <= snap) p.x = r.xmin;
    if (std::abs(p.x - r.xmax) <= snap) p.x = r.xmax;
    if (std::abs(p.y - r.ymin) <= snap) p.y = r.ymin;
    if (std::abs(p.y - r.ymax) <= snap) p.y = r.ymax;
  }
  mesh.boundary_flags.assign(mesh.vertices.size(), 0);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point2 p = mesh.vertices[v];
    if (p.x == r.xmin || p.x == r.xmax || p.y == r.ymin || p.y == r.ymax)
      mesh.boundary_flags[v] = 1;
  }
  mesh.mesh_size = 0.0;
  for (PolygonCell& cell : mesh.cells) {
    const CellGeometry g = cell_geometry(mesh.vertices, cell.vertex_ids);
    cell.area = g.area;
    cell.centroid = g.centroid;
    cell.diameter = g.diameter;
    mesh.mesh_size = std::max(mesh.mesh_size, g.diameter);
  }
  validate_mesh(mesh);
}

PolygonalMesh mesh_from_polygons(const Rect& domain,
                                 const std::vector<std::vector<Point2>>& polys) {
  PolygonalMesh mesh;
  mesh.domain = domain;
  mesh.cells.reserve(polys.size());
  VertexMerger merger(1e-9 * domain.scale());
  for (std::size_t c = 0; c < polys.size(); ++c) {
    PolygonCell cell;
    cell.vertex_ids.reserve(polys[c].size());
    for (const Point2& p : polys[c]) {
      const int id = merger.insert(p);
      if (cell.vertex_ids.empty() || cell.vertex_ids.back() != id)
        cell.vertex_ids.push_back(id);
    }
    while (cell.vertex_ids.size() > 1 &&
           cell.vertex_ids.front() == cell.vertex_ids.back())
      cell.vertex_ids.pop_back();
    if (cell.vertex_ids.size() < 3)
      throw mesh_error("mesh_from_polygons",
                       "cell " + std::to_string(c) + " collapsed during merge");
    mesh.cells.push_back(std::move(cell));
  }
  mesh.vertices = merger.take();
  finish_mesh(mesh);
  return mesh;
}

/// Grid node coordinate with exact endpoints so boundary detection is exact.
double grid_coord(double lo, double hi, int i, int n) {
  if (i == 0) return lo;
  if (i == n) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / n);
}

}  // namespace

CellGeometry cell_geometry(const std::vector<Point2>& vertices,
                           const std::vector<int>& vertex_ids) {
  if (vertex_ids.size() < 3)
    throw mesh_error("cell_geometry", "fewer than 3 vertices");
  std::vector<Point2> poly;
  poly.reserve(vertex_ids.size());
  for (int id : vertex_ids) {
    if (id < 0 || id >= static_cast<int>(vertices.size()))
      throw mesh_error("cell_geometry", "vertex id out of range");
    poly.push_back(vertices[id]);
  }
  CellGeometry g;
  const double area = polygon_signed_area(poly);
  if (!(area > 0.0))
    throw mesh_error("cell_geometry", "non-positive area (clockwise or degenerate cell)");
  g.area = area;
  g.centroid = polygon_centroid(poly, area);
  g.diameter = polygon_diameter(poly);
  return g;
}

std::vector<Point2> cell_polygon(const PolygonalMesh& mesh,
                                 const PolygonCell& cell) {
  std::vector<Point2> poly;
  poly.reserve(cell.vertex_ids.size());
  for (int id : cell.vertex_ids) poly.push_back(mesh.vertices[id]);
  return poly;
}

PolygonalMesh voronoi_from_seeds(const Rect& domain, std::vector<Point2> seeds,
                                 int lloyd_iterations) {
  if (domain.degenerate())
    throw mesh_error("voronoi_from_seeds", "degenerate domain rectangle");
  if (seeds.size() < 1) throw mesh_error("voronoi_from_seeds", "no seeds");
  for (const Point2& s : seeds)
    if (!domain.contains(s))
      throw mesh_error("voronoi_from_seeds", "seed outside domain");
  if (lloyd_iterations < 0)
    throw mesh_error("voronoi_from_seeds", "negative lloyd_iterations");

  std::vector<std::vector<Point2>> polys;
  for (int it = 0; it <= lloyd_iterations; ++it) {
    polys = voronoi_polygons(domain, seeds);
    if (it == lloyd_iterations) break;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      seeds[i] = polygon_centroid(polys[i], polygon_signed_area(polys[i]));
  }
  return mesh_from_polygons(domain, polys);
}

PolygonalMesh generate_voronoi(const Rect& domain, int n_cells,
                               int lloyd_iterations, std::uint64_t rng_seed) {
  if (n_cells < 4)
    throw mesh_error("generate_voronoi", "n_cells too small to tessellate (need at least 4)");
  if (domain.degenerate())
    throw mesh_error("generate_voronoi", "degenerate domain rectangle");
  UniformRng rng(rng_seed);
  std::vector<Point2> seeds(n_cells);
  for (Point2& s : seeds) {
    s.x = rng.range(domain.xmin, domain.xmax);
    s.y = rng.range(domain.ymin, domain.ymax);
  }
  return voronoi_from_seeds(domain, std::move(seeds), lloyd_iterations);
}

PolygonalMesh generate_distorted_quads(int nx, int ny, double distortion,
                                       std::uint64_t rng_seed, const Rect& domain) {
  if (nx < 2 || ny < 2)
    throw mesh_error("generate_distorted_quads", "grid must be at least 2x2");
  if (distortion < 0.0 || distortion >= 0.5)
    throw mesh_error("generate_distorted_quads", "distortion outside [0, 0.5)");
  if (domain.degenerate())
    throw mesh_error("generate_distorted_quads", "degenerate domain rectangle");

  PolygonalMesh mesh;
  mesh.domain = domain;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };

  mesh.vertices.resize(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices[node(i, j)] = {grid_coord(domain.xmin, domain.xmax, i, nx),
                                   grid_coord(domain.ymin, domain.ymax, j, ny)};

  UniformRng rng(rng_seed);
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      Point2& p = mesh.vertices[node(i, j)];
      p.x += distortion * dx * rng.range(-1.0, 1.0);
      p.y += distortion * dy * rng.range(-1.0, 1.0);
    }
  }

  mesh.cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      PolygonCell cell;
      cell.vertex_ids = {node(i, j), node(i + 1, j), node(i + 1, j + 1),
                         node(i, j + 1)};
      const std::vector<Point2> q{
          mesh.vertices[cell.vertex_ids[0]], mesh.vertices[cell.vertex_ids[1]],
          mesh.vertices[cell.vertex_ids[2]], mesh.vertices[cell.vertex_ids[3]]};
      const bool simple = !segments_intersect(q[0], q[1], q[2], q[3]) &&
                          !segments_intersect(q[1], q[2], q[3], q[0]);
      if (!simple || polygon_signed_area(q) <= 0.0)
        throw mesh_error("generate_distorted_quads",
                         "cell (" + std::to_string(i) + "," + std::to_string(j) +
                             ") flipped; reduce distortion");
      mesh.cells.push_back(std::move(cell));
    }
  }
  finish_mesh(mesh);
  return mesh;
}

PolygonalMesh generate_nonconvex(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1)
    throw mesh_error("generate_nonconvex", "grid must be at least 1x1");
  if (domain.degenerate())
    throw mesh_error("generate_nonconvex", "degenerate domain rectangle");

  PolygonalMesh mesh;
  mesh.domain = domain;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  const int n_nodes = (nx + 1) * (ny + 1);
  const int n_hmid = nx * (ny + 1);
  mesh.vertices.resize(static_cast<std::size_t>(n_nodes) + n_hmid +
                       2 * static_cast<std::size_t>(nx) * ny);

  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  auto hmid = [nx, n_nodes](int i, int j) { return n_nodes + j * nx + i; };
  auto zig = [nx, n_nodes, n_hmid](int i, int j, int which) {
    return n_nodes + n_hmid + 2 * (j * nx + i) + which;
  };

  for (int j = 0; j <= ny; ++j) {
    const double y = grid_coord(domain.ymin, domain.ymax, j, ny);
    for (int i = 0; i <= nx; ++i)
      mesh.vertices[node(i, j)] = {grid_coord(domain.xmin, domain.xmax, i, nx), y};
    for (int i = 0; i < nx; ++i)
      mesh.vertices[hmid(i, j)] = {domain.xmin + (i + 0.5) * dx, y};
  }
  // Zigzag knees at (0.65, 0.35) and (0.35, 0.65) in local cell coordinates
  // split each square into two congruent hexagons, each with one reflex
  // vertex yet star-shaped with respect to its centroid.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x0 = domain.xmin + i * dx;
      const double y0 = domain.ymin + j * dy;
      mesh.vertices[zig(i, j, 0)] = {x0 + 0.65 * dx, y0 + 0.35 * dy};
      mesh.vertices[zig(i, j, 1)] = {x0 + 0.35 * dx, y0 + 0.65 * dy};
    }
  }

  mesh.cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      PolygonCell left;
      left.vertex_ids = {node(i, j),      hmid(i, j),   zig(i, j, 0),
                         zig(i, j, 1),    hmid(i, j + 1), node(i, j + 1)};
      PolygonCell right;
      right.vertex_ids = {hmid(i, j),     node(i + 1, j), node(i + 1, j + 1),
                          hmid(i, j + 1), zig(i, j, 1),   zig(i, j, 0)};
      mesh.cells.push_back(std::move(left));
      mesh.cells.push_back(std::move(right));
    }
  }
  finish_mesh(mesh);
  return mesh;
}

PolygonalMesh generate_triangles(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1)
    throw mesh_error("generate_triangles", "grid must be at least 1x1");
  if (domain.degenerate())
    throw mesh_error("generate_triangles", "degenerate domain rectangle");

  PolygonalMesh mesh;
  mesh.domain = domain;
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.vertices.resize(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices[node(i, j)] = {grid_coord(domain.xmin, domain.xmax, i, nx),
                                   grid_coord(domain.ymin, domain.ymax, j, ny)};

  mesh.cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      PolygonCell lower, upper;
      lower.vertex_ids = {node(i, j), node(i + 1, j), node(i + 1, j + 1)};
      upper.vertex_ids = {node(i, j), node(i + 1, j + 1), node(i, j + 1)};
      mesh.cells.push_back(std::move(lower));
      mesh.cells.push_back(std::move(upper));
    }
  }
  finish_mesh(mesh);
  return mesh;
}

MeshQualityReport check_regularity(const PolygonalMesh& mesh) {
  MeshQualityReport report;
  report.min_star_ratio = 1.0;
  report.min_edge_ratio = 1.0;
  const double tol = 1e-12 * mesh.domain.scale();

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const PolygonCell& cell = mesh.cells[c];
    const std::vector<Point2> poly = cell_polygon(mesh, cell);
    const std::size_t m = poly.size();

    double min_pair = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        min_pair = std::min(min_pair, distance(poly[i], poly[j]));
    const double edge_ratio = min_pair / cell.diameter;
    if (edge_ratio < report.min_edge_ratio) {
      report.min_edge_ratio = edge_ratio;
      report.worst_cell_id = c;
    }

    const std::vector<Point2> kernel = polygon_kernel(poly, tol);
    double star = 0.0;
    if (!kernel.empty()) {
      // Inradius of the (convex) kernel: for an interior point the distance
      // to the kernel boundary is the minimum distance to its edge lines.
      auto radius_at = [&kernel](Point2 p) {
        double r = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < kernel.size(); ++i) {
          const Point2 a = kernel[i];
          const Point2 b = kernel[(i + 1) % kernel.size()];
          const double len = distance(a, b);
          if (len <= 0.0) continue;
          const double d = cross(b - a, p - a) / len;
          if (d < r) r = d;
        }
        return r;
      };
      const double karea = polygon_signed_area(kernel);
      Point2 best = polygon_centroid(kernel, karea);
      double best_r = radius_at(best);
      // Pattern search toward the Chebyshev center.
      double step = 0.25 * polygon_diameter(kernel);
      for (int it = 0; it < 40 && step > tol; ++it) {
        bool moved = false;
        for (const Point2 d : {Point2{step, 0.0}, Point2{-step, 0.0},
                               Point2{0.0, step}, Point2{0.0, -step}}) {
          const Point2 q = best + d;
          const double r = radius_at(q);
          if (r > best_r) {
            best = q;
            best_r = r;
            moved = true;
          }
        }
        if (!moved) step *= 0.5;
      }
      star = std::max(best_r, 0.0) / cell.diameter;
    }
    report.min_star_ratio = std::min(report.min_star_ratio, star);
  }
  return report;
}

void validate_mesh(const PolygonalMesh& mesh) {
  const auto fail = [](const std::string& what) { throw mesh_error("validate_mesh", what); };
  if (mesh.domain.degenerate()) fail("degenerate domain rectangle");
  if (mesh.vertices.empty() || mesh.cells.empty()) fail("empty mesh");
  if (mesh.boundary_flags.size() != mesh.vertices.size())
    fail("boundary flag count mismatch");

  const Rect& r = mesh.domain;
  const double tol = 1e-12 * r.scale();
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point2 p = mesh.vertices[v];
    if (p.x < r.xmin - tol || p.x > r.xmax + tol || p.y < r.ymin - tol ||
        p.y > r.ymax + tol)
      fail("vertex " + std::to_string(v) + " outside domain");
    const bool on_boundary = std::abs(p.x - r.xmin) <= tol ||
                             std::abs(p.x - r.xmax) <= tol ||
                             std::abs(p.y - r.ymin) <= tol ||
                             std::abs(p.y - r.ymax) <= tol;
    if (on_boundary != (mesh.boundary_flags[v] != 0))
      fail("boundary flag wrong at vertex " + std::to_string(v));
  }

  std::vector<std::uint8_t> used(mesh.vertices.size(), 0);
  // Undirected edge -> (count, net orientation); interior edges must appear
  // twice with opposite directions, boundary edges once along the perimeter.
  std::unordered_map<long long, std::pair<int, int>> edges;
  double total_area = 0.0;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const PolygonCell& cell = mesh.cells[c];
    const std::string id = "cell " + std::to_string(c);
    const std::size_t m = cell.vertex_ids.size();
    if (m < 3) fail(id + " has fewer than 3 vertices");
    for (std::size_t a = 0; a < m; ++a) {
      const int va = cell.vertex_ids[a];
      if (va < 0 || va >= mesh.n_vertices()) fail(id + " has vertex id out of range");
      used[va] = 1;
      for (std::size_t b = a + 1; b < m; ++b)
        if (va == cell.vertex_ids[b]) fail(id + " repeats a vertex");
    }
    const std::vector<Point2> poly = cell_polygon(mesh, cell);
    const double area = polygon_signed_area(poly);
    if (!(area > 0.0)) fail(id + " is not counterclockwise");
    if (std::abs(area - cell.area) > 1e-9 * r.area())
      fail(id + " stored area is stale");
    if (cell.diameter <= 0.0) fail(id + " stored diameter is not positive");
    total_area += area;

    for (std::size_t a = 0; a < m; ++a) {
      const int va = cell.vertex_ids[a];
      const int vb = cell.vertex_ids[(a + 1) % m];
      const long long key =
          (static_cast<long long>(std::min(va, vb)) << 32) | std::max(va, vb);
      auto& entry = edges[key];
      entry.first += 1;
      entry.second += (va < vb) ? 1 : -1;
    }
  }

  for (std::size_t v = 0; v < used.size(); ++v)
    if (!used[v]) fail("vertex " + std::to_string(v) + " not used by any cell");

  if (std::abs(total_area - r.area()) > 1e-10 * r.area())
    fail("cell areas do not tile the domain");

  for (const auto& [key, entry] : edges) {
    const int va = static_cast<int>(key >> 32);
    const int vb = static_cast<int>(key & 0xffffffffLL);
    const auto [count, orient] = entry;
    if (count > 2) fail("edge shared by more than two cells");
    if (count == 2 && orient != 0) fail("interior edge traversed twice in the same direction");
    if (count == 1) {
      const Point2 a = mesh.vertices[va];
      const Point2 b = mesh.vertices[vb];
      const auto both_at = [tol](double u, double v, double side) {
        return std::abs(u - side) <= tol && std::abs(v - side) <= tol;
      };
      const bool on_side =
          both_at(a.x, b.x, r.xmin) || both_at(a.x, b.x, r.xmax) ||
          both_at(a.y, b.y, r.ymin) || both_at(a.y, b.y, r.ymax);
      if (!on_side)
        fail("edge (" + std::to_string(va) + "," + std::to_string(vb) +
             ") borders only one cell but is not on the boundary");
    }
  }
}

PolygonalMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mesh_error("read_mesh", "cannot open '" + path + "'");
  int line_no = 0;
  std::string line;
  const auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line))
      throw mesh_error("read_mesh",
                       "'" + path + "' truncated after line " + std::to_string(line_no));
    ++line_no;
    return line;
  };
  const auto parse_fail = [&](const std::string& what) {
    throw mesh_error("read_mesh",
                     "'" + path + "' line " + std::to_string(line_no) + ": " + what);
  };

  {
    std::istringstream hdr(next_line());
    std::string magic;
    int version = 0;
    if (!(hdr >> magic >> version) || magic != "polymesh" || version != 1)
      parse_fail("expected header 'polymesh 1'");
  }

  PolygonalMesh mesh;
  int nv = 0;
  {
    std::istringstream s(next_line());
    if (!(s >> nv) || nv < 3) parse_fail("bad vertex count");
  }
  mesh.vertices.resize(nv);
  mesh.boundary_flags.resize(nv);
  for (int v = 0; v < nv; ++v) {
    std::istringstream s(next_line());
    int flag = -1;
    if (!(s >> mesh.vertices[v].x >> mesh.vertices[v].y >> flag) ||
        (flag != 0 && flag != 1))
      parse_fail("expected 'x y flag' with flag 0 or 1");
    mesh.boundary_flags[v] = static_cast<std::uint8_t>(flag);
  }

  int nc = 0;
  {
    std::istringstream s(next_line());
    if (!(s >> nc) || nc < 1) parse_fail("bad cell count");
  }
  mesh.cells.resize(nc);
  for (int c = 0; c < nc; ++c) {
    std::istringstream s(next_line());
    int n = 0;
    if (!(s >> n) || n < 3) parse_fail("bad cell vertex count");
    mesh.cells[c].vertex_ids.resize(n);
    for (int k = 0; k < n; ++k) {
      if (!(s >> mesh.cells[c].vertex_ids[k])) parse_fail("truncated cell line");
      if (mesh.cells[c].vertex_ids[k] < 0 || mesh.cells[c].vertex_ids[k] >= nv)
        parse_fail("cell " + std::to_string(c) + " references vertex id out of range");
    }
  }

  Rect box{mesh.vertices[0].x, mesh.vertices[0].x, mesh.vertices[0].y,
           mesh.vertices[0].y};
  for (const Point2& p : mesh.vertices) {
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
  }
  mesh.domain = box;

  mesh.mesh_size = 0.0;
  for (PolygonCell& cell : mesh.cells) {
    const CellGeometry g = cell_geometry(mesh.vertices, cell.vertex_ids);
    cell.area = g.area;
    cell.centroid = g.centroid;
    cell.diameter = g.diameter;
    mesh.mesh_size = std::max(mesh.mesh_size, g.diameter);
  }
  validate_mesh(mesh);
  return mesh;
}

void write_mesh(const PolygonalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw mesh_error("write_mesh", "cannot open '" + path + "' for writing");
  out << "polymesh 1\n" << mesh.n_vertices() << "\n";
  char buf[64];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Point2 p = mesh.vertices[v];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", p.x, p.y,
                  mesh.boundary_flags[v] ? 1 : 0);
    out << buf;
  }
  out << mesh.n_cells() << "\n";
  for (const PolygonCell& cell : mesh.cells) {
    out << cell.vertex_ids.size();
    for (int id : cell.vertex_ids) out << ' ' << id;
    out << '\n';
  }
  if (!out) throw mesh_error("write_mesh", "write to '" + path + "' failed");
}

}  // namespace sgvem
