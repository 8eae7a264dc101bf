#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgvem/config.hpp"
#include "sgvem/norms.hpp"
#include "sgvem/timestepper.hpp"

namespace sgvem {

/// Parameters of one benchmark problem run. `default_experiment` fills the
/// published values per test; a config file overrides individual keys.
///
/// Per-test meaning of `mesh_levels`:
///   test1, family voronoi   target dof counts     (default 1002,2002,4002,10002)
///   test1, family triangles grid subdivisions     (default 38,54,77,122)
///   test2                   Voronoi cell counts   (default 81,321,1300,5300)
///   test3, solitons         unused; the single mesh comes from
///                           `target_mesh_size` (or mesh_levels[0] cells when set)
struct ExperimentConfig {
  std::string test_id = "test1";  // test1 | test2 | test3 | solitons
  std::string mesh_family = "voronoi";
  std::vector<int> mesh_levels;
  double target_mesh_size = 0.0;
  std::vector<double> dt_levels;
  double t_end = 1.0;
  double theta = 0.5;
  double gamma = 0.0;
  NonlinearTreatment treatment = NonlinearTreatment::product;
  NewtonConfig newton;
  /// First time level from a second-order Taylor start instead of the plain
  /// u0 + dt*v0 step. With the plain start the O(dt) initial-velocity defect
  /// dominates fine-mesh errors whenever the initial acceleration is nonzero.
  bool second_order_start = false;
  int lloyd_iterations = 100;
  unsigned long seed = 1234;
  /// When false the seconds column of every emitted table is zeroed, making
  /// repeated runs byte-identical.
  bool timing = true;
  std::string csv_path;
  std::string comparison_csv_path;
  std::string field_dir;
};

ExperimentConfig default_experiment(const std::string& test_id,
                                    const std::string& mesh_family = "voronoi");

/// Builds an experiment from flat `key = value` entries. Recognized keys:
/// test, family, levels, mesh_size, dt (single) or dt_levels (list), t_end,
/// theta, gamma, treatment, lloyd, seed, timing, newton_tol, newton_max,
/// csv, comparison_csv, field_dir. Unknown keys are rejected.
ExperimentConfig experiment_from_config(const Config& cfg);

/// Voronoi mesh whose vertex count approximates `target_dofs`, found by a
/// few deterministic generator-size adjustments.
PolygonalMesh voronoi_with_dofs(const Rect& domain, int target_dofs,
                                int lloyd_iterations, unsigned long seed);

/// Voronoi mesh whose mesh size approximates `target_h`.
PolygonalMesh voronoi_with_mesh_size(const Rect& domain, double target_h,
                                     int lloyd_iterations, unsigned long seed);

/// Side-by-side product-approximation / quadrature-treatment results on the
/// same mesh sequence.
struct ComparisonResult {
  std::vector<ConvergenceRecord> product;
  std::vector<ConvergenceRecord> quadrature;
};

struct SolitonResult {
  PolygonalMesh mesh;
  std::vector<double> snapshot_times;
  std::vector<Eigen::VectorXd> snapshots;
  double max_abs_final = 0.0;
  long newton_total = 0;
  int newton_max_step = 0;
  double seconds = 0.0;
};

/// Kink sheet u = 4 atan(exp(x+y-t)) on [-7,7]^2, exact Dirichlet trace,
/// one row per mesh level.
std::vector<ConvergenceRecord> run_test1(const ExperimentConfig& cfg);

/// Quadratic-reaction problem with manufactured solution
/// u = e^{-t} xy(1-x)(1-y) on the unit square; runs both nonlinear
/// treatments per mesh level.
ComparisonResult run_test2(const ExperimentConfig& cfg);

/// Temporal refinement with manufactured solution
/// u = sin t sin(pi x) sin(pi y) on one fine mesh, one row per dt.
std::vector<ConvergenceRecord> run_test3(const ExperimentConfig& cfg);

/// Damped ring soliton on [-10,10]x[-7,7] with homogeneous Neumann walls;
/// emits quarter-domain and mirror-completed fields when field_dir is set.
SolitonResult run_solitons(const ExperimentConfig& cfg);

/// Rate-table CSV with header h,dt,dofs,l2,h1,rate_l2,rate_h1,newton,seconds.
/// `newton` is the total iteration count of the run; empty rate cells on the
/// first row.
std::string csv_string(std::span<const ConvergenceRecord> records);
void emit_csv(std::span<const ConvergenceRecord> records, const std::string& path);

/// Treatment comparison CSV with header h,dofs,l2_product,ni_product,
/// seconds_product,l2_quadrature,ni_quadrature,seconds_quadrature; ni is the
/// largest per-step Newton count.
std::string comparison_csv_string(const ComparisonResult& result);
void emit_comparison_csv(const ComparisonResult& result, const std::string& path);

/// One solution field tied to its mesh.
struct FieldSnapshot {
  double t = 0.0;
  Eigen::VectorXd values;
  const PolygonalMesh* mesh = nullptr;
};

/// On-disk field payload: polygon soup plus one vertex scalar.
struct FieldData {
  double t = 0.0;
  std::vector<Point2> points;
  std::vector<std::vector<int>> polygons;
  std::vector<double> values;
};

FieldData to_field_data(const FieldSnapshot& snap);

/// Glues the field to its three mirror images across the vertical line
/// x = mirror_x and the horizontal line y = mirror_y.
FieldData reflect_field(const FieldSnapshot& snap, double mirror_x, double mirror_y);

/// Legacy-VTK POLYDATA writer (ASCII, point scalars named "u", time in the
/// title line); `read_field` parses files written here.
void emit_field(const FieldData& field, const std::string& path);
void emit_field(const FieldSnapshot& snap, const std::string& path);
FieldData read_field(const std::string& path);

/// One acceptance window evaluation; `messages` holds a line per check.
struct CheckReport {
  bool passed = true;
  std::vector<std::string> messages;
};

CheckReport check_test1(std::span<const ConvergenceRecord> records);
CheckReport check_test2(const ComparisonResult& result);
CheckReport check_test3(std::span<const ConvergenceRecord> records);
CheckReport check_solitons(const SolitonResult& result);

}  // namespace sgvem
