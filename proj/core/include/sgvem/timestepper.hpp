#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sgvem/nonlinear.hpp"

namespace sgvem {

enum class NonlinearTreatment { product, quadrature };

/// Two-step theta scheme for u_tt + gamma u_t - lap(u) = f(u) + g.
struct SchemeParams {
  double gamma = 0.0;
  double theta = 0.5;
  double dt = 0.0;
  double t_end = 0.0;
  Nonlinearity nonlinearity = sine_gordon();
  /// Volume source g(x, y, t); empty means none.
  TimeScalarField source;
  BoundaryData boundary;
  NewtonConfig newton;
  NonlinearTreatment treatment = NonlinearTreatment::product;
  /// Cell quadrature degree for the quadrature treatment.
  int quadrature_degree = 4;
  /// Replace the first-order velocity start with a Taylor start that solves
  /// a mass system for the initial acceleration.
  bool second_order_start = false;
};

struct InitialData {
  ScalarField displacement;
  ScalarField velocity;
};

struct StepRecord {
  double t = 0.0;
  int newton_iterations = 0;
  double residual_norm = 0.0;
};

struct Trajectory {
  std::vector<double> snapshot_times;
  std::vector<Eigen::VectorXd> snapshots;
  std::vector<StepRecord> steps;
  Eigen::VectorXd final_state;
  double final_time = 0.0;
  int max_newton_per_step = 0;
  long total_newton = 0;
  double seconds = 0.0;
};

/// First-order start: u0 the displacement interpolant, u1 = u0 + dt * v0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> initialize(
    const PolygonalMesh& mesh, const InitialData& data, double dt);

/// Holds the assembled system and the factorization reused across steps.
class TimeStepper {
 public:
  TimeStepper(SchemeParams params, const PolygonalMesh& mesh);
  TimeStepper(SchemeParams params, const PolygonalMesh& mesh,
              std::vector<LocalOperators> ops, GlobalSystem system);

  const GlobalSystem& system() const { return system_; }
  const SchemeParams& params() const { return params_; }

  /// Start values with boundary conditions imposed; applies the optional
  /// second-order correction to the second level.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> initial_levels(const InitialData& data);

  /// Advances one step: given the solutions at t_next - 2 dt and
  /// t_next - dt, solves for the solution at t_next.
  std::pair<Eigen::VectorXd, NewtonReport> step(const Eigen::VectorXd& u_prev,
                                                const Eigen::VectorXd& u_mid,
                                                double t_next);

 private:
  void after_assembly();
  Eigen::VectorXd source_load(double t) const;
  Eigen::VectorXd nonlinear_load(const Eigen::VectorXd& u) const;

  SchemeParams params_;
  const PolygonalMesh* mesh_;
  std::vector<LocalOperators> ops_;
  GlobalSystem system_;
  SparseMat lhs_full_;       // (1 + gamma dt/2) M + theta dt^2 A
  SparseMat rhs_prev_full_;  // (1 - gamma dt/2) M + (1 - theta) dt^2 A
  SparseMat lhs_free_;
  SparseMat mbar_free_;
  std::vector<int> free_dofs_;
  SparseLuSolver solver_;
};

/// Runs the scheme from t = 0 to t_end and records the requested snapshot
/// times, which must lie on the time grid.
Trajectory run(TimeStepper& stepper, const InitialData& data,
               std::span<const double> snapshot_times = {});

/// Same, assembling internally; `seconds` then includes assembly.
Trajectory run(const SchemeParams& params, const PolygonalMesh& mesh,
               const InitialData& data,
               std::span<const double> snapshot_times = {});

}  // namespace sgvem
