#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <string>
#include <utility>

#include "sgvem/assembly.hpp"

namespace sgvem {

/// Pointwise nonlinearity f entering the forced wave equation
///   u_tt + gamma u_t - lap(u) = f(u) + g.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::string name;
};

Nonlinearity sine_gordon();  // f(u) = -sin u
Nonlinearity quadratic();    // f(u) = u^2
Nonlinearity no_reaction();  // f(u) = 0

/// Product approximation of the nonlinear load: interpolate f at the
/// vertex values, then integrate against the projected basis, i.e.
/// Mbar * f.(u).
Eigen::VectorXd product_approx_load(const SparseMat& projected_mass,
                                    const Eigen::VectorXd& u,
                                    const Nonlinearity& f);

/// Residual of the two-step theta scheme at a new time level:
///   [(1 + gamma dt/2) M + theta dt^2 A] u_next - dt^2 theta load(u_next)
///   - 2 M u_mid
///   + [(1 - gamma dt/2) M + (1 - theta) dt^2 A] u_prev
///   - dt^2 (1 - theta) load(u_prev)
///   - dt^2 [theta s_next + (1 - theta) s_prev]
/// with load the product approximation. theta = 1/2 is the Crank-Nicolson
/// flavor used throughout. Empty source vectors mean zero.
Eigen::VectorXd residual(double gamma, double dt, double theta,
                         const GlobalSystem& sys, const Eigen::VectorXd& u_next,
                         const Eigen::VectorXd& u_mid,
                         const Eigen::VectorXd& u_prev, const Nonlinearity& f,
                         const Eigen::VectorXd& source_next = Eigen::VectorXd(),
                         const Eigen::VectorXd& source_prev = Eigen::VectorXd());

/// Derivative of the residual with respect to u_next:
///   (1 + gamma dt/2) M + theta dt^2 A + theta dt^2 Mbar diag(-f'(u_next)).
/// Nonsymmetric in general because Mbar multiplies a diagonal.
SparseMat jacobian(double gamma, double dt, double theta,
                   const GlobalSystem& sys, const Eigen::VectorXd& u_next,
                   const Nonlinearity& f);

/// Reference treatment of the nonlinear load, integrating f composed with
/// the projected trial function against the projected basis by cellwise
/// quadrature of the given degree.
Eigen::VectorXd quadrature_load(const PolygonalMesh& mesh,
                                const std::vector<LocalOperators>& ops,
                                const Eigen::VectorXd& u, const Nonlinearity& f,
                                int degree);

/// Jacobian contribution matching quadrature_load:
///   base + theta dt^2 * sum_K integral of (-f'(w)) against pairs of
///   projected basis functions, w the projected trial function.
SparseMat quadrature_jacobian(const PolygonalMesh& mesh,
                              const std::vector<LocalOperators>& ops,
                              const Eigen::VectorXd& u, const Nonlinearity& f,
                              const SparseMat& base, double theta, double dt,
                              int degree);

struct NewtonConfig {
  double tol_residual = 1e-10;  // absolute, on the euclidean residual norm
  int max_iterations = 25;
  /// Relative residual above which a linear solve counts as a breakdown.
  double linear_solver_tol = 1e-12;
};

struct NewtonReport {
  int iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
};

/// Sparse LU with symbolic analysis reused across solves with the same
/// sparsity pattern.
class SparseLuSolver {
 public:
  Eigen::VectorXd solve(const SparseMat& m, const Eigen::VectorXd& rhs);
  /// Back-substitution with the factorization from the last solve().
  Eigen::VectorXd resolve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::SparseLU<SparseMat> lu_;
  bool analyzed_ = false;
  bool factorized_ = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<SparseMat(const Eigen::VectorXd&)>;

/// Newton iteration with step halving on residual increase. Throws when the
/// iteration exceeds max_iterations without reaching the tolerance or when
/// the linear solver breaks down.
std::pair<Eigen::VectorXd, NewtonReport> newton_solve(
    const NewtonConfig& config, const ResidualFn& residual_fn,
    const JacobianFn& jacobian_fn, Eigen::VectorXd u,
    SparseLuSolver* solver = nullptr);

}  // namespace sgvem
