#include "sgvem/nonlinear.hpp"

#include <cmath>
#include <stdexcept>

#include "sgvem/quadrature.hpp"

namespace sgvem {

Nonlinearity sine_gordon() {
  return {[](double u) { return -std::sin(u); },
          [](double u) { return -std::cos(u); }, "sine_gordon"};
}

Nonlinearity quadratic() {
  return {[](double u) { return u * u; }, [](double u) { return 2.0 * u; },
          "quadratic"};
}

Nonlinearity no_reaction() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, "none"};
}

Eigen::VectorXd product_approx_load(const SparseMat& projected_mass,
                                    const Eigen::VectorXd& u,
                                    const Nonlinearity& f) {
  return projected_mass * u.unaryExpr(f.f);
}

Eigen::VectorXd residual(double gamma, double dt, double theta,
                         const GlobalSystem& sys, const Eigen::VectorXd& u_next,
                         const Eigen::VectorXd& u_mid,
                         const Eigen::VectorXd& u_prev, const Nonlinearity& f,
                         const Eigen::VectorXd& source_next,
                         const Eigen::VectorXd& source_prev) {
  const double dt2 = dt * dt;
  Eigen::VectorXd r =
      (1.0 + 0.5 * gamma * dt) * (sys.mass * u_next) +
      theta * dt2 * (sys.stiffness * u_next) -
      dt2 * theta * product_approx_load(sys.projected_mass, u_next, f) -
      2.0 * (sys.mass * u_mid) +
      (1.0 - 0.5 * gamma * dt) * (sys.mass * u_prev) +
      (1.0 - theta) * dt2 * (sys.stiffness * u_prev) -
      dt2 * (1.0 - theta) * product_approx_load(sys.projected_mass, u_prev, f);
  if (source_next.size()) r -= dt2 * theta * source_next;
  if (source_prev.size()) r -= dt2 * (1.0 - theta) * source_prev;
  return r;
}

SparseMat jacobian(double gamma, double dt, double theta,
                   const GlobalSystem& sys, const Eigen::VectorXd& u_next,
                   const Nonlinearity& f) {
  const double dt2 = dt * dt;
  const Eigen::VectorXd neg_fp = -u_next.unaryExpr(f.f_prime);
  SparseMat j = (1.0 + 0.5 * gamma * dt) * sys.mass +
                theta * dt2 * sys.stiffness;
  j += theta * dt2 * SparseMat(sys.projected_mass * neg_fp.asDiagonal());
  return j;
}

Eigen::VectorXd quadrature_load(const PolygonalMesh& mesh,
                                const std::vector<LocalOperators>& ops,
                                const Eigen::VectorXd& u, const Nonlinearity& f,
                                int degree) {
  if (ops.size() != mesh.cells.size())
    throw std::invalid_argument("quadrature_load: operator count mismatch");
  Eigen::VectorXd load = Eigen::VectorXd::Zero(u.size());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& ids = mesh.cells[c].vertex_ids;
    const int n = static_cast<int>(ids.size());
    Eigen::VectorXd u_loc(n);
    for (int i = 0; i < n; ++i) u_loc[i] = u[ids[i]];
    // Coefficients of the projected trial function in the monomial basis.
    const Eigen::Vector3d coef = ops[c].Pi_star * u_loc;
    const std::vector<Point2> poly = cell_polygon(mesh, mesh.cells[c]);
    Eigen::Vector3d moments = Eigen::Vector3d::Zero();
    for (const QuadPoint& q : polygon_quadrature(poly, ops[c].basis.centroid, degree)) {
      const auto m = eval_monomials(ops[c].basis, q.p);
      const double w = coef[0] * m[0] + coef[1] * m[1] + coef[2] * m[2];
      const double fw = q.w * f.f(w);
      moments[0] += fw * m[0];
      moments[1] += fw * m[1];
      moments[2] += fw * m[2];
    }
    const Eigen::VectorXd local = ops[c].Pi_star.transpose() * moments;
    for (int i = 0; i < n; ++i) load[ids[i]] += local[i];
  }
  return load;
}

SparseMat quadrature_jacobian(const PolygonalMesh& mesh,
                              const std::vector<LocalOperators>& ops,
                              const Eigen::VectorXd& u, const Nonlinearity& f,
                              const SparseMat& base, double theta, double dt,
                              int degree) {
  if (ops.size() != mesh.cells.size())
    throw std::invalid_argument("quadrature_jacobian: operator count mismatch");
  std::vector<Eigen::Triplet<double>> ts;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& ids = mesh.cells[c].vertex_ids;
    const int n = static_cast<int>(ids.size());
    Eigen::VectorXd u_loc(n);
    for (int i = 0; i < n; ++i) u_loc[i] = u[ids[i]];
    const Eigen::Vector3d coef = ops[c].Pi_star * u_loc;
    const std::vector<Point2> poly = cell_polygon(mesh, mesh.cells[c]);
    Eigen::Matrix3d w_mat = Eigen::Matrix3d::Zero();
    for (const QuadPoint& q : polygon_quadrature(poly, ops[c].basis.centroid, degree)) {
      const auto m = eval_monomials(ops[c].basis, q.p);
      const double w = coef[0] * m[0] + coef[1] * m[1] + coef[2] * m[2];
      const double s = -q.w * f.f_prime(w);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) w_mat(a, b) += s * m[a] * m[b];
    }
    const Eigen::MatrixXd local =
        ops[c].Pi_star.transpose() * w_mat * ops[c].Pi_star;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        ts.emplace_back(ids[a], ids[b], local(a, b));
  }
  SparseMat nl(base.rows(), base.cols());
  nl.setFromTriplets(ts.begin(), ts.end());
  return base + theta * dt * dt * nl;
}

Eigen::VectorXd SparseLuSolver::solve(const SparseMat& m,
                                      const Eigen::VectorXd& rhs) {
  if (!analyzed_) {
    lu_.analyzePattern(m);
    analyzed_ = true;
  }
  lu_.factorize(m);
  if (lu_.info() != Eigen::Success) {
    // Pattern may differ from the analyzed one; retry from scratch before
    // giving up.
    lu_.analyzePattern(m);
    lu_.factorize(m);
    if (lu_.info() != Eigen::Success)
      throw std::runtime_error("SparseLuSolver: factorization failed");
  }
  factorized_ = true;
  return lu_.solve(rhs);
}

Eigen::VectorXd SparseLuSolver::resolve(const Eigen::VectorXd& rhs) const {
  if (!factorized_)
    throw std::logic_error("SparseLuSolver::resolve before any solve");
  return lu_.solve(rhs);
}

std::pair<Eigen::VectorXd, NewtonReport> newton_solve(
    const NewtonConfig& config, const ResidualFn& residual_fn,
    const JacobianFn& jacobian_fn, Eigen::VectorXd u, SparseLuSolver* solver) {
  SparseLuSolver local_solver;
  if (!solver) solver = &local_solver;

  NewtonReport report;
  Eigen::VectorXd r = residual_fn(u);
  double rnorm = r.norm();

  while (true) {
    if (!std::isfinite(rnorm))
      throw std::runtime_error("newton_solve: residual is not finite");
    if (rnorm <= config.tol_residual) {
      report.converged = true;
      report.final_residual_norm = rnorm;
      return {std::move(u), report};
    }
    if (report.iterations >= config.max_iterations)
      throw std::runtime_error("newton_solve: no convergence in " +
                               std::to_string(config.max_iterations) +
                               " iterations (residual " + std::to_string(rnorm) + ")");

    const SparseMat j = jacobian_fn(u);
    Eigen::VectorXd delta = solver->solve(j, r);
    double linear_residual = (j * delta - r).norm();
    if (!(linear_residual <= config.linear_solver_tol * rnorm)) {
      // One step of iterative refinement with the cached factorization.
      delta += solver->resolve(r - j * delta);
      linear_residual = (j * delta - r).norm();
      if (!(linear_residual <= config.linear_solver_tol * rnorm))
        throw std::runtime_error("newton_solve: linear solver breakdown");
    }

    // Step halving keeps the residual from increasing; a full step is taken
    // whenever it already does not increase.
    double alpha = 1.0;
    Eigen::VectorXd u_trial;
    Eigen::VectorXd r_trial;
    double rnorm_trial = 0.0;
    for (int halvings = 0;; ++halvings) {
      u_trial = u - alpha * delta;
      r_trial = residual_fn(u_trial);
      rnorm_trial = r_trial.norm();
      if (rnorm_trial <= rnorm || halvings >= 30) break;
      alpha *= 0.5;
    }
    u = std::move(u_trial);
    r = std::move(r_trial);
    rnorm = rnorm_trial;
    ++report.iterations;
  }
}

}  // namespace sgvem
