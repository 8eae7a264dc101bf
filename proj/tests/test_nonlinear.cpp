#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sgvem/assembly.hpp"
#include "sgvem/mesh.hpp"
#include "sgvem/nonlinear.hpp"

using namespace sgvem;

namespace {

GlobalSystem scalar_system(double mass, double stiffness, double mbar) {
  GlobalSystem sys;
  sys.n_dofs = 1;
  sys.mass.resize(1, 1);
  sys.stiffness.resize(1, 1);
  sys.projected_mass.resize(1, 1);
  sys.mass.insert(0, 0) = mass;
  sys.stiffness.insert(0, 0) = stiffness;
  sys.projected_mass.insert(0, 0) = mbar;
  sys.interior_dofs = {0};
  return sys;
}

Eigen::VectorXd random_state(int n, unsigned seed) {
  UniformRng rng(seed);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = rng.range(-2.0, 2.0);
  return u;
}

// Largest relative column error of J against forward differences of R.
double jacobian_fd_error(const ResidualFn& residual_fn, const SparseMat& j,
                         const Eigen::VectorXd& u) {
  const double eps = 1e-6;
  const Eigen::VectorXd r0 = residual_fn(u);
  const Eigen::MatrixXd jd(j);
  double worst = 0.0;
  for (int col = 0; col < u.size(); ++col) {
    Eigen::VectorXd up = u;
    up[col] += eps;
    const Eigen::VectorXd fd = (residual_fn(up) - r0) / eps;
    const double scale = std::max(1.0, jd.col(col).norm());
    worst = std::max(worst, (fd - jd.col(col)).norm() / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("builtin_nonlinearities") {
  const Nonlinearity sg = sine_gordon();
  CHECK(sg.f(0.0) == 0.0);
  CHECK(sg.f(1.3) == doctest::Approx(-std::sin(1.3)).epsilon(1e-15));

  const Nonlinearity q = quadratic();
  CHECK(q.f(3.0) == doctest::Approx(9.0));

  const Nonlinearity none = no_reaction();
  CHECK(none.f(5.0) == 0.0);
  CHECK(none.f_prime(5.0) == 0.0);

  // Finite-difference consistency of the stored derivatives.
  const double eps = 1e-7;
  for (double u : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
    CHECK(sg.f_prime(u) ==
          doctest::Approx((sg.f(u + eps) - sg.f(u - eps)) / (2 * eps)).epsilon(1e-6));
    CHECK(q.f_prime(u) ==
          doctest::Approx((q.f(u + eps) - q.f(u - eps)) / (2 * eps)).epsilon(1e-6));
  }
}

TEST_CASE("product_approximation_load") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 25, 3, 12);
  const GlobalSystem sys = assemble(mesh);
  const int n = sys.n_dofs;

  SUBCASE("zero state gives zero load") {
    const Eigen::VectorXd load =
        product_approx_load(sys.projected_mass, Eigen::VectorXd::Zero(n),
                            sine_gordon());
    CHECK(load.norm() == 0.0);
  }

  SUBCASE("identity nonlinearity reduces to a matrix product") {
    const Nonlinearity identity{[](double u) { return u; },
                                [](double) { return 1.0; }, "identity"};
    const Eigen::VectorXd u = random_state(n, 31);
    const Eigen::VectorXd load = product_approx_load(sys.projected_mass, u, identity);
    CHECK((load - sys.projected_mass * u).norm() < 1e-14 * load.norm());
  }

  SUBCASE("constant state reduces to row sums") {
    // f(pi/2) = -1 for the pendulum nonlinearity, so the load is the
    // negative projected volume of each basis function.
    const Eigen::VectorXd u =
        Eigen::VectorXd::Constant(n, 3.14159265358979323846 / 2.0);
    const Eigen::VectorXd load = product_approx_load(sys.projected_mass, u,
                                                     sine_gordon());
    const Eigen::VectorXd expected = -(sys.projected_mass * Eigen::VectorXd::Ones(n));
    CHECK((load - expected).norm() < 1e-12);
  }

  SUBCASE("linear in the nonlinearity values") {
    const Eigen::VectorXd u = random_state(n, 32);
    const Nonlinearity combo{[](double v) { return 2.0 * -std::sin(v) + 0.5 * v * v; },
                             [](double v) { return -2.0 * std::cos(v) + v; }, "combo"};
    const Eigen::VectorXd lhs = product_approx_load(sys.projected_mass, u, combo);
    const Eigen::VectorXd rhs =
        2.0 * product_approx_load(sys.projected_mass, u, sine_gordon()) +
        0.5 * product_approx_load(sys.projected_mass, u, quadratic());
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("scalar_residual_reduction") {
  // One dof, unit mass, no stiffness: the scheme collapses to
  // R(w) = w + (dt^2/2) sin w - 2 u_mid + u_prev + (dt^2/2) sin(u_prev).
  const GlobalSystem sys = scalar_system(1.0, 0.0, 1.0);
  const double dt = 0.1;
  Eigen::VectorXd w(1), u_mid(1), u_prev(1);
  w << 0.7;
  u_mid << 0.5;
  u_prev << 0.4;

  const Eigen::VectorXd r =
      residual(0.0, dt, 0.5, sys, w, u_mid, u_prev, sine_gordon());
  const double expected = 0.7 + 0.5 * dt * dt * std::sin(0.7) - 2.0 * 0.5 + 0.4 +
                          0.5 * dt * dt * std::sin(0.4);
  CHECK(r[0] == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("residual_vanishes_at_linear_mean") {
  // f = 0 and gamma = 0: R(u_next) = M(u_next - 2u_mid + u_prev) +
  // dt^2 A (u_next + u_prev)/2; pick data in the stiffness kernel.
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 25, 3, 13);
  const GlobalSystem sys = assemble(mesh);
  const int n = sys.n_dofs;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  const Eigen::VectorXd r = residual(0.0, 0.05, 0.5, sys, 3.0 * ones, 2.0 * ones,
                                     1.0 * ones, no_reaction());
  CHECK(r.norm() < 1e-10);
}

TEST_CASE("theta_weights_in_the_residual") {
  const GlobalSystem sys = scalar_system(1.0, 2.0, 1.0);
  Eigen::VectorXd w(1), u_mid(1), u_prev(1);
  w << 1.0;
  u_mid << 0.0;
  u_prev << 0.0;
  const double dt = 0.2, gamma = 0.3;

  for (double theta : {0.0, 0.25, 0.5, 1.0}) {
    const Eigen::VectorXd r =
        residual(gamma, dt, theta, sys, w, u_mid, u_prev, no_reaction());
    const double expected = (1.0 + gamma * dt / 2.0) * 1.0 + theta * dt * dt * 2.0;
    CHECK(r[0] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("closed_form_jacobian") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 30, 3, 14);
  const GlobalSystem sys = assemble(mesh);
  const int n = sys.n_dofs;
  const double dt = 0.05, gamma = 0.1, theta = 0.5;
  const SparseMat base = (1.0 + gamma * dt / 2.0) * sys.mass +
                         theta * dt * dt * sys.stiffness;

  SUBCASE("linear nonlinearity gives a state-free matrix") {
    const Nonlinearity identity{[](double u) { return u; },
                                [](double) { return 1.0; }, "identity"};
    const SparseMat j = jacobian(gamma, dt, theta, sys, random_state(n, 41), identity);
    const SparseMat expected = base - theta * dt * dt * sys.projected_mass;
    CHECK((Eigen::MatrixXd(j) - Eigen::MatrixXd(expected)).norm() < 1e-13);
  }

  SUBCASE("pendulum linearization at zero") {
    const SparseMat j =
        jacobian(gamma, dt, theta, sys, Eigen::VectorXd::Zero(n), sine_gordon());
    const SparseMat expected = SparseMat(base) + theta * dt * dt * sys.projected_mass;
    CHECK((Eigen::MatrixXd(j) - Eigen::MatrixXd(expected)).norm() < 1e-13);
  }

  SUBCASE("positive definite for small dt") {
    const SparseMat j =
        jacobian(0.0, 0.01, 0.5, sys, random_state(n, 42), sine_gordon());
    const Eigen::MatrixXd sym =
        0.5 * (Eigen::MatrixXd(j) + Eigen::MatrixXd(j).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    CHECK(eig.eigenvalues()[0] > 0.0);
  }
}

TEST_CASE("finite_difference_jacobian_consistency") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 60, 3, 15);
  const GlobalSystem sys = assemble(mesh);
  const int n = sys.n_dofs;
  REQUIRE(n >= 100);
  const double dt = 0.02, gamma = 0.05, theta = 0.5;
  const Eigen::VectorXd u_mid = random_state(n, 51);
  const Eigen::VectorXd u_prev = random_state(n, 52);
  const auto ops = build_all_operators(mesh);

  for (const Nonlinearity& f : {sine_gordon(), quadratic()}) {
    const Eigen::VectorXd u = random_state(n, 53);

    SUBCASE(("product treatment " + f.name).c_str()) {
      const ResidualFn residual_fn = [&](const Eigen::VectorXd& w) {
        return residual(gamma, dt, theta, sys, w, u_mid, u_prev, f);
      };
      const SparseMat j = jacobian(gamma, dt, theta, sys, u, f);
      CHECK(jacobian_fd_error(residual_fn, j, u) < 1e-5);
    }

    SUBCASE(("quadrature treatment " + f.name).c_str()) {
      const SparseMat base = (1.0 + gamma * dt / 2.0) * sys.mass +
                             theta * dt * dt * sys.stiffness;
      const ResidualFn residual_fn = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd r = base * w - dt * dt * theta * quadrature_load(mesh, ops, w, f, 4);
        r -= 2.0 * (sys.mass * u_mid);
        return r;
      };
      const SparseMat j = quadrature_jacobian(mesh, ops, u, f, base, theta, dt, 4);
      CHECK(jacobian_fd_error(residual_fn, j, u) < 1e-5);
    }
  }
}

TEST_CASE("quadrature_treatment_load") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 30, 3, 16);
  const auto ops = build_all_operators(mesh);
  const GlobalSystem sys = assemble(mesh, ops);
  const int n = sys.n_dofs;

  SUBCASE("zero state") {
    const Eigen::VectorXd load =
        quadrature_load(mesh, ops, Eigen::VectorXd::Zero(n), sine_gordon(), 4);
    CHECK(load.norm() == 0.0);
  }

  SUBCASE("identity nonlinearity matches the product form exactly") {
    // Polynomial integrand, so the quadrature is not an approximation here.
    const Nonlinearity identity{[](double u) { return u; },
                                [](double) { return 1.0; }, "identity"};
    const Eigen::VectorXd u = random_state(n, 61);
    const Eigen::VectorXd a = quadrature_load(mesh, ops, u, identity, 4);
    const Eigen::VectorXd b = product_approx_load(sys.projected_mass, u, identity);
    CHECK((a - b).norm() < 1e-10 * (1.0 + b.norm()));
  }

  SUBCASE("constant state matches the product form") {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.1);
    const Eigen::VectorXd a = quadrature_load(mesh, ops, u, sine_gordon(), 4);
    const Eigen::VectorXd b =
        product_approx_load(sys.projected_mass, u, sine_gordon());
    CHECK((a - b).norm() < 1e-10);
  }

  SUBCASE("jacobian at zero matches the closed form") {
    const double dt = 0.05, theta = 0.5;
    const SparseMat base = sys.mass + theta * dt * dt * sys.stiffness;
    const SparseMat jq = quadrature_jacobian(mesh, ops, Eigen::VectorXd::Zero(n),
                                             sine_gordon(), base, theta, dt, 4);
    const SparseMat jp =
        jacobian(0.0, dt, theta, sys, Eigen::VectorXd::Zero(n), sine_gordon());
    CHECK((Eigen::MatrixXd(jq) - Eigen::MatrixXd(jp)).norm() < 1e-10);
  }
}

TEST_CASE("newton_iteration") {
  SUBCASE("linear problem converges in one step") {
    const GlobalSystem sys = scalar_system(1.0, 4.0, 1.0);
    const SparseMat j = jacobian(0.0, 0.1, 0.5, sys, Eigen::VectorXd::Zero(1),
                                 no_reaction());
    const ResidualFn r = [&](const Eigen::VectorXd& w) {
      return Eigen::VectorXd(j * w - Eigen::VectorXd::Constant(1, 2.0));
    };
    const JacobianFn jf = [&](const Eigen::VectorXd&) { return j; };
    const auto [u, report] =
        newton_solve(NewtonConfig{}, r, jf, Eigen::VectorXd::Zero(1));
    CHECK(report.converged);
    CHECK(report.iterations == 1);
    CHECK(report.final_residual_norm <= NewtonConfig{}.tol_residual);
  }

  SUBCASE("pendulum step converges quadratically from a cold start") {
    const GlobalSystem sys = scalar_system(1.0, 0.0, 1.0);
    const double dt = 0.5;
    Eigen::VectorXd u_mid(1), u_prev(1);
    u_mid << 2.0;
    u_prev << 1.0;
    const ResidualFn rf = [&](const Eigen::VectorXd& w) {
      return residual(0.0, dt, 0.5, sys, w, u_mid, u_prev, sine_gordon());
    };
    const JacobianFn jf = [&](const Eigen::VectorXd& w) {
      return jacobian(0.0, dt, 0.5, sys, w, sine_gordon());
    };

    // Track the residual decay by hand from a far-off start.
    SparseLuSolver solver;
    Eigen::VectorXd w = Eigen::VectorXd::Constant(1, -1.0);
    std::vector<double> norms;
    for (int it = 0; it < 8; ++it) {
      const Eigen::VectorXd r = rf(w);
      norms.push_back(r.norm());
      if (r.norm() < 1e-14) break;
      w -= solver.solve(jf(w), r);
    }
    REQUIRE(norms.size() >= 3);
    for (std::size_t k = 0; k + 1 < norms.size(); ++k) {
      // Quadratic contraction until the iterates hit the roundoff floor.
      if (norms[k] < 1e-2 && norms[k + 1] > 1e-14)
        CHECK(norms[k + 1] <= 10.0 * norms[k] * norms[k]);
    }

    const auto [u, report] =
        newton_solve(NewtonConfig{}, rf, jf, Eigen::VectorXd::Constant(1, -1.0));
    CHECK(report.converged);
    CHECK(report.final_residual_norm <= 1e-10);
  }

  SUBCASE("iteration budget overrun throws") {
    // Residual with no zero: R(w) = 1 + w^2, J = 2w.
    const ResidualFn rf = [](const Eigen::VectorXd& w) {
      return Eigen::VectorXd::Constant(1, 1.0 + w[0] * w[0]).eval();
    };
    const JacobianFn jf = [](const Eigen::VectorXd& w) {
      SparseMat j(1, 1);
      j.insert(0, 0) = 2.0 * w[0] + 1e-3;
      return j;
    };
    NewtonConfig cfg;
    cfg.max_iterations = 5;
    CHECK_THROWS(newton_solve(cfg, rf, jf, Eigen::VectorXd::Constant(1, 3.0)));
  }
}

TEST_CASE("treatments_agree_on_linear_data") {
  const PolygonalMesh mesh = generate_voronoi(Rect{}, 30, 3, 17);
  const auto ops = build_all_operators(mesh);
  const GlobalSystem sys = assemble(mesh, ops);
  const Nonlinearity identity{[](double u) { return u; },
                              [](double) { return 1.0; }, "identity"};
  const Eigen::VectorXd u =
      interpolate(mesh, [](double x, double y) { return 1.0 + 2.0 * x - y; });

  const Eigen::VectorXd a = product_approx_load(sys.projected_mass, u, identity);
  const Eigen::VectorXd b = quadrature_load(mesh, ops, u, identity, 4);
  CHECK((a - b).norm() < 1e-10);
}
