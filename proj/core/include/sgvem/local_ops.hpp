#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>

#include "sgvem/mesh.hpp"

namespace sgvem {

/// Scaled monomial basis on one cell:
///   m1 = 1, m2 = (x - xc)/h, m3 = (y - yc)/h
/// with (xc, yc) the cell centroid and h the cell diameter.
struct ScaledMonomialBasis {
  Point2 centroid{};
  double diameter = 1.0;
};

std::array<double, 3> eval_monomials(const ScaledMonomialBasis& basis, Point2 p);

/// Gradients of the scaled monomials (constant on the cell).
std::array<Point2, 3> monomial_gradients(const ScaledMonomialBasis& basis);

/// Projection machinery of the lowest-order virtual element on one cell.
/// With N vertex degrees of freedom:
///   D  (N x 3)  monomials evaluated at the dofs,
///   B  (3 x N)  boundary integrals pairing dofs with monomials; its first
///               row carries the vertex-averaging constraint that fixes the
///               kernel of the energy projector,
///   G = B * D   (3 x 3) projector Gram matrix,
///   Gtilde      G with the constraint row zeroed (pure energy pairing),
///   H  (3 x 3)  monomial mass matrix,
///   Pi_star = G^{-1} B   (3 x N) energy projection onto linears,
///   Pi = D * Pi_star     (N x N) the same projection in the dof basis.
struct LocalOperators {
  ScaledMonomialBasis basis;
  double area = 0.0;
  Eigen::MatrixXd D;
  Eigen::MatrixXd B;
  Eigen::Matrix3d G;
  Eigen::Matrix3d Gtilde;
  Eigen::Matrix3d H;
  Eigen::MatrixXd Pi_star;
  Eigen::MatrixXd Pi;

  int n_dofs() const { return static_cast<int>(D.rows()); }
};

/// Builds the local operators from the cell polygon (counterclockwise).
/// Throws if the projector Gram matrix is singular (degenerate cell).
LocalOperators build_operators(std::span<const Point2> polygon);
LocalOperators build_operators(const PolygonalMesh& mesh, const PolygonCell& cell);

/// Stiffness: consistency term through the energy projection plus the
/// dofi-dofi stabilization of the projector complement.
Eigen::MatrixXd local_stiffness(const LocalOperators& ops);

/// Mass from the projection alone (no stabilization); multiplying vertex
/// values of f(u) by the assembled version of this matrix realizes the
/// product approximation of the nonlinear term.
Eigen::MatrixXd local_projected_mass(const LocalOperators& ops);

/// Full mass: projected part plus area-scaled dofi-dofi stabilization.
Eigen::MatrixXd local_mass(const LocalOperators& ops);

}  // namespace sgvem
