#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "sgvem/local_ops.hpp"
#include "sgvem/mesh.hpp"

namespace sgvem {

using SparseMat = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(double, double)>;
using TimeScalarField = std::function<double(double, double, double)>;

/// Assembled global matrices; one degree of freedom per mesh vertex.
struct GlobalSystem {
  SparseMat stiffness;       // energy bilinear form with stabilization
  SparseMat mass;            // L2 bilinear form with stabilization
  SparseMat projected_mass;  // projection-only mass, drives the product
                             // approximation of nonlinear terms
  std::vector<int> interior_dofs;
  std::vector<int> boundary_dofs;
  int n_dofs = 0;
};

/// Local projection operators for every cell, in cell order.
std::vector<LocalOperators> build_all_operators(const PolygonalMesh& mesh);

GlobalSystem assemble(const PolygonalMesh& mesh,
                      const std::vector<LocalOperators>& ops);
GlobalSystem assemble(const PolygonalMesh& mesh);

/// Vertex interpolant (the canonical dof interpolation at lowest order).
Eigen::VectorXd interpolate(const PolygonalMesh& mesh, const ScalarField& f);

enum class BoundaryKind { dirichlet, neumann };

struct BoundaryData {
  BoundaryKind kind = BoundaryKind::dirichlet;
  /// Boundary values (x, y, t); used only for Dirichlet data. An empty
  /// function means homogeneous.
  TimeScalarField trace;
};

/// Constraint view of the system at time t. For Dirichlet data the free
/// dofs are the interior ones and `lift` holds the boundary trace (zero at
/// interior dofs); Neumann data is natural, so every dof is free and the
/// lift is zero.
struct DirichletView {
  std::vector<int> free_dofs;
  Eigen::VectorXd lift;
};

DirichletView apply_dirichlet(const GlobalSystem& system,
                              const PolygonalMesh& mesh,
                              const BoundaryData& boundary, double t);

/// Square submatrix on the given dofs (in order).
SparseMat gather_matrix(const SparseMat& m, const std::vector<int>& dofs);
Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& dofs);
void scatter_into(Eigen::VectorXd& full, const Eigen::VectorXd& values,
                  const std::vector<int>& dofs);

}  // namespace sgvem
