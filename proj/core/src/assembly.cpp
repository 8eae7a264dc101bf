#include "sgvem/assembly.hpp"

#include <stdexcept>
#include <string>

namespace sgvem {

std::vector<LocalOperators> build_all_operators(const PolygonalMesh& mesh) {
  std::vector<LocalOperators> ops;
  ops.reserve(mesh.cells.size());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    try {
      ops.push_back(build_operators(mesh, mesh.cells[c]));
    } catch (const std::exception& e) {
      throw std::runtime_error("build_all_operators: cell " + std::to_string(c) +
                               ": " + e.what());
    }
  }
  return ops;
}

GlobalSystem assemble(const PolygonalMesh& mesh,
                      const std::vector<LocalOperators>& ops) {
  if (ops.size() != mesh.cells.size())
    throw std::invalid_argument("assemble: operator count does not match cell count");

  GlobalSystem sys;
  sys.n_dofs = mesh.n_vertices();

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> ts, tm, tmbar;
  std::size_t nnz_guess = 0;
  for (const PolygonCell& cell : mesh.cells)
    nnz_guess += cell.vertex_ids.size() * cell.vertex_ids.size();
  ts.reserve(nnz_guess);
  tm.reserve(nnz_guess);
  tmbar.reserve(nnz_guess);

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& ids = mesh.cells[c].vertex_ids;
    const int n = static_cast<int>(ids.size());
    const Eigen::MatrixXd k = local_stiffness(ops[c]);
    const Eigen::MatrixXd mbar = local_projected_mass(ops[c]);
    const Eigen::MatrixXd m =
        mbar + ops[c].area *
                   (Eigen::MatrixXd::Identity(n, n) - ops[c].Pi).transpose() *
                   (Eigen::MatrixXd::Identity(n, n) - ops[c].Pi);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        ts.emplace_back(ids[a], ids[b], k(a, b));
        tm.emplace_back(ids[a], ids[b], m(a, b));
        tmbar.emplace_back(ids[a], ids[b], mbar(a, b));
      }
    }
  }

  sys.stiffness.resize(sys.n_dofs, sys.n_dofs);
  sys.mass.resize(sys.n_dofs, sys.n_dofs);
  sys.projected_mass.resize(sys.n_dofs, sys.n_dofs);
  sys.stiffness.setFromTriplets(ts.begin(), ts.end());
  sys.mass.setFromTriplets(tm.begin(), tm.end());
  sys.projected_mass.setFromTriplets(tmbar.begin(), tmbar.end());

  for (int v = 0; v < sys.n_dofs; ++v) {
    if (mesh.boundary_flags[v])
      sys.boundary_dofs.push_back(v);
    else
      sys.interior_dofs.push_back(v);
  }
  return sys;
}

GlobalSystem assemble(const PolygonalMesh& mesh) {
  return assemble(mesh, build_all_operators(mesh));
}

Eigen::VectorXd interpolate(const PolygonalMesh& mesh, const ScalarField& f) {
  Eigen::VectorXd u(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    u[v] = f(mesh.vertices[v].x, mesh.vertices[v].y);
  return u;
}

DirichletView apply_dirichlet(const GlobalSystem& system,
                              const PolygonalMesh& mesh,
                              const BoundaryData& boundary, double t) {
  DirichletView view;
  view.lift = Eigen::VectorXd::Zero(system.n_dofs);
  if (boundary.kind == BoundaryKind::neumann) {
    view.free_dofs.resize(system.n_dofs);
    for (int v = 0; v < system.n_dofs; ++v) view.free_dofs[v] = v;
    return view;
  }
  view.free_dofs = system.interior_dofs;
  if (boundary.trace) {
    for (int v : system.boundary_dofs)
      view.lift[v] = boundary.trace(mesh.vertices[v].x, mesh.vertices[v].y, t);
  }
  return view;
}

SparseMat gather_matrix(const SparseMat& m, const std::vector<int>& dofs) {
  std::vector<int> place(m.rows(), -1);
  for (std::size_t i = 0; i < dofs.size(); ++i) place[dofs[i]] = static_cast<int>(i);

  std::vector<Eigen::Triplet<double>> ts;
  ts.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int col = 0; col < m.outerSize(); ++col) {
    const int pc = place[col];
    if (pc < 0) continue;
    for (SparseMat::InnerIterator it(m, col); it; ++it) {
      const int pr = place[it.row()];
      if (pr >= 0) ts.emplace_back(pr, pc, it.value());
    }
  }
  SparseMat out(static_cast<int>(dofs.size()), static_cast<int>(dofs.size()));
  out.setFromTriplets(ts.begin(), ts.end());
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& dofs) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[dofs[i]];
  return out;
}

void scatter_into(Eigen::VectorXd& full, const Eigen::VectorXd& values,
                  const std::vector<int>& dofs) {
  if (values.size() != static_cast<Eigen::Index>(dofs.size()))
    throw std::invalid_argument("scatter_into: size mismatch");
  for (std::size_t i = 0; i < dofs.size(); ++i)
    full[dofs[i]] = values[static_cast<Eigen::Index>(i)];
}

}  // namespace sgvem
