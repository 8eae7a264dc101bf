#include "sgvem/local_ops.hpp"

#include <stdexcept>
#include <vector>

#include "sgvem/quadrature.hpp"

namespace sgvem {

std::array<double, 3> eval_monomials(const ScaledMonomialBasis& basis, Point2 p) {
  const double inv_h = 1.0 / basis.diameter;
  return {1.0, (p.x - basis.centroid.x) * inv_h, (p.y - basis.centroid.y) * inv_h};
}

std::array<Point2, 3> monomial_gradients(const ScaledMonomialBasis& basis) {
  const double inv_h = 1.0 / basis.diameter;
  return {Point2{0.0, 0.0}, Point2{inv_h, 0.0}, Point2{0.0, inv_h}};
}

LocalOperators build_operators(std::span<const Point2> polygon) {
  const int n = static_cast<int>(polygon.size());
  if (n < 3) throw std::invalid_argument("build_operators: fewer than 3 vertices");

  const double area = polygon_signed_area(polygon);
  if (!(area > 0.0))
    throw std::invalid_argument("build_operators: polygon not counterclockwise");

  LocalOperators ops;
  ops.area = area;
  ops.basis.centroid = polygon_centroid(polygon, area);
  ops.basis.diameter = polygon_diameter(polygon);

  ops.D.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const auto m = eval_monomials(ops.basis, polygon[i]);
    ops.D(i, 0) = m[0];
    ops.D(i, 1) = m[1];
    ops.D(i, 2) = m[2];
  }

  // Edge lengths and outward normals; the monomial gradients are constant,
  // so the boundary pairing reduces to trapezoidal edge sums that are exact
  // for the linear trace.
  std::vector<double> edge_len(n);
  std::vector<Point2> edge_nrm(n);
  double perimeter = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    const Point2 d = b - a;
    const double len = norm(d);
    if (!(len > 0.0)) throw std::invalid_argument("build_operators: zero-length edge");
    edge_len[i] = len;
    edge_nrm[i] = {d.y / len, -d.x / len};
    perimeter += len;
  }

  const auto grads = monomial_gradients(ops.basis);
  ops.B.setZero(3, n);
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    ops.B(0, i) = (edge_len[prev] + edge_len[i]) / (2.0 * perimeter);
    for (int alpha = 1; alpha < 3; ++alpha) {
      ops.B(alpha, i) += 0.5 * edge_len[prev] * dot(grads[alpha], edge_nrm[prev]);
      ops.B(alpha, i) += 0.5 * edge_len[i] * dot(grads[alpha], edge_nrm[i]);
    }
  }

  ops.G = ops.B * ops.D;
  ops.Gtilde = ops.G;
  ops.Gtilde.row(0).setZero();

  Eigen::FullPivLU<Eigen::Matrix3d> lu(ops.G);
  if (!lu.isInvertible())
    throw std::runtime_error("build_operators: singular projector Gram matrix (degenerate cell)");
  ops.Pi_star = lu.solve(ops.B);
  ops.Pi = ops.D * ops.Pi_star;

  ops.H.setZero();
  const std::vector<Point2> pts(polygon.begin(), polygon.end());
  for (const QuadPoint& q : polygon_quadrature(pts, ops.basis.centroid, 2)) {
    const auto m = eval_monomials(ops.basis, q.p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) ops.H(a, b) += q.w * m[a] * m[b];
  }
  return ops;
}

LocalOperators build_operators(const PolygonalMesh& mesh, const PolygonCell& cell) {
  return build_operators(cell_polygon(mesh, cell));
}

Eigen::MatrixXd local_stiffness(const LocalOperators& ops) {
  const int n = ops.n_dofs();
  const Eigen::MatrixXd complement =
      Eigen::MatrixXd::Identity(n, n) - ops.Pi;
  return ops.Pi_star.transpose() * ops.Gtilde * ops.Pi_star +
         complement.transpose() * complement;
}

Eigen::MatrixXd local_projected_mass(const LocalOperators& ops) {
  return ops.Pi_star.transpose() * ops.H * ops.Pi_star;
}

Eigen::MatrixXd local_mass(const LocalOperators& ops) {
  const int n = ops.n_dofs();
  const Eigen::MatrixXd complement =
      Eigen::MatrixXd::Identity(n, n) - ops.Pi;
  return local_projected_mass(ops) +
         ops.area * complement.transpose() * complement;
}

}  // namespace sgvem
