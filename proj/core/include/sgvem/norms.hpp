#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sgvem/assembly.hpp"

namespace sgvem {

/// Relative discrete L2 distance sqrt(e' M e / r' M r) between the
/// reference vector r (usually the interpolated exact solution) and the
/// approximation. Throws when the reference norm vanishes.
double relative_l2(const GlobalSystem& sys, const Eigen::VectorXd& reference,
                   const Eigen::VectorXd& approx);

/// Same with the energy matrix; throws for a (discretely) constant
/// reference, whose energy norm is zero.
double relative_h1(const GlobalSystem& sys, const Eigen::VectorXd& reference,
                   const Eigen::VectorXd& approx);

/// One refinement level of a convergence study.
struct ConvergenceRecord {
  double h = 0.0;
  double dt = 0.0;
  int dofs = 0;
  double l2_error = 0.0;
  double h1_error = 0.0;
  std::optional<double> rate_l2;
  std::optional<double> rate_h1;
  long newton_total = 0;
  /// Largest Newton iteration count over the steps of the run (the NI of a
  /// per-level comparison).
  int newton_max_step = 0;
  double wall_seconds = 0.0;
};

/// Fills rate_l2/rate_h1 between consecutive records:
///   rate = log(e_prev / e_cur) / log(m_prev / m_cur)
/// with m the refinement measure (dt when refine_in_dt, else h), which must
/// be strictly decreasing. The first record keeps empty rates.
void fill_rates(std::vector<ConvergenceRecord>& records, bool refine_in_dt);

/// Least-squares slope of log(error) against log(measure).
double fitted_rate(std::span<const double> measures, std::span<const double> errors);

}  // namespace sgvem
