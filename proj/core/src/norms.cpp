#include "sgvem/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace sgvem {

namespace {

double relative_error(const SparseMat& form, const Eigen::VectorXd& reference,
                      const Eigen::VectorXd& approx, const char* what) {
  if (reference.size() != approx.size() || reference.size() != form.rows())
    throw std::invalid_argument(std::string(what) + ": size mismatch");
  const Eigen::VectorXd e = reference - approx;
  const double num = e.dot(form * e);
  const double den = reference.dot(form * reference);
  if (!(den > 0.0))
    throw std::domain_error(std::string(what) +
                            ": reference norm vanishes (zero denominator)");
  return std::sqrt(std::max(num, 0.0) / den);
}

}  // namespace

double relative_l2(const GlobalSystem& sys, const Eigen::VectorXd& reference,
                   const Eigen::VectorXd& approx) {
  return relative_error(sys.mass, reference, approx, "relative_l2");
}

double relative_h1(const GlobalSystem& sys, const Eigen::VectorXd& reference,
                   const Eigen::VectorXd& approx) {
  return relative_error(sys.stiffness, reference, approx, "relative_h1");
}

void fill_rates(std::vector<ConvergenceRecord>& records, bool refine_in_dt) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double m_prev = refine_in_dt ? records[i - 1].dt : records[i - 1].h;
    const double m_cur = refine_in_dt ? records[i].dt : records[i].h;
    if (!(m_prev > m_cur))
      throw std::invalid_argument("fill_rates: refinement measure must decrease");
    const double denom = std::log(m_prev / m_cur);
    if (records[i - 1].l2_error > 0.0 && records[i].l2_error > 0.0)
      records[i].rate_l2 = std::log(records[i - 1].l2_error / records[i].l2_error) / denom;
    if (records[i - 1].h1_error > 0.0 && records[i].h1_error > 0.0)
      records[i].rate_h1 = std::log(records[i - 1].h1_error / records[i].h1_error) / denom;
  }
}

double fitted_rate(std::span<const double> measures, std::span<const double> errors) {
  if (measures.size() != errors.size() || measures.size() < 2)
    throw std::invalid_argument("fitted_rate: need at least two matching points");
  const std::size_t n = measures.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(measures[i] > 0.0) || !(errors[i] > 0.0))
      throw std::invalid_argument("fitted_rate: measures and errors must be positive");
    xs[i] = std::log(measures[i]);
    ys[i] = std::log(errors[i]);
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fitted_rate: degenerate measures");
  return sxy / sxx;
}

}  // namespace sgvem
