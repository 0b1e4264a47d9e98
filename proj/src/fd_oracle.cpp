#include "kkt_sense/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::MatrixXd fd_jacobian(const SmoothProgram& prog, const VectorXd& theta,
                            const SolverConfig& config, double step,
                            const std::optional<Solution>& base,
                            std::vector<int>* failures) {
  if (theta.size() != prog.d) {
    throw DimensionError("theta", "expected length " + std::to_string(prog.d) + ", got " +
                                      std::to_string(theta.size()));
  }
  if (!(step > 0.0)) throw Error("fd_jacobian: step must be positive");

  Solution center;
  if (base) {
    center = *base;
  } else {
    center = solve(prog, theta, config);
  }
  const std::optional<PrimalDualPoint> warm =
      center.converged ? std::optional<PrimalDualPoint>(center.point) : std::nullopt;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  MatrixXd jac = MatrixXd::Constant(prog.n, prog.d, nan);
  SolverConfig inner = config;
  inner.iteration_callback = nullptr;  // 2d re-solves, keep them quiet

  for (int k = 0; k < prog.d; ++k) {
    const double h = step * (1.0 + std::abs(theta[k]));
    VectorXd theta_plus = theta, theta_minus = theta;
    theta_plus[k] += h;
    theta_minus[k] -= h;

    const Solution plus = solve(prog, theta_plus, inner, warm);
    const Solution minus = solve(prog, theta_minus, inner, warm);
    if (!plus.converged || !minus.converged) {
      if (failures) failures->push_back(k);
      continue;  // column left missing, not zero-filled
    }
    jac.col(k) = (plus.point.x - minus.point.x) / (2.0 * h);
  }
  return jac;
}

FDReport fd_compare(const MatrixXd& analytic, const MatrixXd& fd,
                    const std::vector<int>& failed_columns) {
  if (analytic.rows() != fd.rows() || analytic.cols() != fd.cols()) {
    throw DimensionError("fd", "shape mismatch: analytic is " +
                                   std::to_string(analytic.rows()) + "x" +
                                   std::to_string(analytic.cols()) + ", fd is " +
                                   std::to_string(fd.rows()) + "x" +
                                   std::to_string(fd.cols()));
  }
  FDReport report;
  report.jac_fd = fd;
  report.per_column_solve_failures = failed_columns;
  for (int c = 0; c < analytic.cols(); ++c) {
    if (std::find(failed_columns.begin(), failed_columns.end(), c) != failed_columns.end()) {
      continue;
    }
    for (int r = 0; r < analytic.rows(); ++r) {
      const double a = analytic(r, c);
      const double err = std::abs(a - fd(r, c)) / (1.0 + std::abs(a));
      if (err > report.max_rel_err) {
        report.max_rel_err = err;
        report.worst_row = r;
        report.worst_col = c;
      }
    }
  }
  return report;
}

}  // namespace kkt_sense
