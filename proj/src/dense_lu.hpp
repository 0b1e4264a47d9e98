#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace kkt_sense::detail {

// Dense LU with partial pivoting plus the diagnostics this project keys
// decisions off: the smallest/largest |U_ii| ratio (singularity test) and
// Eigen's 1-norm reciprocal condition estimate.
struct PivotedLU {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  double rcond = 1.0;

  double pivot_ratio() const {
    if (max_pivot == 0.0) return 0.0;
    return min_pivot / max_pivot;
  }

  bool singular(double rel_tol) const {
    return !std::isfinite(min_pivot) || !std::isfinite(max_pivot) ||
           pivot_ratio() < rel_tol;
  }

  /// 1-norm condition estimate (inf when the estimate degenerates).
  double condition_estimate() const {
    if (!(rcond > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / rcond;
  }
};

inline PivotedLU factor_dense(const Eigen::MatrixXd& K) {
  PivotedLU out;
  if (K.rows() == 0) {
    out.min_pivot = out.max_pivot = 1.0;
    return out;
  }
  out.lu.compute(K);
  const Eigen::VectorXd diag = out.lu.matrixLU().diagonal().cwiseAbs();
  out.min_pivot = diag.minCoeff();
  out.max_pivot = diag.maxCoeff();
  out.rcond = out.lu.rcond();
  return out;
}

}  // namespace kkt_sense::detail
