#pragma once

#include <vector>

#include <Eigen/Core>

#include "kkt_sense/program.hpp"
#include "kkt_sense/solver.hpp"

namespace kkt_sense {

/// Comparison of an analytic Jacobian against its finite-difference
/// counterpart. max_rel_err = max |a - b| / (1 + |a|) over entries whose FD
/// column was actually solved.
struct FDReport {
  Eigen::MatrixXd jac_fd;
  double max_rel_err = 0.0;
  int worst_row = -1;
  int worst_col = -1;
  std::vector<int> per_column_solve_failures;
};

/// Central finite-difference Jacobian of the optimal x with respect to
/// theta, by full re-solves at theta +- h_k e_k with h_k = step*(1+|theta_k|).
/// Each perturbed solve is warm-started from `base` (or from a fresh solve
/// at theta when absent). Columns whose perturbed solves fail are recorded
/// in `failures` (when given) and left as NaN, not zero-filled.
Eigen::MatrixXd fd_jacobian(const SmoothProgram& prog, const Eigen::VectorXd& theta,
                            const SolverConfig& config, double step = 1e-5,
                            const std::optional<Solution>& base = std::nullopt,
                            std::vector<int>* failures = nullptr);

/// Entrywise comparison; skips columns listed in `failed_columns`.
FDReport fd_compare(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& fd,
                    const std::vector<int>& failed_columns = {});

}  // namespace kkt_sense
