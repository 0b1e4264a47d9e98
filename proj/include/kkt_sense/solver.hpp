#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "kkt_sense/kkt.hpp"
#include "kkt_sense/program.hpp"

namespace kkt_sense {

struct SolverConfig {
  double tol = 1e-9;         ///< KKT inf-norm target
  int max_iters = 100;
  double barrier_decrease = 0.1;      ///< sigma in (0,1)
  double fraction_to_boundary = 0.99; ///< tau in (0,1)
  double init_slack = 1.0;            ///< slack targeted by the phase-0 push

  /// Optional per-iteration observer (iter, iterate, mu, kkt_norm).
  std::function<void(int, const PrimalDualPoint&, double, double)> iteration_callback;

  void validate() const;  // throws Error on out-of-range values
};

enum class SolveStatus {
  Converged,
  MaxIters,           ///< best iterate returned, converged = false
  LinearSolveFailure, ///< Newton system singular; likely nonconvex or degenerate input
  Diverged,           ///< iterate inf-norm exceeded 1e12
};

const char* to_string(SolveStatus status);

/// Converged (or best-effort) primal/dual point with solver metadata.
/// When converged: kkt_norm <= tol, the point passes check_kkt at 10*tol,
/// and lambda >= 0 exactly.
struct Solution {
  PrimalDualPoint point;
  double optimal_value = 0.0;  ///< f0(x, theta)
  double kkt_norm = 0.0;
  int iters = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIters;
  DegeneracyReport degeneracy;
  std::string message;  ///< diagnostic detail for non-converged outcomes
};

/// Newton step for the mu-perturbed KKT system: solves
///   D_z g(z, theta) * delta = -g_mu(z, theta)
/// where g_mu equals g with complementarity block lambda_i f_i + mu.
/// Requires lambda > 0 and -f(x, theta) > 0 strictly for the system to be
/// meaningful. Throws Error on a singular system.
PrimalDualPoint newton_step(const SmoothProgram& prog, const PrimalDualPoint& z,
                            const Eigen::VectorXd& theta, double mu);

/// Primal-dual interior-point solve of the smooth program at theta.
/// Infeasible start on the equalities; inequality interior is restored by a
/// phase-0 push and then maintained by fraction-to-boundary step clipping.
/// Each call owns its workspace; concurrent solves on a shared immutable
/// program are safe.
Solution solve(const SmoothProgram& prog, const Eigen::VectorXd& theta,
               const SolverConfig& config = {},
               const std::optional<PrimalDualPoint>& warm_start = std::nullopt);

}  // namespace kkt_sense
