#pragma once

#include <Eigen/Core>

#include "kkt_sense/kkt.hpp"
#include "kkt_sense/program.hpp"
#include "kkt_sense/solver.hpp"

namespace kkt_sense {

/// Jacobian of the primal/dual solution with respect to theta, obtained by
/// solving D_z g * J = -D_theta g at the solution with one LU factorization.
///
/// When strict complementarity fails the Jacobian is still returned (it may
/// be a one-sided derivative) with hypotheses_ok = false; it is flagged,
/// never silently trusted.
struct SensitivityResult {
  Eigen::MatrixXd jac_x;       ///< n x d, D_theta x
  Eigen::MatrixXd jac_lambda;  ///< m x d
  Eigen::MatrixXd jac_nu;      ///< p x d
  double condition_estimate = 0.0;  ///< 1-norm condition estimate of D_z g
  DegeneracyReport degeneracy;
  bool hypotheses_ok = false;  ///< strictly complementary, factorization fine, KKT residual <= tol
  double linear_residual = 0.0;  ///< ||K*J + R||_inf of the returned Jacobian
  int factorization_count = 0;   ///< factorizations performed by this call (always 1)
};

/// Single-direction sensitivity d/dt of (x, lambda, nu) along theta + t*v.
struct DirectionalSensitivity {
  Eigen::VectorXd dx;
  Eigen::VectorXd dlambda;
  Eigen::VectorXd dnu;
  double condition_estimate = 0.0;
  DegeneracyReport degeneracy;
  bool hypotheses_ok = false;
};

/// Full solution Jacobian at a converged solution. Factors D_z g once and
/// back-solves all d columns of -D_theta g against that factorization.
///
/// Throws NotConvergedError if sol did not converge, and SingularMatrixError
/// if the LU pivot ratio of D_z g falls below 1e-12 of the largest pivot
/// (the implicit-function nonsingularity hypothesis fails).
SensitivityResult solution_jacobian(const SmoothProgram& prog, const Solution& sol,
                                    const Eigen::VectorXd& theta, double tol);

/// Sensitivity along a single parameter direction, computed with one
/// back-solve instead of d.
DirectionalSensitivity directional_sensitivity(const SmoothProgram& prog,
                                               const Solution& sol,
                                               const Eigen::VectorXd& theta,
                                               const Eigen::VectorXd& direction,
                                               double tol);

}  // namespace kkt_sense
