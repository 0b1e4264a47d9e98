#pragma once

#include <vector>

#include <Eigen/Core>

#include "kkt_sense/program.hpp"

namespace kkt_sense {

/// The KKT residual g(z, theta) split into its three blocks.
struct KKTResidual {
  Eigen::VectorXd stationarity;     ///< grad_x L, n rows
  Eigen::VectorXd complementarity;  ///< diag(lambda) f(x, theta), m rows
  Eigen::VectorXd primal_eq;        ///< h(x, theta), p rows
  double norm_inf = 0.0;            ///< max |entry| across the three blocks

  Eigen::VectorXd stacked() const;
};

/// Activity pattern of the inequality constraints at a candidate point.
/// `weakly_active` is the set G of constraints that are active with a
/// vanishing multiplier; the solution map may be nondifferentiable when
/// it is nonempty.
struct DegeneracyReport {
  std::vector<int> active_set;     ///< { i : |f_i| <= tol_act }
  std::vector<int> weakly_active;  ///< { i : |f_i| <= tol_act and lambda_i <= tol_act }
  bool strictly_complementary = true;  ///< weakly_active empty
};

/// Result of check_kkt. `satisfied` requires the residual, inequality
/// feasibility, and dual nonnegativity to all hold at tol; a zero residual
/// alone is not optimality (g has spurious roots at infeasible points).
struct KKTCheck {
  bool satisfied = false;
  KKTResidual residual;
  double ineq_violation = 0.0;  ///< max(0, max_i f_i)
  double dual_violation = 0.0;  ///< max(0, -min_i lambda_i)
  DegeneracyReport degeneracy;
  bool h_affine_ok = true;  ///< jac_h_x agreed at two spot-check points
};

/// grad_x f0 + jac_f_x' lambda + jac_h_x' nu.
Eigen::VectorXd eval_lagrangian_grad(const SmoothProgram& prog,
                                     const PrimalDualPoint& z,
                                     const Eigen::VectorXd& theta);

/// The residual g(z, theta) = [grad_x L; diag(lambda) f; h]. No feasibility
/// filtering is applied here; see check_kkt.
KKTResidual assemble_residual(const SmoothProgram& prog, const PrimalDualPoint& z,
                              const Eigen::VectorXd& theta);

/// The partial Jacobian D_z g, an (n+m+p) x (n+m+p) dense matrix:
///
///   [ hess_f0 + sum_i lambda_i hess_f_i   jac_f_x'   jac_h_x' ]
///   [ diag(lambda) jac_f_x                diag(f)    0        ]
///   [ jac_h_x                             0          0        ]
///
/// Generally nonsymmetric.
Eigen::MatrixXd assemble_kkt_jacobian(const SmoothProgram& prog,
                                      const PrimalDualPoint& z,
                                      const Eigen::VectorXd& theta);

/// The partial Jacobian D_theta g, (n+m+p) x d, row blocks
/// [ D_theta grad_x L; diag(lambda) D_theta f; D_theta h ].
Eigen::MatrixXd assemble_param_jacobian(const SmoothProgram& prog,
                                        const PrimalDualPoint& z,
                                        const Eigen::VectorXd& theta);

/// Full KKT check at tolerance tol: residual inf-norm <= tol, max f_i <= tol,
/// min lambda_i >= -tol. The activity report uses tol_act = sqrt(tol), which
/// is the scale at which interior-point iterates resolve weak activity.
/// Reports rather than throws on numerical badness.
KKTCheck check_kkt(const SmoothProgram& prog, const PrimalDualPoint& z,
                   const Eigen::VectorXd& theta, double tol);

/// Activity classification alone (same tol_act convention as check_kkt,
/// applied to precomputed f values).
DegeneracyReport classify_activity(const Eigen::VectorXd& f_values,
                                   const Eigen::VectorXd& lambda, double tol_act);

/// Closed-form D_z g for a ParamQP:
///   [ Q           G'            A' ]
///   [ diag(lambda) G   diag(Gx - h)  0 ]
///   [ A           0             0  ]
Eigen::MatrixXd qp_kkt_jacobian(const ParamQP& prog, const PrimalDualPoint& z,
                                const Eigen::VectorXd& theta);

/// Closed-form D_theta g for a ParamQP; column k is
/// [ Qk x + qk + Gk' lambda + Ak' nu; diag(lambda)(Gk x - hk); Ak x - bk ].
Eigen::MatrixXd qp_param_jacobian(const ParamQP& prog, const PrimalDualPoint& z,
                                  const Eigen::VectorXd& theta);

}  // namespace kkt_sense
