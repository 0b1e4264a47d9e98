#include "kkt_sense/sensitivity.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "dense_lu.hpp"
#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kSingularPivotTol = 1e-12;

struct FactoredSystem {
  detail::PivotedLU lu;
  MatrixXd kkt_jac;    // K = D_z g
  MatrixXd param_jac;  // R = D_theta g
  KKTCheck check;
  int factorizations = 0;
};

// Shared preamble: validate the solution, assemble K and R, factor K once.
FactoredSystem prepare(const SmoothProgram& prog, const Solution& sol,
                       const VectorXd& theta, double tol) {
  if (!sol.converged) {
    throw NotConvergedError("sensitivity: solver did not converge (status " +
                            std::string(to_string(sol.status)) + ")");
  }
  FactoredSystem sys;
  sys.check = check_kkt(prog, sol.point, theta, tol);
  sys.kkt_jac = assemble_kkt_jacobian(prog, sol.point, theta);
  sys.param_jac = assemble_param_jacobian(prog, sol.point, theta);
  sys.lu = detail::factor_dense(sys.kkt_jac);
  sys.factorizations = 1;
  if (sys.lu.singular(kSingularPivotTol)) {
    throw SingularMatrixError(
        "sensitivity: D_z g is singular at the solution (pivot ratio " +
        std::to_string(sys.lu.pivot_ratio()) +
        "); the implicit-function Jacobian is not defined");
  }
  return sys;
}

}  // namespace

SensitivityResult solution_jacobian(const SmoothProgram& prog, const Solution& sol,
                                    const VectorXd& theta, double tol) {
  const int n = prog.n, m = prog.m, p = prog.p, d = prog.d;
  FactoredSystem sys = prepare(prog, sol, theta, tol);

  // all d right-hand sides against the single factorization
  const MatrixXd J = sys.lu.lu.solve(-sys.param_jac);
  if (!J.allFinite()) {
    throw SingularMatrixError("solution_jacobian: back-solve produced non-finite values");
  }

  SensitivityResult out;
  out.jac_x = J.topRows(n);
  out.jac_lambda = J.middleRows(n, m);
  out.jac_nu = J.bottomRows(p);
  out.condition_estimate = sys.lu.condition_estimate();
  out.degeneracy = sys.check.degeneracy;
  out.factorization_count = sys.factorizations;
  out.hypotheses_ok = sys.check.degeneracy.strictly_complementary &&
                      sys.check.residual.norm_inf <= tol;
  if (d > 0 && sys.kkt_jac.rows() > 0) {
    out.linear_residual = (sys.kkt_jac * J + sys.param_jac).cwiseAbs().maxCoeff();
  }
  return out;
}

DirectionalSensitivity directional_sensitivity(const SmoothProgram& prog, const Solution& sol,
                                               const VectorXd& theta,
                                               const VectorXd& direction, double tol) {
  if (direction.size() != prog.d) {
    throw DimensionError("direction", "expected length " + std::to_string(prog.d) +
                                          ", got " + std::to_string(direction.size()));
  }
  FactoredSystem sys = prepare(prog, sol, theta, tol);

  // single back-solve for the single right-hand side -R * v
  const VectorXd rhs = -(sys.param_jac * direction);
  const VectorXd delta = sys.lu.lu.solve(rhs);
  if (!delta.allFinite()) {
    throw SingularMatrixError("directional_sensitivity: back-solve produced non-finite values");
  }

  DirectionalSensitivity out;
  out.dx = delta.head(prog.n);
  out.dlambda = delta.segment(prog.n, prog.m);
  out.dnu = delta.tail(prog.p);
  out.condition_estimate = sys.lu.condition_estimate();
  out.degeneracy = sys.check.degeneracy;
  out.hypotheses_ok = sys.check.degeneracy.strictly_complementary &&
                      sys.check.residual.norm_inf <= tol;
  return out;
}

}  // namespace kkt_sense
