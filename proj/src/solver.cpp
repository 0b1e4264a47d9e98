#include "kkt_sense/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "dense_lu.hpp"
#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using detail::call_mat;
using detail::call_scalar;
using detail::call_vec;
using detail::check_point_dims;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kDivergeLimit = 1e12;
constexpr double kSingularPivotTol = 1e-14;

// Relaxation push toward strict inequality feasibility: repeatedly step
// against the gradient of the most violated constraint, over-projecting to
// a target slack that halves whenever a step fails to reduce the violation.
// Returns true once max_i f_i < 0; gives up after 50 steps.
bool phase0_push(const SmoothProgram& prog, VectorXd& x, const VectorXd& theta,
                 double init_slack) {
  if (prog.m == 0) return true;
  double margin = std::max(init_slack, 1e-8);
  VectorXd f = call_vec(prog.eval_f, "eval_f", x, theta, prog.m);
  for (int step = 0; step < 50; ++step) {
    int worst = 0;
    const double violation = f.maxCoeff(&worst);
    if (violation < 0.0) return true;
    const MatrixXd Df = call_mat(prog.jac_f_x, "jac_f_x", x, theta, prog.m, prog.n);
    const VectorXd grad = Df.row(worst).transpose();
    const double gg = grad.squaredNorm();
    if (!(gg > 0.0) || !std::isfinite(gg)) return false;  // no descent direction
    const VectorXd x_try = x - ((violation + margin) / gg) * grad;
    const VectorXd f_try = call_vec(prog.eval_f, "eval_f", x_try, theta, prog.m);
    if (!f_try.allFinite() || f_try.maxCoeff() >= violation) {
      margin *= 0.5;  // over-projection too aggressive for this geometry
      continue;
    }
    x = x_try;
    f = f_try;
  }
  return f.maxCoeff() < 0.0;
}

VectorXd shifted_residual(const KKTResidual& g, double mu, int m) {
  VectorXd rhs = g.stacked();
  rhs.segment(g.stationarity.size(), m).array() += mu;
  return rhs;
}

std::string convexity_diagnostic(const SmoothProgram& prog, const PrimalDualPoint& z,
                                 const VectorXd& theta) {
  // Factorization failed; check the declared convexity opportunistically.
  try {
    MatrixXd H = call_mat(prog.hess_f0, "hess_f0", z.x, theta, prog.n, prog.n);
    for (int i = 0; i < prog.m; ++i) {
      if (z.lambda[i] != 0.0) {
        H += z.lambda[i] *
             detail::call_mat_i(prog.hess_f_i, "hess_f_i", z.x, theta, i, prog.n, prog.n);
      }
    }
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<MatrixXd>(H, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (min_eig < -1e-10 * (1.0 + H.cwiseAbs().maxCoeff())) {
      return "; Lagrangian Hessian has negative eigenvalue " + std::to_string(min_eig) +
             " (problem not convex as declared?)";
    }
    return "; Lagrangian Hessian min eigenvalue " + std::to_string(min_eig);
  } catch (const std::exception&) {
    return "";
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw Error("SolverConfig: tol must be positive");
  if (max_iters < 1) throw Error("SolverConfig: max_iters must be >= 1");
  if (!(barrier_decrease > 0.0 && barrier_decrease < 1.0)) {
    throw Error("SolverConfig: barrier_decrease must lie in (0,1)");
  }
  if (!(fraction_to_boundary > 0.0 && fraction_to_boundary < 1.0)) {
    throw Error("SolverConfig: fraction_to_boundary must lie in (0,1)");
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::LinearSolveFailure: return "linear_solve_failure";
    case SolveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

PrimalDualPoint newton_step(const SmoothProgram& prog, const PrimalDualPoint& z,
                            const VectorXd& theta, double mu) {
  check_point_dims(prog, z, theta);
  const KKTResidual g = assemble_residual(prog, z, theta);
  const MatrixXd K = assemble_kkt_jacobian(prog, z, theta);
  const detail::PivotedLU lu = detail::factor_dense(K);
  if (lu.singular(kSingularPivotTol)) {
    throw SingularMatrixError("newton_step: KKT Jacobian is singular (pivot ratio " +
                              std::to_string(lu.pivot_ratio()) + ")");
  }
  const VectorXd delta = lu.lu.solve(-shifted_residual(g, mu, prog.m));
  if (!delta.allFinite()) {
    throw SingularMatrixError("newton_step: solve produced non-finite values");
  }
  PrimalDualPoint out;
  out.x = delta.head(prog.n);
  out.lambda = delta.segment(prog.n, prog.m);
  out.nu = delta.tail(prog.p);
  return out;
}

Solution solve(const SmoothProgram& prog, const VectorXd& theta, const SolverConfig& config,
               const std::optional<PrimalDualPoint>& warm_start) {
  config.validate();
  const int n = prog.n, m = prog.m, p = prog.p;
  const double tau = config.fraction_to_boundary;

  PrimalDualPoint z = PrimalDualPoint::zeros(n, m, p);
  if (warm_start) {
    z = *warm_start;
    check_point_dims(prog, z, theta);
    // restore a usable interior: multipliers strictly positive
    if (m > 0) z.lambda = z.lambda.cwiseMax(1e-10);
  } else if (m > 0) {
    z.lambda.setOnes();
  }
  phase0_push(prog, z.x, theta, config.init_slack);

  Solution best;
  best.point = z;
  best.kkt_norm = std::numeric_limits<double>::infinity();

  auto finish = [&](SolveStatus status, int iters, std::string message) {
    Solution sol;
    sol.status = status;
    sol.converged = status == SolveStatus::Converged;
    sol.iters = iters;
    sol.message = std::move(message);
    sol.point = sol.converged ? z : best.point;
    // exact dual nonnegativity at exit
    for (int i = 0; i < m; ++i) {
      if (sol.point.lambda[i] < 0.0 && sol.point.lambda[i] >= -config.tol) {
        sol.point.lambda[i] = 0.0;
      }
    }
    const KKTCheck chk = check_kkt(prog, sol.point, theta, 10.0 * config.tol);
    sol.kkt_norm = chk.residual.norm_inf;
    sol.degeneracy = chk.degeneracy;
    try {
      sol.optimal_value = call_scalar(prog.eval_f0, "eval_f0", sol.point.x, theta);
    } catch (const std::exception&) {
      sol.optimal_value = std::numeric_limits<double>::quiet_NaN();
    }
    return sol;
  };

  double mu = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter <= config.max_iters; ++iter) {
    const KKTResidual g = assemble_residual(prog, z, theta);
    const VectorXd f = call_vec(prog.eval_f, "eval_f", z.x, theta, m);

    if (g.norm_inf < best.kkt_norm) {
      best.kkt_norm = g.norm_inf;
      best.point = z;
    }

    const double feas = m > 0 ? f.maxCoeff() : 0.0;
    const double dual_feas = m > 0 ? z.lambda.minCoeff() : 0.0;
    if (g.norm_inf <= config.tol && feas <= config.tol && dual_feas >= -config.tol) {
      return finish(SolveStatus::Converged, iter, "");
    }
    if (iter == config.max_iters) break;

    double znorm = z.x.size() ? z.x.cwiseAbs().maxCoeff() : 0.0;
    if (m > 0) znorm = std::max(znorm, z.lambda.cwiseAbs().maxCoeff());
    if (p > 0) znorm = std::max(znorm, z.nu.cwiseAbs().maxCoeff());
    if (!std::isfinite(znorm) || znorm > kDivergeLimit) {
      return finish(SolveStatus::Diverged, iter, "iterate norm exceeded 1e12");
    }

    // centrality target from the duality measure, kept nonincreasing
    if (m > 0) {
      const double measure = std::max(0.0, -z.lambda.dot(f) / m);
      mu = std::min(mu, config.barrier_decrease * measure);
    } else {
      mu = 0.0;
    }

    if (config.iteration_callback) config.iteration_callback(iter, z, mu, g.norm_inf);

    const MatrixXd K = assemble_kkt_jacobian(prog, z, theta);
    const detail::PivotedLU lu = detail::factor_dense(K);
    if (lu.singular(kSingularPivotTol)) {
      return finish(SolveStatus::LinearSolveFailure, iter,
                    "Newton system singular (pivot ratio " +
                        std::to_string(lu.pivot_ratio()) + ")" +
                        convexity_diagnostic(prog, z, theta));
    }
    const VectorXd delta = lu.lu.solve(-shifted_residual(g, mu, m));
    if (!delta.allFinite()) {
      return finish(SolveStatus::LinearSolveFailure, iter,
                    "Newton solve produced non-finite values" +
                        convexity_diagnostic(prog, z, theta));
    }
    const VectorXd dx = delta.head(n);
    const VectorXd dlambda = delta.segment(n, m);
    const VectorXd dnu = delta.tail(p);

    // fraction-to-boundary on the multipliers (exact) and slacks (linearized)
    double alpha = 1.0;
    for (int i = 0; i < m; ++i) {
      if (dlambda[i] < 0.0) alpha = std::min(alpha, -tau * z.lambda[i] / dlambda[i]);
    }
    if (m > 0) {
      const VectorXd ds = -(call_mat(prog.jac_f_x, "jac_f_x", z.x, theta, m, n) * dx);
      for (int i = 0; i < m; ++i) {
        if (f[i] < 0.0 && ds[i] < 0.0) alpha = std::min(alpha, tau * f[i] / ds[i]);
      }
    }

    // backtrack on the true (possibly nonlinear) slacks and on finiteness
    VectorXd x_new;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = z.x + alpha * dx;
      const VectorXd f_new = call_vec(prog.eval_f, "eval_f", x_new, theta, m);
      bool ok = f_new.allFinite() && std::isfinite(call_scalar(prog.eval_f0, "eval_f0", x_new, theta));
      for (int i = 0; ok && i < m; ++i) {
        if (f[i] < 0.0 && f_new[i] > (1.0 - tau) * f[i]) ok = false;
      }
      if (ok) break;
      alpha *= 0.5;
    }

    z.x = x_new;
    z.lambda += alpha * dlambda;
    z.nu += alpha * dnu;
  }

  return finish(SolveStatus::MaxIters, config.max_iters,
                "no convergence within " + std::to_string(config.max_iters) + " iterations");
}

}  // namespace kkt_sense
