#include "kkt_sense/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using detail::call_mat;
using detail::call_mat_i;
using detail::call_scalar;
using detail::call_vec;
using detail::check_point_dims;

Eigen::VectorXd KKTResidual::stacked() const {
  Eigen::VectorXd g(stationarity.size() + complementarity.size() + primal_eq.size());
  g << stationarity, complementarity, primal_eq;
  return g;
}

namespace {

double block_norm_inf(const KKTResidual& r) {
  double v = 0.0;
  if (r.stationarity.size() > 0) v = std::max(v, r.stationarity.cwiseAbs().maxCoeff());
  if (r.complementarity.size() > 0) v = std::max(v, r.complementarity.cwiseAbs().maxCoeff());
  if (r.primal_eq.size() > 0) v = std::max(v, r.primal_eq.cwiseAbs().maxCoeff());
  return v;
}

}  // namespace

Eigen::VectorXd eval_lagrangian_grad(const SmoothProgram& prog, const PrimalDualPoint& z,
                                     const Eigen::VectorXd& theta) {
  check_point_dims(prog, z, theta);
  Eigen::VectorXd grad = call_vec(prog.grad_f0, "grad_f0", z.x, theta, prog.n);
  if (prog.m > 0) {
    grad += call_mat(prog.jac_f_x, "jac_f_x", z.x, theta, prog.m, prog.n).transpose() * z.lambda;
  }
  if (prog.p > 0) {
    grad += call_mat(prog.jac_h_x, "jac_h_x", z.x, theta, prog.p, prog.n).transpose() * z.nu;
  }
  return grad;
}

KKTResidual assemble_residual(const SmoothProgram& prog, const PrimalDualPoint& z,
                              const Eigen::VectorXd& theta) {
  check_point_dims(prog, z, theta);
  KKTResidual r;
  r.stationarity = eval_lagrangian_grad(prog, z, theta);
  const Eigen::VectorXd f = call_vec(prog.eval_f, "eval_f", z.x, theta, prog.m);
  r.complementarity = z.lambda.cwiseProduct(f);
  r.primal_eq = call_vec(prog.eval_h, "eval_h", z.x, theta, prog.p);
  r.norm_inf = block_norm_inf(r);
  return r;
}

Eigen::MatrixXd assemble_kkt_jacobian(const SmoothProgram& prog, const PrimalDualPoint& z,
                                      const Eigen::VectorXd& theta) {
  check_point_dims(prog, z, theta);
  const int n = prog.n, m = prog.m, p = prog.p;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m + p, n + m + p);

  // block (1,1): hess_f0 + sum_i lambda_i hess_f_i  (h is affine, no nu term)
  Eigen::MatrixXd H = call_mat(prog.hess_f0, "hess_f0", z.x, theta, n, n);
  for (int i = 0; i < m; ++i) {
    if (z.lambda[i] == 0.0) continue;
    H += z.lambda[i] * call_mat_i(prog.hess_f_i, "hess_f_i", z.x, theta, i, n, n);
  }
  K.topLeftCorner(n, n) = H;

  if (m > 0) {
    const Eigen::MatrixXd Df = call_mat(prog.jac_f_x, "jac_f_x", z.x, theta, m, n);
    const Eigen::VectorXd f = call_vec(prog.eval_f, "eval_f", z.x, theta, m);
    K.block(0, n, n, m) = Df.transpose();
    K.block(n, 0, m, n) = z.lambda.asDiagonal() * Df;
    K.block(n, n, m, m) = f.asDiagonal();
  }
  if (p > 0) {
    const Eigen::MatrixXd Dh = call_mat(prog.jac_h_x, "jac_h_x", z.x, theta, p, n);
    K.block(0, n + m, n, p) = Dh.transpose();
    K.block(n + m, 0, p, n) = Dh;
  }
  return K;
}

Eigen::MatrixXd assemble_param_jacobian(const SmoothProgram& prog, const PrimalDualPoint& z,
                                        const Eigen::VectorXd& theta) {
  check_point_dims(prog, z, theta);
  const int n = prog.n, m = prog.m, p = prog.p, d = prog.d;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n + m + p, d);
  if (d == 0) return R;

  // D_theta grad_x L = cross_grad_f0 + sum_i lambda_i D_theta grad_x f_i
  //                                  + sum_j nu_j D_theta grad_x h_j
  Eigen::MatrixXd top = call_mat(prog.cross_grad_f0, "cross_grad_f0", z.x, theta, n, d);
  for (int i = 0; i < m; ++i) {
    if (z.lambda[i] == 0.0) continue;
    top += z.lambda[i] * call_mat_i(prog.cross_jac_f, "cross_jac_f", z.x, theta, i, n, d);
  }
  for (int j = 0; j < p; ++j) {
    if (z.nu[j] == 0.0) continue;
    top += z.nu[j] * call_mat_i(prog.cross_jac_h, "cross_jac_h", z.x, theta, j, n, d);
  }
  R.topRows(n) = top;

  if (m > 0) {
    const Eigen::MatrixXd Dtf = call_mat(prog.jac_f_theta, "jac_f_theta", z.x, theta, m, d);
    R.middleRows(n, m) = z.lambda.asDiagonal() * Dtf;
  }
  if (p > 0) {
    R.bottomRows(p) = call_mat(prog.jac_h_theta, "jac_h_theta", z.x, theta, p, d);
  }
  return R;
}

DegeneracyReport classify_activity(const Eigen::VectorXd& f_values,
                                   const Eigen::VectorXd& lambda, double tol_act) {
  DegeneracyReport report;
  for (int i = 0; i < f_values.size(); ++i) {
    if (std::abs(f_values[i]) <= tol_act) {
      report.active_set.push_back(i);
      if (lambda[i] <= tol_act) report.weakly_active.push_back(i);
    }
  }
  report.strictly_complementary = report.weakly_active.empty();
  return report;
}

KKTCheck check_kkt(const SmoothProgram& prog, const PrimalDualPoint& z,
                   const Eigen::VectorXd& theta, double tol) {
  check_point_dims(prog, z, theta);
  if (!(tol > 0.0)) throw Error("check_kkt: tol must be positive");

  KKTCheck out;
  out.residual = assemble_residual(prog, z, theta);

  const Eigen::VectorXd f = call_vec(prog.eval_f, "eval_f", z.x, theta, prog.m);
  out.ineq_violation = prog.m > 0 ? std::max(0.0, f.maxCoeff()) : 0.0;
  out.dual_violation = prog.m > 0 ? std::max(0.0, -z.lambda.minCoeff()) : 0.0;
  out.satisfied = out.residual.norm_inf <= tol && out.ineq_violation <= tol &&
                  out.dual_violation <= tol;

  out.degeneracy = classify_activity(f, z.lambda, std::sqrt(tol));

  // h is affine in x by contract; spot-check jac_h_x at two perturbed points.
  if (prog.p > 0) {
    std::mt19937 rng(0x5eed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const Eigen::MatrixXd J0 = call_mat(prog.jac_h_x, "jac_h_x", z.x, theta, prog.p, prog.n);
    const double scale = 1.0 + z.x.cwiseAbs().maxCoeff();
    for (int trial = 0; trial < 2; ++trial) {
      Eigen::VectorXd xr = z.x;
      for (int i = 0; i < prog.n; ++i) xr[i] += scale * unit(rng);
      const Eigen::MatrixXd Jr = call_mat(prog.jac_h_x, "jac_h_x", xr, theta, prog.p, prog.n);
      if ((Jr - J0).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + J0.cwiseAbs().maxCoeff())) {
        out.h_affine_ok = false;
      }
    }
  }
  return out;
}

Eigen::MatrixXd qp_kkt_jacobian(const ParamQP& prog, const PrimalDualPoint& z,
                                const Eigen::VectorXd& theta) {
  const int n = prog.n, m = prog.m, p = prog.p;
  if (z.x.size() != n) throw DimensionError("x", "length mismatch");
  if (z.lambda.size() != m) throw DimensionError("lambda", "length mismatch");
  if (z.nu.size() != p) throw DimensionError("nu", "length mismatch");
  const QPData data = qp_data_at(prog, theta);

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m + p, n + m + p);
  K.topLeftCorner(n, n) = data.Q;
  if (m > 0) {
    K.block(0, n, n, m) = data.G.transpose();
    K.block(n, 0, m, n) = z.lambda.asDiagonal() * data.G;
    K.block(n, n, m, m) = (data.G * z.x - data.h).asDiagonal();
  }
  if (p > 0) {
    K.block(0, n + m, n, p) = data.A.transpose();
    K.block(n + m, 0, p, n) = data.A;
  }
  return K;
}

Eigen::MatrixXd qp_param_jacobian(const ParamQP& prog, const PrimalDualPoint& z,
                                  const Eigen::VectorXd& theta) {
  const int n = prog.n, m = prog.m, p = prog.p, d = prog.d;
  if (z.x.size() != n) throw DimensionError("x", "length mismatch");
  if (z.lambda.size() != m) throw DimensionError("lambda", "length mismatch");
  if (z.nu.size() != p) throw DimensionError("nu", "length mismatch");
  if (theta.size() != d) throw DimensionError("theta", "length mismatch");

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n + m + p, d);
  for (int k = 0; k < d; ++k) {
    R.col(k).head(n) = prog.Qk[k] * z.x + prog.qk[k];
    if (m > 0) {
      R.col(k).head(n) += prog.Gk[k].transpose() * z.lambda;
      R.col(k).segment(n, m) = z.lambda.cwiseProduct(prog.Gk[k] * z.x - prog.hk[k]);
    }
    if (p > 0) {
      R.col(k).head(n) += prog.Ak[k].transpose() * z.nu;
      R.col(k).tail(p) = prog.Ak[k] * z.x - prog.bk[k];
    }
  }
  return R;
}

}  // namespace kkt_sense
