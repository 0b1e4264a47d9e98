#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace kkt_sense {

/// Quadratic program whose data are affine functions of a parameter vector
/// theta in R^d:
///
///   minimize    (1/2) x' Q(theta) x + q(theta)' x
///   subject to  G(theta) x <= h(theta)
///               A(theta) x  = b(theta)
///
/// with Q(theta) = Q0 + sum_k theta_k * Qk[k] and likewise for the other
/// data. The direction lists Qk/qk/Gk/hk/Ak/bk are therefore exactly the
/// theta-derivatives of the problem data.
struct ParamQP {
  int n = 0;  ///< primal variables
  int m = 0;  ///< inequality constraints
  int p = 0;  ///< equality constraints
  int d = 0;  ///< parameter dimension

  Eigen::MatrixXd Q0;
  std::vector<Eigen::MatrixXd> Qk;
  Eigen::VectorXd q0;
  std::vector<Eigen::VectorXd> qk;
  Eigen::MatrixXd G0;
  std::vector<Eigen::MatrixXd> Gk;
  Eigen::VectorXd h0;
  std::vector<Eigen::VectorXd> hk;
  Eigen::MatrixXd A0;
  std::vector<Eigen::MatrixXd> Ak;
  Eigen::VectorXd b0;
  std::vector<Eigen::VectorXd> bk;

  /// Checks every shape against (n, m, p, d) and symmetrizes Q0 and each
  /// Qk in place. Asymmetry beyond 1e-12 (relative to the largest entry)
  /// is rejected. Throws DimensionError naming the offending field.
  /// Positive semidefiniteness of Q(theta) is not checked here; it is
  /// detected at solve time through the Newton factorization.
  void validate();

  /// Zero-initialized instance with all shapes consistent.
  static ParamQP zeros(int n, int m, int p, int d);
};

/// Problem data instantiated at a fixed theta.
struct QPData {
  Eigen::MatrixXd Q;
  Eigen::VectorXd q;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

/// Derivative-oracle form of a parameterized convex program
///
///   minimize    f0(x, theta)
///   subject to  f(x, theta) <= 0     (m rows, convex in x)
///               h(x, theta)  = 0     (p rows, affine in x)
///
/// Oracles for a block may be left empty when the corresponding dimension
/// is zero; they are never invoked in that case. `hess_f_i`, `cross_jac_f`
/// and `cross_jac_h` take the constraint row index as their last argument.
///
/// An instantiated SmoothProgram is immutable after construction and safe
/// to share across concurrent solver invocations.
struct SmoothProgram {
  int n = 0, m = 0, p = 0, d = 0;

  using Vec = Eigen::VectorXd;
  using Mat = Eigen::MatrixXd;

  std::function<double(const Vec&, const Vec&)> eval_f0;
  std::function<Vec(const Vec&, const Vec&)> grad_f0;    // n
  std::function<Mat(const Vec&, const Vec&)> hess_f0;    // n x n, symmetric
  std::function<Vec(const Vec&, const Vec&)> eval_f;     // m
  std::function<Mat(const Vec&, const Vec&)> jac_f_x;    // m x n
  std::function<Mat(const Vec&, const Vec&, int)> hess_f_i;  // n x n, symmetric
  std::function<Vec(const Vec&, const Vec&)> eval_h;     // p
  std::function<Mat(const Vec&, const Vec&)> jac_h_x;    // p x n, constant in x
  std::function<Mat(const Vec&, const Vec&)> cross_grad_f0;       // n x d, D_theta grad_x f0
  std::function<Mat(const Vec&, const Vec&, int)> cross_jac_f;    // n x d, D_theta grad_x f_i
  std::function<Mat(const Vec&, const Vec&)> jac_f_theta;         // m x d
  std::function<Mat(const Vec&, const Vec&)> jac_h_theta;         // p x d
  std::function<Mat(const Vec&, const Vec&, int)> cross_jac_h;    // n x d, D_theta grad_x h_j
};

/// Candidate primal/dual triple z = (x, lambda, nu). Feasibility is a
/// checked property (see check_kkt), not a type invariant.
struct PrimalDualPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd nu;

  static PrimalDualPoint zeros(int n, int m, int p);
};

/// Evaluates the affine problem data at theta. Each output equals
/// base + sum_k theta_k * direction_k; the Q output is symmetric.
QPData qp_data_at(const ParamQP& prog, const Eigen::VectorXd& theta);

/// Views the QP through the generic derivative-oracle interface. The
/// returned program holds a copy of `prog` and satisfies, at every theta:
/// grad_f0 = Q(theta) x + q(theta), hess_f0 = Q(theta), jac_f_x = G(theta),
/// hess_f_i = 0, jac_h_x = A(theta), and the theta-derivative oracles are
/// the direction-list contractions (e.g. column k of cross_grad_f0 is
/// Qk[k] x + qk[k]).
SmoothProgram qp_as_smooth(const ParamQP& prog);

namespace detail {
// Oracle call helpers: verify the oracle is present and its result has the
// expected shape, naming the oracle on failure. Zero-dimension results are
// synthesized without invoking the oracle.
using ScalarOracle = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using VecOracle = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using MatOracle = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using MatRowOracle =
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&, int)>;

double call_scalar(const ScalarOracle& fn, const char* name, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& theta);
Eigen::VectorXd call_vec(const VecOracle& fn, const char* name, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& theta, int rows);
Eigen::MatrixXd call_mat(const MatOracle& fn, const char* name, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& theta, int rows, int cols);
Eigen::MatrixXd call_mat_i(const MatRowOracle& fn, const char* name, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta, int i, int rows, int cols);
void check_point_dims(const SmoothProgram& prog, const PrimalDualPoint& z,
                      const Eigen::VectorXd& theta);
}  // namespace detail

}  // namespace kkt_sense
