#include "kkt_sense/builtins.hpp"

#include <cmath>
#include <limits>

#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// max-shifted softmax, safe for large entries
VectorXd softmax(const VectorXd& x) {
  const VectorXd e = (x.array() - x.maxCoeff()).exp();
  return e / e.sum();
}

double logsumexp(const VectorXd& x) {
  const double shift = x.maxCoeff();
  return shift + std::log((x.array() - shift).exp().sum());
}

// minimize log-sum-exp(x) + (1/2)||x - theta||^2, unconstrained
SmoothProgram make_logsum(int dim) {
  SmoothProgram sp;
  sp.n = sp.d = dim;
  sp.eval_f0 = [](const VectorXd& x, const VectorXd& th) {
    return logsumexp(x) + 0.5 * (x - th).squaredNorm();
  };
  sp.grad_f0 = [](const VectorXd& x, const VectorXd& th) -> VectorXd {
    return softmax(x) + (x - th);
  };
  sp.hess_f0 = [dim](const VectorXd& x, const VectorXd&) -> MatrixXd {
    const VectorXd s = softmax(x);
    return MatrixXd(s.asDiagonal()) - s * s.transpose() +
           MatrixXd::Identity(dim, dim);
  };
  sp.cross_grad_f0 = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(dim, dim);
  };
  return sp;
}

// minimize sum_i x_i log x_i - theta'x  s.t.  1'x = 1,  -x_i + eps <= 0
SmoothProgram make_entropic(int dim) {
  constexpr double eps = 1e-3;
  SmoothProgram sp;
  sp.n = sp.m = sp.d = dim;
  sp.p = 1;
  sp.eval_f0 = [](const VectorXd& x, const VectorXd& th) {
    if ((x.array() <= 0.0).any()) return std::numeric_limits<double>::quiet_NaN();
    return (x.array() * x.array().log()).sum() - th.dot(x);
  };
  sp.grad_f0 = [](const VectorXd& x, const VectorXd& th) -> VectorXd {
    return x.array().log().matrix() + VectorXd::Ones(x.size()) - th;
  };
  sp.hess_f0 = [](const VectorXd& x, const VectorXd&) -> MatrixXd {
    return x.cwiseInverse().asDiagonal();
  };
  sp.eval_f = [](const VectorXd& x, const VectorXd&) -> VectorXd {
    return VectorXd::Constant(x.size(), eps) - x;
  };
  sp.jac_f_x = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(dim, dim);
  };
  sp.hess_f_i = [dim](const VectorXd&, const VectorXd&, int) -> MatrixXd {
    return MatrixXd::Zero(dim, dim);
  };
  sp.eval_h = [](const VectorXd& x, const VectorXd&) -> VectorXd {
    return VectorXd::Constant(1, x.sum() - 1.0);
  };
  sp.jac_h_x = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Ones(1, dim);
  };
  sp.cross_grad_f0 = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(dim, dim);
  };
  sp.cross_jac_f = [dim](const VectorXd&, const VectorXd&, int) -> MatrixXd {
    return MatrixXd::Zero(dim, dim);
  };
  sp.jac_f_theta = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Zero(dim, dim);
  };
  sp.jac_h_theta = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Zero(1, dim);
  };
  sp.cross_jac_h = [dim](const VectorXd&, const VectorXd&, int) -> MatrixXd {
    return MatrixXd::Zero(dim, dim);
  };
  return sp;
}

// minimize (1/2)||x - theta||^2  s.t.  x'x - 1 <= 0
// (quadratic constraint: the one builtin with a nonzero constraint Hessian)
SmoothProgram make_ball(int dim) {
  SmoothProgram sp;
  sp.n = sp.d = dim;
  sp.m = 1;
  sp.eval_f0 = [](const VectorXd& x, const VectorXd& th) {
    return 0.5 * (x - th).squaredNorm();
  };
  sp.grad_f0 = [](const VectorXd& x, const VectorXd& th) -> VectorXd { return x - th; };
  sp.hess_f0 = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Identity(dim, dim);
  };
  sp.eval_f = [](const VectorXd& x, const VectorXd&) -> VectorXd {
    return VectorXd::Constant(1, x.squaredNorm() - 1.0);
  };
  sp.jac_f_x = [](const VectorXd& x, const VectorXd&) -> MatrixXd {
    return 2.0 * x.transpose();
  };
  sp.hess_f_i = [dim](const VectorXd&, const VectorXd&, int) -> MatrixXd {
    return 2.0 * MatrixXd::Identity(dim, dim);
  };
  sp.cross_grad_f0 = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(dim, dim);
  };
  sp.cross_jac_f = [dim](const VectorXd&, const VectorXd&, int) -> MatrixXd {
    return MatrixXd::Zero(dim, dim);
  };
  sp.jac_f_theta = [dim](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Zero(1, dim);
  };
  return sp;
}

}  // namespace

SmoothProgram builtin_program(const std::string& name, int dim) {
  if (dim < 1) throw Error("builtin_program: dimension must be >= 1");
  if (name == "logsum") return make_logsum(dim);
  if (name == "entropic") return make_entropic(dim);
  if (name == "ball") return make_ball(dim);
  throw Error("builtin_program: unknown builtin \"" + name +
              "\" (available: logsum, entropic, ball)");
}

std::vector<std::string> builtin_names() { return {"logsum", "entropic", "ball"}; }

}  // namespace kkt_sense
