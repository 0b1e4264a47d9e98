#include "kkt_sense/program.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "kkt_sense/errors.hpp"

namespace kkt_sense {

namespace {

void require_shape(const Eigen::MatrixXd& M, int rows, int cols, const std::string& field) {
  if (M.rows() != rows || M.cols() != cols) {
    throw DimensionError(field, "expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + ", got " +
                                    std::to_string(M.rows()) + "x" +
                                    std::to_string(M.cols()));
  }
}

void require_len(const Eigen::VectorXd& v, int len, const std::string& field) {
  if (v.size() != len) {
    throw DimensionError(field, "expected length " + std::to_string(len) +
                                    ", got " + std::to_string(v.size()));
  }
}

// Symmetrize in place; reject asymmetry beyond 1e-12 relative to the
// largest entry (file round-trips introduce last-digit asymmetry, anything
// larger is a malformed matrix).
void symmetrize(Eigen::MatrixXd& M, const std::string& field) {
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw DimensionError(field, "not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  M = ((M + M.transpose()) * 0.5).eval();
}

template <typename T>
void require_count(const std::vector<T>& list, int d, const std::string& field) {
  if (static_cast<int>(list.size()) != d) {
    throw DimensionError(field, "expected " + std::to_string(d) + " direction entries, got " +
                                    std::to_string(list.size()));
  }
}

}  // namespace

void ParamQP::validate() {
  if (n < 0 || m < 0 || p < 0 || d < 0) {
    throw DimensionError("n", "dimensions must be nonnegative");
  }
  require_shape(Q0, n, n, "Q0");
  require_len(q0, n, "q0");
  require_shape(G0, m, n, "G0");
  require_len(h0, m, "h0");
  require_shape(A0, p, n, "A0");
  require_len(b0, p, "b0");
  require_count(Qk, d, "Qk");
  require_count(qk, d, "qk");
  require_count(Gk, d, "Gk");
  require_count(hk, d, "hk");
  require_count(Ak, d, "Ak");
  require_count(bk, d, "bk");
  symmetrize(Q0, "Q0");
  for (int k = 0; k < d; ++k) {
    const std::string idx = "[" + std::to_string(k) + "]";
    require_shape(Qk[k], n, n, "Qk" + idx);
    require_len(qk[k], n, "qk" + idx);
    require_shape(Gk[k], m, n, "Gk" + idx);
    require_len(hk[k], m, "hk" + idx);
    require_shape(Ak[k], p, n, "Ak" + idx);
    require_len(bk[k], p, "bk" + idx);
    symmetrize(Qk[k], "Qk" + idx);
  }
}

ParamQP ParamQP::zeros(int n, int m, int p, int d) {
  ParamQP qp;
  qp.n = n;
  qp.m = m;
  qp.p = p;
  qp.d = d;
  qp.Q0 = Eigen::MatrixXd::Zero(n, n);
  qp.q0 = Eigen::VectorXd::Zero(n);
  qp.G0 = Eigen::MatrixXd::Zero(m, n);
  qp.h0 = Eigen::VectorXd::Zero(m);
  qp.A0 = Eigen::MatrixXd::Zero(p, n);
  qp.b0 = Eigen::VectorXd::Zero(p);
  qp.Qk.assign(d, Eigen::MatrixXd::Zero(n, n));
  qp.qk.assign(d, Eigen::VectorXd::Zero(n));
  qp.Gk.assign(d, Eigen::MatrixXd::Zero(m, n));
  qp.hk.assign(d, Eigen::VectorXd::Zero(m));
  qp.Ak.assign(d, Eigen::MatrixXd::Zero(p, n));
  qp.bk.assign(d, Eigen::VectorXd::Zero(p));
  return qp;
}

PrimalDualPoint PrimalDualPoint::zeros(int n, int m, int p) {
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(p)};
}

QPData qp_data_at(const ParamQP& prog, const Eigen::VectorXd& theta) {
  if (theta.size() != prog.d) {
    throw DimensionError("theta", "expected length " + std::to_string(prog.d) +
                                      ", got " + std::to_string(theta.size()));
  }
  QPData out{prog.Q0, prog.q0, prog.G0, prog.h0, prog.A0, prog.b0};
  for (int k = 0; k < prog.d; ++k) {
    const double t = theta[k];
    if (t == 0.0) continue;
    out.Q += t * prog.Qk[k];
    out.q += t * prog.qk[k];
    out.G += t * prog.Gk[k];
    out.h += t * prog.hk[k];
    out.A += t * prog.Ak[k];
    out.b += t * prog.bk[k];
  }
  out.Q = ((out.Q + out.Q.transpose()) * 0.5).eval();
  return out;
}

SmoothProgram qp_as_smooth(const ParamQP& prog) {
  // One shared copy; every oracle instantiates the data at its theta.
  auto qp = std::make_shared<ParamQP>(prog);
  SmoothProgram sp;
  sp.n = qp->n;
  sp.m = qp->m;
  sp.p = qp->p;
  sp.d = qp->d;

  using Vec = Eigen::VectorXd;
  sp.eval_f0 = [qp](const Vec& x, const Vec& th) {
    const QPData data = qp_data_at(*qp, th);
    return 0.5 * x.dot(data.Q * x) + data.q.dot(x);
  };
  sp.grad_f0 = [qp](const Vec& x, const Vec& th) -> Vec {
    const QPData data = qp_data_at(*qp, th);
    return data.Q * x + data.q;
  };
  sp.hess_f0 = [qp](const Vec&, const Vec& th) { return qp_data_at(*qp, th).Q; };
  sp.eval_f = [qp](const Vec& x, const Vec& th) -> Vec {
    const QPData data = qp_data_at(*qp, th);
    return data.G * x - data.h;
  };
  sp.jac_f_x = [qp](const Vec&, const Vec& th) { return qp_data_at(*qp, th).G; };
  sp.hess_f_i = [qp](const Vec&, const Vec&, int) {
    return Eigen::MatrixXd::Zero(qp->n, qp->n).eval();
  };
  sp.eval_h = [qp](const Vec& x, const Vec& th) -> Vec {
    const QPData data = qp_data_at(*qp, th);
    return data.A * x - data.b;
  };
  sp.jac_h_x = [qp](const Vec&, const Vec& th) { return qp_data_at(*qp, th).A; };

  sp.cross_grad_f0 = [qp](const Vec& x, const Vec&) {
    Eigen::MatrixXd out(qp->n, qp->d);
    for (int k = 0; k < qp->d; ++k) out.col(k) = qp->Qk[k] * x + qp->qk[k];
    return out;
  };
  sp.cross_jac_f = [qp](const Vec&, const Vec&, int i) {
    Eigen::MatrixXd out(qp->n, qp->d);
    for (int k = 0; k < qp->d; ++k) out.col(k) = qp->Gk[k].row(i).transpose();
    return out;
  };
  sp.jac_f_theta = [qp](const Vec& x, const Vec&) {
    Eigen::MatrixXd out(qp->m, qp->d);
    for (int k = 0; k < qp->d; ++k) out.col(k) = qp->Gk[k] * x - qp->hk[k];
    return out;
  };
  sp.jac_h_theta = [qp](const Vec& x, const Vec&) {
    Eigen::MatrixXd out(qp->p, qp->d);
    for (int k = 0; k < qp->d; ++k) out.col(k) = qp->Ak[k] * x - qp->bk[k];
    return out;
  };
  sp.cross_jac_h = [qp](const Vec&, const Vec&, int j) {
    Eigen::MatrixXd out(qp->n, qp->d);
    for (int k = 0; k < qp->d; ++k) out.col(k) = qp->Ak[k].row(j).transpose();
    return out;
  };
  return sp;
}

namespace detail {

namespace {

[[noreturn]] void oracle_fail(const char* name, const std::string& why) {
  throw OracleError(std::string(name) + ": " + why);
}

template <typename Fn, typename... Args>
auto invoke_oracle(const Fn& fn, const char* name, Args&&... args) {
  if (!fn) oracle_fail(name, "oracle not set");
  try {
    return fn(std::forward<Args>(args)...);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    oracle_fail(name, std::string("evaluation failed: ") + e.what());
  }
}

}  // namespace

double call_scalar(const ScalarOracle& fn, const char* name, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& theta) {
  return invoke_oracle(fn, name, x, theta);
}

Eigen::VectorXd call_vec(const VecOracle& fn, const char* name, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& theta, int rows) {
  if (rows == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd out = invoke_oracle(fn, name, x, theta);
  if (out.size() != rows) {
    oracle_fail(name, "expected " + std::to_string(rows) + " entries, got " +
                          std::to_string(out.size()));
  }
  return out;
}

Eigen::MatrixXd call_mat(const MatOracle& fn, const char* name, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& theta, int rows, int cols) {
  if (rows == 0 || cols == 0) return Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd out = invoke_oracle(fn, name, x, theta);
  if (out.rows() != rows || out.cols() != cols) {
    oracle_fail(name, "expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                          ", got " + std::to_string(out.rows()) + "x" +
                          std::to_string(out.cols()));
  }
  return out;
}

Eigen::MatrixXd call_mat_i(const MatRowOracle& fn, const char* name, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta, int i, int rows, int cols) {
  if (rows == 0 || cols == 0) return Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd out = invoke_oracle(fn, name, x, theta, i);
  if (out.rows() != rows || out.cols() != cols) {
    oracle_fail(name, "row " + std::to_string(i) + ": expected " + std::to_string(rows) +
                          "x" + std::to_string(cols) + ", got " + std::to_string(out.rows()) +
                          "x" + std::to_string(out.cols()));
  }
  return out;
}

void check_point_dims(const SmoothProgram& prog, const PrimalDualPoint& z,
                      const Eigen::VectorXd& theta) {
  if (z.x.size() != prog.n) {
    throw DimensionError("x", "expected length " + std::to_string(prog.n) + ", got " +
                                  std::to_string(z.x.size()));
  }
  if (z.lambda.size() != prog.m) {
    throw DimensionError("lambda", "expected length " + std::to_string(prog.m) + ", got " +
                                       std::to_string(z.lambda.size()));
  }
  if (z.nu.size() != prog.p) {
    throw DimensionError("nu", "expected length " + std::to_string(prog.p) + ", got " +
                                   std::to_string(z.nu.size()));
  }
  if (theta.size() != prog.d) {
    throw DimensionError("theta", "expected length " + std::to_string(prog.d) + ", got " +
                                      std::to_string(theta.size()));
  }
}

}  // namespace detail

}  // namespace kkt_sense
