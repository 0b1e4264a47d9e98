#include "kkt_sense/problem_io.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kkt_sense/builtins.hpp"
#include "kkt_sense/errors.hpp"

namespace kkt_sense {

using nlohmann::json;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ParseError(where + ": unknown field \"" + item.key() + "\"");
    }
  }
}

const json& require_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field \"" + key + "\"");
  return *it;
}

int parse_dim(const json& obj, const std::string& key) {
  const json& v = require_field(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError("field \"" + key + "\" must be a nonnegative integer");
  }
  return v.get<int>();
}

VectorXd parse_vector(const json& v, int len, const std::string& field) {
  if (!v.is_array()) throw ParseError("field \"" + field + "\" must be an array of numbers");
  if (static_cast<int>(v.size()) != len) {
    throw DimensionError(field, "expected length " + std::to_string(len) + ", got " +
                                    std::to_string(v.size()));
  }
  VectorXd out(len);
  for (int i = 0; i < len; ++i) {
    if (!v[i].is_number()) throw ParseError("field \"" + field + "\" must contain numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

MatrixXd parse_matrix(const json& v, int rows, int cols, const std::string& field) {
  if (!v.is_array()) throw ParseError("field \"" + field + "\" must be a nested array");
  if (static_cast<int>(v.size()) != rows) {
    throw DimensionError(field, "expected " + std::to_string(rows) + " rows, got " +
                                    std::to_string(v.size()));
  }
  MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!v[r].is_array() || static_cast<int>(v[r].size()) != cols) {
      throw DimensionError(field, "expected " + std::to_string(rows) + "x" +
                                      std::to_string(cols) + ", row " + std::to_string(r) +
                                      " has " + std::to_string(v[r].size()) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      if (!v[r][c].is_number()) {
        throw ParseError("field \"" + field + "\" must contain numbers");
      }
      out(r, c) = v[r][c].get<double>();
    }
  }
  return out;
}

std::vector<MatrixXd> parse_matrix_list(const json& v, int d, int rows, int cols,
                                        const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != d) {
    throw DimensionError(field, "expected " + std::to_string(d) + " entries");
  }
  std::vector<MatrixXd> out;
  out.reserve(d);
  for (int k = 0; k < d; ++k) {
    out.push_back(parse_matrix(v[k], rows, cols, field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<VectorXd> parse_vector_list(const json& v, int d, int len,
                                        const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != d) {
    throw DimensionError(field, "expected " + std::to_string(d) + " entries");
  }
  std::vector<VectorXd> out;
  out.reserve(d);
  for (int k = 0; k < d; ++k) {
    out.push_back(parse_vector(v[k], len, field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void parse_solver_overrides(const json& obj, ProblemFile& file) {
  if (!obj.contains("solver")) return;
  const json& solver = obj["solver"];
  if (!solver.is_object()) throw ParseError("field \"solver\" must be an object");
  reject_unknown_fields(solver, {"tol", "max_iters"}, "solver");
  if (solver.contains("tol")) {
    if (!solver["tol"].is_number()) throw ParseError("solver.tol must be a number");
    file.tol = solver["tol"].get<double>();
  }
  if (solver.contains("max_iters")) {
    if (!solver["max_iters"].is_number_integer()) {
      throw ParseError("solver.max_iters must be an integer");
    }
    file.max_iters = solver["max_iters"].get<int>();
  }
}

}  // namespace

SmoothProgram ProblemFile::instantiate() const {
  if (kind == "param_qp") return qp_as_smooth(qp);
  if (kind == "builtin") return builtin_program(builtin_name, static_cast<int>(theta.size()));
  throw ParseError("unknown problem kind \"" + kind + "\"");
}

SolverConfig ProblemFile::solver_config(const SolverConfig& base) const {
  SolverConfig cfg = base;
  if (tol) cfg.tol = *tol;
  if (max_iters) cfg.max_iters = *max_iters;
  return cfg;
}

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("problem file must be a JSON object");

  const json& version = require_field(root, "format_version");
  if (!version.is_string() || version.get<std::string>() != "1") {
    throw ParseError("unsupported format_version (expected \"1\")");
  }
  const json& kind = require_field(root, "kind");
  if (!kind.is_string()) throw ParseError("field \"kind\" must be a string");

  ProblemFile file;
  file.kind = kind.get<std::string>();

  if (file.kind == "builtin") {
    reject_unknown_fields(root, {"format_version", "kind", "name", "theta", "solver"},
                          "problem file");
    const json& name = require_field(root, "name");
    if (!name.is_string()) throw ParseError("field \"name\" must be a string");
    file.builtin_name = name.get<std::string>();
    const json& theta = require_field(root, "theta");
    if (!theta.is_array() || theta.empty()) {
      throw ParseError("builtin problems need a nonempty \"theta\" array");
    }
    file.theta = parse_vector(theta, static_cast<int>(theta.size()), "theta");
    parse_solver_overrides(root, file);
    return file;
  }

  if (file.kind != "param_qp") {
    throw ParseError("unknown problem kind \"" + file.kind + "\"");
  }
  reject_unknown_fields(root,
                        {"format_version", "kind", "n", "m", "p", "d", "Q0", "Qk", "q0", "qk",
                         "G0", "Gk", "h0", "hk", "A0", "Ak", "b0", "bk", "theta", "solver"},
                        "problem file");

  ParamQP& qp = file.qp;
  qp.n = parse_dim(root, "n");
  qp.m = parse_dim(root, "m");
  qp.p = parse_dim(root, "p");
  qp.d = parse_dim(root, "d");
  qp.Q0 = parse_matrix(require_field(root, "Q0"), qp.n, qp.n, "Q0");
  qp.q0 = parse_vector(require_field(root, "q0"), qp.n, "q0");
  qp.G0 = parse_matrix(require_field(root, "G0"), qp.m, qp.n, "G0");
  qp.h0 = parse_vector(require_field(root, "h0"), qp.m, "h0");
  qp.A0 = parse_matrix(require_field(root, "A0"), qp.p, qp.n, "A0");
  qp.b0 = parse_vector(require_field(root, "b0"), qp.p, "b0");
  qp.Qk = parse_matrix_list(require_field(root, "Qk"), qp.d, qp.n, qp.n, "Qk");
  qp.qk = parse_vector_list(require_field(root, "qk"), qp.d, qp.n, "qk");
  qp.Gk = parse_matrix_list(require_field(root, "Gk"), qp.d, qp.m, qp.n, "Gk");
  qp.hk = parse_vector_list(require_field(root, "hk"), qp.d, qp.m, "hk");
  qp.Ak = parse_matrix_list(require_field(root, "Ak"), qp.d, qp.p, qp.n, "Ak");
  qp.bk = parse_vector_list(require_field(root, "bk"), qp.d, qp.p, "bk");
  file.theta = parse_vector(require_field(root, "theta"), qp.d, "theta");
  qp.validate();
  parse_solver_overrides(root, file);
  return file;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string emit_problem(const ProblemFile& file) {
  json root;
  root["format_version"] = "1";
  root["kind"] = file.kind;
  if (file.kind == "builtin") {
    root["name"] = file.builtin_name;
    root["theta"] = vector_to_json(file.theta);
  } else {
    const ParamQP& qp = file.qp;
    root["n"] = qp.n;
    root["m"] = qp.m;
    root["p"] = qp.p;
    root["d"] = qp.d;
    root["Q0"] = matrix_to_json(qp.Q0);
    root["q0"] = vector_to_json(qp.q0);
    root["G0"] = matrix_to_json(qp.G0);
    root["h0"] = vector_to_json(qp.h0);
    root["A0"] = matrix_to_json(qp.A0);
    root["b0"] = vector_to_json(qp.b0);
    root["Qk"] = json::array();
    root["qk"] = json::array();
    root["Gk"] = json::array();
    root["hk"] = json::array();
    root["Ak"] = json::array();
    root["bk"] = json::array();
    for (int k = 0; k < qp.d; ++k) {
      root["Qk"].push_back(matrix_to_json(qp.Qk[k]));
      root["qk"].push_back(vector_to_json(qp.qk[k]));
      root["Gk"].push_back(matrix_to_json(qp.Gk[k]));
      root["hk"].push_back(vector_to_json(qp.hk[k]));
      root["Ak"].push_back(matrix_to_json(qp.Ak[k]));
      root["bk"].push_back(vector_to_json(qp.bk[k]));
    }
    root["theta"] = vector_to_json(file.theta);
  }
  if (file.tol || file.max_iters) {
    json solver = json::object();
    if (file.tol) solver["tol"] = *file.tol;
    if (file.max_iters) solver["max_iters"] = *file.max_iters;
    root["solver"] = solver;
  }
  return root.dump(2) + "\n";
}

ProblemFile generate_problem(int n, int m, int p, int d, std::uint64_t seed) {
  if (n < 1 || m < 0 || p < 0 || d < 0) {
    throw Error("generate_problem: need n >= 1 and nonnegative m, p, d");
  }
  if (p > n) throw Error("generate_problem: p > n would over-determine the equalities");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto rand_mat = [&](int r, int c, double scale) {
    MatrixXd M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = scale * normal(rng);
    return M;
  };
  auto rand_vec = [&](int len, double scale) {
    VectorXd v(len);
    for (int i = 0; i < len; ++i) v[i] = scale * normal(rng);
    return v;
  };

  ParamQP qp = ParamQP::zeros(n, m, p, d);
  const MatrixXd M = rand_mat(n, n, 1.0);
  qp.Q0 = M.transpose() * M + MatrixXd::Identity(n, n);
  qp.q0 = rand_vec(n, 1.0);
  qp.G0 = rand_mat(m, n, 1.0);
  qp.A0 = rand_mat(p, n, 1.0);

  // interior point first; unit slack guarantees Slater at theta = 0
  const VectorXd x0 = rand_vec(n, 1.0);
  qp.h0 = qp.G0 * x0 + VectorXd::Ones(m);
  qp.b0 = qp.A0 * x0;

  // direction data scaled by 1/d keeps Q(theta) positive definite and the
  // feasible interior open for |theta_k| <= 1
  const double dscale = d > 0 ? 1.0 / d : 1.0;
  for (int k = 0; k < d; ++k) {
    const MatrixXd S = rand_mat(n, n, 0.1 * dscale);
    qp.Qk[k] = 0.5 * (S + S.transpose());
    qp.qk[k] = rand_vec(n, 0.3 * dscale);
    qp.Gk[k] = rand_mat(m, n, 0.2 * dscale);
    qp.hk[k] = rand_vec(m, 0.2 * dscale);
    qp.Ak[k] = rand_mat(p, n, 0.2 * dscale);
    qp.bk[k] = rand_vec(p, 0.2 * dscale);
  }

  ProblemFile file;
  file.kind = "param_qp";
  file.qp = qp;
  file.theta = VectorXd::Zero(d);
  return file;
}

}  // namespace kkt_sense
