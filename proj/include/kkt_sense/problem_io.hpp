#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "kkt_sense/program.hpp"
#include "kkt_sense/solver.hpp"

namespace kkt_sense {

/// Parsed problem file (format_version "1"). Either a ParamQP with all data
/// arrays inline, or a reference to a built-in program by name. Parsing is
/// strict: unknown fields are rejected.
struct ProblemFile {
  std::string kind;  ///< "param_qp" | "builtin"
  ParamQP qp;        ///< valid when kind == "param_qp"
  std::string builtin_name;  ///< valid when kind == "builtin"
  Eigen::VectorXd theta;
  std::optional<double> tol;      ///< solver override
  std::optional<int> max_iters;   ///< solver override

  /// The program the file describes.
  SmoothProgram instantiate() const;

  /// Solver config after applying the file's overrides to `base`.
  SolverConfig solver_config(const SolverConfig& base = {}) const;
};

/// Parses a problem file from JSON text. Throws ParseError (naming the
/// position or field) or DimensionError (naming the field).
ProblemFile parse_problem(const std::string& text);

/// Reads and parses a problem file from disk.
ProblemFile load_problem(const std::string& path);

/// Serializes a problem file; numbers keep full round-trip precision and
/// parse_problem(emit_problem(f)) reproduces f exactly.
std::string emit_problem(const ProblemFile& file);

/// Random strictly convex, strictly feasible ParamQP: Q0 = M'M + I with M
/// random, an interior point x0 is drawn first and h0 = G0 x0 + 1 so Slater
/// holds with unit slack, b0 = A0 x0. Direction data are scaled by 1/d so
/// the instance stays well posed for |theta| <= 1. Deterministic under seed.
/// The emitted file carries theta = 0.
ProblemFile generate_problem(int n, int m, int p, int d, std::uint64_t seed);

namespace io {
// Row-major nested-array JSON conversions shared by the file format, the
// CLI reports, and the test harnesses.
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& M);
Eigen::VectorXd vector_from_json(const nlohmann::json& v, const std::string& field);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& v, const std::string& field);
}  // namespace io

}  // namespace kkt_sense
