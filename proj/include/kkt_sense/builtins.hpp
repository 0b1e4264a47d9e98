#pragma once

#include <string>
#include <vector>

#include "kkt_sense/program.hpp"

namespace kkt_sense {

/// Built-in nonlinear test programs exercising the derivative-oracle path
/// beyond quadratics. theta sets both the parameter vector and the variable
/// dimension (n = d = theta.size()):
///
///   "logsum"   minimize log-sum-exp(x) + (1/2)||x - theta||^2, unconstrained
///   "entropic" minimize sum_i x_i log x_i - theta' x
///              subject to 1'x = 1 and x_i >= eps (as -x_i + eps <= 0)
///   "ball"     minimize (1/2)||x - theta||^2 subject to ||x||^2 <= 1;
///              the quadratic constraint gives a nonzero constraint Hessian
///
/// Throws Error for an unknown name.
SmoothProgram builtin_program(const std::string& name, int dim);

std::vector<std::string> builtin_names();

}  // namespace kkt_sense
