#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace dvqe {

struct BfgsConfig {
  int max_iter = 5000;
  double amp_tol = 1e-8;   // max |step component|
  double grad_tol = 1e-5;  // max |gradient component|
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
  /// L-BFGS instead of the dense inverse Hessian; also used automatically
  /// above dense_limit parameters.
  bool limited_memory = false;
  std::size_t dense_limit = 20000;
  int history = 20;
};

enum class Termination { AmplitudeChange, Gradient, MaxIterations, LineSearchFailure };
std::string to_string(Termination t);

struct OptimizerStep {
  int iteration = 0;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  double max_step = 0.0;
  long evaluations = 0;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  long evaluations = 0;
  Termination reason = Termination::MaxIterations;
  bool converged = false;
};

/// f(x, grad) returns the value and fills the gradient.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Quasi-Newton minimization with a strong-Wolfe line search. Accepted steps
/// never raise the value.
BfgsResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0, const BfgsConfig& config = {},
                         const std::function<void(const OptimizerStep&)>& on_step = {});

}  // namespace dvqe
