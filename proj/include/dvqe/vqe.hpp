#pragma once

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <string>

#include "dvqe/ci_space.hpp"
#include "dvqe/gucc.hpp"
#include "dvqe/operator.hpp"
#include "dvqe/optimizer.hpp"

namespace dvqe {

struct VqeConfig {
  BfgsConfig optimizer;
  GuccConfig gucc;
  /// Starting parameters; zero when absent.
  std::optional<Eigen::VectorXd> initial;
  /// Exact ground state of the same operator, for overlap and delta-norm.
  std::optional<CIVector> fci_state;
  /// One JSON object per iteration.
  std::ostream* trace = nullptr;
};

struct VqeResult {
  double energy = 0.0;
  Eigen::VectorXd theta;
  CIVector state;
  int iterations = 0;
  long evaluations = 0;
  double gradient_inf_norm = 0.0;
  std::optional<double> overlap_with_fci;
  std::optional<double> delta_norm;
  bool converged = false;
  Termination termination_reason = Termination::MaxIterations;
  double min_energy_evaluated = 0.0;
  double max_norm_error = 0.0;
};

VqeResult vqe_minimize(const NormalOrderedOperator& h, const CIVector& reference,
                       const ExcitationPool& pool, const VqeConfig& config = {});

}  // namespace dvqe
