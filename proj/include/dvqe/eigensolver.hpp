#pragma once

#include <cstddef>
#include <optional>

#include "dvqe/ci_space.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

struct GroundStateConfig {
  std::size_t dense_cap = 4000;
  double residual_tol = 1e-9;
  int max_iter = 1000;
  int max_subspace = 24;
  int restart_size = 8;
  double hermiticity_tol = 1e-10;
  std::optional<CIVector> guess;
};

struct GroundState {
  double energy = 0.0;
  CIVector vector;
  int iterations = 0;
  double residual = 0.0;
};

/// Lowest eigenpair; dense below dense_cap, Davidson above it.
GroundState ground_state(const NormalOrderedOperator& op, SpacePtr space,
                         const GroundStateConfig& config = {});

GroundState davidson(const NormalOrderedOperator& op, SpacePtr space,
                     const GroundStateConfig& config = {});

/// |⟨a|b⟩| of the normalized inputs.
double overlap(const CIVector& a, const CIVector& b);
/// sqrt(2 - 2 overlap): distance after aligning the global phase.
double delta_norm(const CIVector& a, const CIVector& b);
double delta_norm_from_overlap(double overlap);

}  // namespace dvqe
