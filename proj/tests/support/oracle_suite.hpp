#pragma once

// Randomized comparisons of the operator algebra against dense Fock-space
// matrices (at most 8 spin orbitals).

#include <cstdint>

namespace oracle {

struct SuiteResult {
  int instances = 0;
  double worst = 0.0;  // largest coefficient deviation over all instances
};

/// commutator_truncated(a, b, 2) vs rank-2 extraction of [A, B], random frames.
SuiteResult commutator_suite(int instances, std::uint64_t seed);
/// build_ducc_hamiltonian vs H + [H_N, s] + 1/2 [[F_N, s], s] extracted to rank 2.
SuiteResult ducc_suite(int instances, std::uint64_t seed);
/// project_active vs the embedded block of the full matrix.
SuiteResult projection_suite(int instances, std::uint64_t seed);

}  // namespace oracle
