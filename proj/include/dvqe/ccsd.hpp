#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "dvqe/active_space.hpp"
#include "dvqe/amplitudes.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

struct Mp2Result {
  ClusterAmplitudes t;
  double correlation_energy = 0.0;
};

/// First-order doubles from the Fock diagonal; singles are zero.
Mp2Result mp2_amplitudes(const NormalOrderedOperator& op, const Determinant& reference);

struct CcsdConfig {
  double residual_tol = 1e-9;
  int max_iter = 200;
  int diis_depth = 8;
  double damping = 1.0;
};

struct CcsdResult {
  ClusterAmplitudes t;
  double correlation_energy = 0.0;
  double reference_energy = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  double energy() const { return reference_energy + correlation_energy; }
};

/// Projected spin-orbital CCSD starting from MP2 amplitudes. Throws
/// ConvergenceError (with the residual history) after max_iter sweeps.
CcsdResult ccsd_solve(const NormalOrderedOperator& op, const Determinant& reference,
                      const CcsdConfig& config = {});

/// Correlation energy of given amplitudes.
double ccsd_correlation_energy(const NormalOrderedOperator& op, const ClusterAmplitudes& t);

/// Max-norm of the projected CCSD residuals at t.
double ccsd_residual_norm(const NormalOrderedOperator& op, const ClusterAmplitudes& t);

/// (t_int, t_ext): amplitudes whose indices are all active, and the rest.
std::pair<ClusterAmplitudes, ClusterAmplitudes> partition_amplitudes(
    const ClusterAmplitudes& t, const ActiveSpaceSpec& spec);

/// One "a i value" or "a b i j value" line per nonzero amplitude, spin-orbital
/// labels. Doubles are listed once with a < b, i < j.
void write_amplitudes(const ClusterAmplitudes& t, std::ostream& out);
ClusterAmplitudes read_amplitudes(std::istream& in, std::size_t n_spinorbitals,
                                  const Determinant& reference);

}  // namespace dvqe
