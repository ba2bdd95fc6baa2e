#pragma once

#include <optional>

#include "dvqe/active_space.hpp"
#include "dvqe/amplitudes.hpp"
#include "dvqe/ccsd.hpp"
#include "dvqe/fcidump.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

struct DuccOptions {
  /// When set, sigma_ext may not carry amplitudes with all indices active.
  std::optional<ActiveSpaceSpec> spec;
  /// Compare against the untruncated second-order expression with dense
  /// matrices in the reference sector; tiny systems only.
  bool audit_three_body = false;
  std::size_t audit_cap = 2000;
};

struct DuccReport {
  double asymmetry = 0.0;  // max |A - A^+| before symmetrization
  std::optional<double> three_body_residual;
};

/// A = H + [H_N, s] + 1/2 [[F_N, s], s], every commutator truncated to two
/// bodies in the Fermi vacuum of reference; returned bare and Hermitized.
NormalOrderedOperator build_ducc_hamiltonian(const NormalOrderedOperator& h,
                                             const AntiHermitianGenerator& sigma_ext,
                                             const Determinant& reference,
                                             const DuccOptions& options = {},
                                             DuccReport* report = nullptr);

/// Restriction to the active spin orbitals. Occupied inactive orbitals are
/// folded in as a filled core, empty inactive orbitals are dropped.
NormalOrderedOperator project_active(const NormalOrderedOperator& a,
                                     const ActiveSpaceSpec& spec,
                                     const Determinant& reference);

/// Active-space image of reference (active orbitals renumbered in the order of spec.active_orbitals).
Determinant active_reference(const ActiveSpaceSpec& spec, const Determinant& reference);

struct DownfoldConfig {
  CcsdConfig ccsd;
  bool ducc = true;  // false: bare projection only
  bool audit_three_body = false;
  /// Amplitudes over the frozen-core-reduced orbitals; replaces CCSD.
  std::optional<ClusterAmplitudes> amplitudes;
};

struct DownfoldResult {
  NormalOrderedOperator active;
  Determinant active_reference;
  std::size_t n_active_spatial = 0;
  int n_alpha = 0, n_beta = 0;
  double reference_energy = 0.0;  // <Phi|H|Phi> of the full system
  std::optional<CcsdResult> ccsd;
  std::size_t n_external_amplitudes = 0;
  DuccReport ducc;
};

/// FCIDUMP -> frozen core -> CCSD -> external amplitudes -> A -> active space.
DownfoldResult downfold(const FcidumpData& fcidump, const ActiveSpaceSpec& spec,
                        const DownfoldConfig& config = {});

}  // namespace dvqe
