#pragma once

#include "dvqe/amplitudes.hpp"
#include "dvqe/determinant.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

/// Re-expresses a bare-vacuum operator in normal order relative to reference.
NormalOrderedOperator normal_order(const NormalOrderedOperator& op,
                                   const Determinant& reference);

/// Inverse of normal_order.
NormalOrderedOperator to_bare_vacuum(const NormalOrderedOperator& op);

/// F_N: the one-body part of a Fermi-vacuum operator.
NormalOrderedOperator fock_part(const NormalOrderedOperator& fermi_op);

/// H_N: a Fermi-vacuum operator without its scalar.
NormalOrderedOperator without_scalar(const NormalOrderedOperator& op);

/// [a, b] by Wick's theorem in the shared vacuum, keeping normal-ordered
/// terms up to max_rank (1 or 2) bodies.
NormalOrderedOperator commutator_truncated(const NormalOrderedOperator& a,
                                           const NormalOrderedOperator& b,
                                           int max_rank);

/// sigma = T1 + T2 - T1^+ - T2^+
AntiHermitianGenerator generator_from_cluster(const ClusterAmplitudes& t);

}  // namespace dvqe
