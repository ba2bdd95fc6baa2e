#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dvqe/ci_space.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

/// A bare-vacuum operator prepared for repeated application in one
/// determinant space. Same-spin parts become sparse string matrices, the
/// opposite-spin part is applied through pairs of single replacements.
class SigmaOperator {
 public:
  /// absolute=true replaces every coupling by its magnitude, giving an
  /// entrywise upper bound of |M|.
  SigmaOperator(const NormalOrderedOperator& op, SpacePtr space,
                bool absolute = false);

  const SpacePtr& space() const { return space_; }
  /// out = M in (interleaved sign convention)
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;
  Eigen::VectorXd diagonal() const;
  /// Upper bound on max_i sum_j |M_ij|.
  double row_sum_bound() const;

 private:
  struct StringMatrix {
    std::vector<std::uint32_t> row_start;
    std::vector<std::uint32_t> col;
    std::vector<double> val;
  };
  StringMatrix build_string_matrix(const NormalOrderedOperator& op,
                                   const StringSpace& strings, bool beta) const;
  void apply_blocked(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  SpacePtr space_;
  bool absolute_;
  double scalar_ = 0.0;
  StringMatrix ha_, hb_;
  std::vector<double> vab_;        // [p][r][q][s] over spatial orbitals
  std::vector<std::uint8_t> vab_nonzero_;  // per (p, r)
};

/// H v without materializing H.
CIVector apply_operator(const NormalOrderedOperator& op, const CIVector& v);

/// ⟨v|op|v⟩ / ⟨v|v⟩
double rayleigh_quotient(const NormalOrderedOperator& op, const CIVector& v);

/// One- and two-particle transition densities ⟨bra| a_p^+ a_q |ket⟩ and
/// ⟨bra| a_p^+ a_q^+ a_s a_r |ket⟩ over spin orbitals, Sz-conserving blocks.
struct TransitionDensity {
  std::size_t n = 0;
  std::vector<double> one;   // n^2
  std::vector<double> two;   // n^4, antisymmetric
  double gamma(std::size_t p, std::size_t q) const { return one[p * n + q]; }
  double Gamma(std::size_t p, std::size_t q, std::size_t r,
               std::size_t s) const {
    return two[((p * n + q) * n + r) * n + s];
  }
};

/// Accumulates sum_k weight_k * density(bra_k, ket_k).
TransitionDensity transition_density(
    const DeterminantSpace& space, const std::vector<const Eigen::VectorXd*>& bras,
    const std::vector<const Eigen::VectorXd*>& kets,
    const std::vector<double>& weights);

TransitionDensity transition_density(const CIVector& bra, const CIVector& ket);

}  // namespace dvqe
