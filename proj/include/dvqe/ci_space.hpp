#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "dvqe/determinant.hpp"

namespace dvqe {

/// ⟨I| a_p^+ a_r |J⟩ = sign for same-spin strings I, J.
struct SingleReplacement {
  std::uint32_t source;  // J
  std::uint8_t p, r;
  std::int8_t sign;
};

/// ⟨I| a_p^+ a_q^+ a_s a_r |J⟩ = sign, p < q, r < s.
struct DoubleReplacement {
  std::uint32_t source;
  std::uint8_t p, q, r, s;
  std::int8_t sign;
};

/// Occupation strings with a fixed particle count, ascending bitmask order.
class StringSpace {
 public:
  StringSpace(std::size_t n_orbitals, int n_particles);

  std::size_t size() const { return strings_.size(); }
  std::size_t n_orbitals() const { return n_orb_; }
  int n_particles() const { return n_part_; }
  std::uint64_t string(std::size_t i) const { return strings_[i]; }
  /// Position of s among the strings; s must have the right popcount.
  std::size_t rank(std::uint64_t s) const;

  /// Replacement lists indexed by the target string I.
  const std::vector<SingleReplacement>& singles(std::size_t i) const {
    return singles_[i];
  }
  const std::vector<DoubleReplacement>& doubles(std::size_t i) const {
    return doubles_[i];
  }

 private:
  std::size_t n_orb_;
  int n_part_;
  std::vector<std::uint64_t> strings_;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<std::vector<SingleReplacement>> singles_;
  std::vector<std::vector<DoubleReplacement>> doubles_;
};

/// Fixed (n_alpha, n_beta) determinants; index = i_alpha * n_beta_strings +
/// i_beta, with both strings in ascending bitmask order.
class DeterminantSpace {
 public:
  DeterminantSpace(std::size_t n_spatial, int n_alpha, int n_beta);

  std::size_t size() const { return alpha_->size() * beta_->size(); }
  std::size_t n_spatial() const { return n_spatial_; }
  std::size_t n_spinorbitals() const { return 2 * n_spatial_; }
  int n_alpha() const { return alpha_->n_particles(); }
  int n_beta() const { return beta_->n_particles(); }
  const StringSpace& alpha() const { return *alpha_; }
  const StringSpace& beta() const { return *beta_; }

  Determinant determinant(std::size_t index) const;
  /// Throws DimensionMismatch if d has the wrong electron counts or orbitals.
  std::size_t index_of(const Determinant& d) const;
  bool contains(const Determinant& d) const;

  /// (+1/-1) converting interleaved-order amplitudes to alpha-block-first.
  int block_phase(std::size_t index) const { return phase_[index]; }

  friend bool operator==(const DeterminantSpace& a, const DeterminantSpace& b) {
    return a.n_spatial_ == b.n_spatial_ && a.n_alpha() == b.n_alpha() &&
           a.n_beta() == b.n_beta();
  }

 private:
  std::size_t n_spatial_;
  std::shared_ptr<const StringSpace> alpha_, beta_;
  std::vector<std::int8_t> phase_;
};

using SpacePtr = std::shared_ptr<const DeterminantSpace>;

inline SpacePtr make_space(std::size_t n_spatial, int n_alpha, int n_beta) {
  return std::make_shared<const DeterminantSpace>(n_spatial, n_alpha, n_beta);
}

/// Coefficients over a determinant space in interleaved sign convention.
struct CIVector {
  SpacePtr space;
  Eigen::VectorXd coefficients;

  CIVector() = default;
  CIVector(SpacePtr s, Eigen::VectorXd c)
      : space(std::move(s)), coefficients(std::move(c)) {}
  static CIVector zeros(SpacePtr s);
  static CIVector basis(SpacePtr s, const Determinant& d);

  std::size_t size() const { return coefficients.size(); }
  double norm() const { return coefficients.norm(); }
  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm() - 1.0) <= tol;
  }
  /// Throws DegenerateVector for norm below 1e-8.
  CIVector normalized() const;
};

}  // namespace dvqe
