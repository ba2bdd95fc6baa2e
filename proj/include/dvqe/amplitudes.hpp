#pragma once

#include <cstddef>
#include <vector>

#include "dvqe/determinant.hpp"

namespace dvqe {

/// T1/T2 over a reference determinant. Indices into occupied()/virtuals()
/// are local; t2 is antisymmetric in (a,b) and (i,j).
class ClusterAmplitudes {
 public:
  ClusterAmplitudes() = default;
  ClusterAmplitudes(std::size_t n_spinorbitals, Determinant reference);

  std::size_t n_spinorbitals() const { return n_; }
  const Determinant& reference() const { return ref_; }
  const std::vector<std::size_t>& occupied() const { return occ_; }
  const std::vector<std::size_t>& virtuals() const { return vir_; }
  std::size_t n_occ() const { return occ_.size(); }
  std::size_t n_vir() const { return vir_.size(); }

  double t1(std::size_t a, std::size_t i) const { return t1_[a * no() + i]; }
  double& t1(std::size_t a, std::size_t i) { return t1_[a * no() + i]; }
  double t2(std::size_t a, std::size_t b, std::size_t i, std::size_t j) const {
    return t2_[i4(a, b, i, j)];
  }
  /// Writes all four antisymmetric copies; no-op when a == b or i == j.
  void set_t2(std::size_t a, std::size_t b, std::size_t i, std::size_t j,
              double value);

  std::vector<double>& t1_data() { return t1_; }
  const std::vector<double>& t1_data() const { return t1_; }
  std::vector<double>& t2_data() { return t2_; }
  const std::vector<double>& t2_data() const { return t2_; }

  std::size_t i4(std::size_t a, std::size_t b, std::size_t i,
                 std::size_t j) const {
    return ((a * n_vir() + b) * no() + i) * no() + j;
  }

 private:
  std::size_t no() const { return occ_.size(); }

  std::size_t n_ = 0;
  Determinant ref_;
  std::vector<std::size_t> occ_, vir_;
  std::vector<double> t1_, t2_;
};

}  // namespace dvqe
