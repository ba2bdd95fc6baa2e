#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dvqe/operator.hpp"

namespace dvqe {

/// Spatial-orbital integrals in chemist notation.
struct FcidumpData {
  std::size_t norb = 0;
  int nelec = 0;
  int ms2 = 0;
  int isym = 1;
  std::vector<int> orbsym;
  double core_energy = 0.0;
  std::vector<double> one_electron;  // norb^2
  std::vector<double> two_electron;  // norb^4, (pq|rs)
  /// 8 for ordinary real integrals. 4 marks operators such as downfolded
  /// Hamiltonians where (pq|rs) != (qp|rs); written as PERMSYM=4.
  int permutational_symmetry = 8;

  explicit FcidumpData(std::size_t n = 0);
  double h(std::size_t p, std::size_t q) const { return one_electron[p * norb + q]; }
  double& h(std::size_t p, std::size_t q) { return one_electron[p * norb + q]; }
  double eri(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return two_electron[((p * norb + q) * norb + r) * norb + s];
  }
  double& eri(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return two_electron[((p * norb + q) * norb + r) * norb + s];
  }
  /// Largest deviation from the declared permutational symmetry.
  double max_symmetry_violation() const;
  int n_alpha() const { return (nelec + ms2) / 2; }
  int n_beta() const { return (nelec - ms2) / 2; }
};

FcidumpData parse_fcidump(std::istream& in);
FcidumpData read_fcidump(const std::string& path);

void write_fcidump(const FcidumpData& data, std::ostream& out);
void write_fcidump(const FcidumpData& data, const std::string& path);

/// Bare-vacuum spin-orbital operator over 2*norb interleaved spin orbitals.
NormalOrderedOperator spatial_to_spinorbital(const FcidumpData& data);

/// Inverse of spatial_to_spinorbital for spin-free operators; throws
/// NotSpatiallyRepresentable when spin symmetry is violated beyond tol.
FcidumpData spinorbital_to_spatial(const NormalOrderedOperator& op, int nelec,
                                   int ms2, double tol = 1e-10);

/// Exports a bare-vacuum operator as FCIDUMP.
void write_fcidump(const NormalOrderedOperator& op, int nelec, int ms2,
                   const std::string& path, double tol = 1e-10);

}  // namespace dvqe
