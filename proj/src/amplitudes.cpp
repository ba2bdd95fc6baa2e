#include "dvqe/amplitudes.hpp"

#include "dvqe/error.hpp"

namespace dvqe {

ClusterAmplitudes::ClusterAmplitudes(std::size_t n_spinorbitals,
                                     Determinant reference)
    : n_(n_spinorbitals), ref_(reference) {
  if (reference.spin_orbital_extent() > n_spinorbitals) {
    throw InvalidReference("reference occupies orbitals beyond " +
                           std::to_string(n_spinorbitals));
  }
  for (std::size_t p = 0; p < n_; ++p) {
    (reference.occupied(p) ? occ_ : vir_).push_back(p);
  }
  t1_.assign(n_vir() * n_occ(), 0.0);
  t2_.assign(n_vir() * n_vir() * n_occ() * n_occ(), 0.0);
}

void ClusterAmplitudes::set_t2(std::size_t a, std::size_t b, std::size_t i,
                               std::size_t j, double value) {
  if (a == b || i == j) return;
  t2_[i4(a, b, i, j)] = value;
  t2_[i4(b, a, i, j)] = -value;
  t2_[i4(a, b, j, i)] = -value;
  t2_[i4(b, a, j, i)] = value;
}

}  // namespace dvqe
