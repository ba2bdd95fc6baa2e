#include "dvqe/determinant.hpp"

#include "dvqe/error.hpp"

namespace dvqe {

Determinant Determinant::from_spin_orbitals(
    const std::vector<std::size_t>& occ) {
  Determinant d;
  for (std::size_t p : occ) {
    if (spatial_of(p) >= kMaxSpatialOrbitals) {
      throw InvalidReference("spin orbital " + std::to_string(p) +
                             " exceeds the supported orbital count");
    }
    const std::uint64_t m = std::uint64_t{1} << spatial_of(p);
    (is_beta(p) ? d.beta : d.alpha) |= m;
  }
  return d;
}

Determinant Determinant::lowest(int n_alpha, int n_beta) {
  if (n_alpha < 0 || n_beta < 0 || n_alpha > 64 || n_beta > 64) {
    throw InvalidReference("invalid electron counts");
  }
  return {detail::below(static_cast<std::size_t>(n_alpha)),
          detail::below(static_cast<std::size_t>(n_beta))};
}

std::size_t Determinant::spin_orbital_extent() const {
  std::size_t extent = 0;
  if (alpha) extent = 2 * (64 - std::countl_zero(alpha)) - 1;
  if (beta) extent = std::max<std::size_t>(extent, 2 * (64 - std::countl_zero(beta)));
  return extent;
}

std::vector<std::size_t> Determinant::occupied_spin_orbitals() const {
  std::vector<std::size_t> occ;
  const std::size_t extent = spin_orbital_extent();
  for (std::size_t p = 0; p < extent; ++p) {
    if (occupied(p)) occ.push_back(p);
  }
  return occ;
}

std::string Determinant::to_bitstring(std::size_t n_spinorbitals) const {
  std::string bits(n_spinorbitals, '0');
  for (std::size_t p = 0; p < n_spinorbitals; ++p) {
    if (occupied(p)) bits[p] = '1';
  }
  return bits;
}

Determinant Determinant::from_bitstring(const std::string& bits) {
  std::vector<std::size_t> occ;
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (bits[p] == '1') {
      occ.push_back(p);
    } else if (bits[p] != '0') {
      throw FormatError("occupation string contains '" +
                        std::string(1, bits[p]) + "'");
    }
  }
  return from_spin_orbitals(occ);
}

}  // namespace dvqe
