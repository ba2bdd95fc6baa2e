#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dvqe {

/// Spin orbitals are interleaved: 2k is alpha, 2k+1 is beta of spatial k.
inline constexpr std::size_t kMaxSpatialOrbitals = 32;

constexpr std::size_t spatial_of(std::size_t spin_orbital) {
  return spin_orbital >> 1;
}
constexpr bool is_beta(std::size_t spin_orbital) { return spin_orbital & 1; }
constexpr std::size_t spin_orbital(std::size_t spatial, bool beta) {
  return 2 * spatial + (beta ? 1 : 0);
}

/// Occupation pattern stored as alpha/beta bitmasks over spatial orbitals.
/// The ket is a_{p1}^+ a_{p2}^+ ... |vac> with p1 < p2 < ... in interleaved
/// spin-orbital order.
struct Determinant {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;

  static Determinant from_spin_orbitals(const std::vector<std::size_t>& occ);
  /// Aufbau filling of the lowest orbitals.
  static Determinant lowest(int n_alpha, int n_beta);

  bool occupied(std::size_t p) const {
    const std::uint64_t mask = std::uint64_t{1} << spatial_of(p);
    return ((is_beta(p) ? beta : alpha) & mask) != 0;
  }
  int n_alpha() const { return std::popcount(alpha); }
  int n_beta() const { return std::popcount(beta); }
  int n_electrons() const { return n_alpha() + n_beta(); }
  /// One past the highest occupied spin orbital (0 for the empty determinant).
  std::size_t spin_orbital_extent() const;
  std::vector<std::size_t> occupied_spin_orbitals() const;
  /// '0'/'1' per spin orbital, interleaved order.
  std::string to_bitstring(std::size_t n_spinorbitals) const;
  static Determinant from_bitstring(const std::string& bits);

  friend auto operator<=>(const Determinant&, const Determinant&) = default;
};

namespace detail {

constexpr std::uint64_t below(std::size_t k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

/// Parity of occupied spin orbitals strictly below p.
inline int parity_below(std::uint64_t alpha, std::uint64_t beta,
                        std::size_t p) {
  const std::size_t k = spatial_of(p);
  int count = std::popcount(alpha & below(k)) + std::popcount(beta & below(k));
  if (is_beta(p)) count += static_cast<int>((alpha >> k) & 1);
  return count & 1;
}

/// a_p acting in place; returns the sign, or 0 when p is empty.
inline int annihilate(std::uint64_t& alpha, std::uint64_t& beta,
                      std::size_t p) {
  std::uint64_t& s = is_beta(p) ? beta : alpha;
  const std::uint64_t m = std::uint64_t{1} << spatial_of(p);
  if (!(s & m)) return 0;
  const int sign = parity_below(alpha, beta, p) ? -1 : 1;
  s &= ~m;
  return sign;
}

/// a_p^+ acting in place; returns the sign, or 0 when p is occupied.
inline int create(std::uint64_t& alpha, std::uint64_t& beta, std::size_t p) {
  std::uint64_t& s = is_beta(p) ? beta : alpha;
  const std::uint64_t m = std::uint64_t{1} << spatial_of(p);
  if (s & m) return 0;
  const int sign = parity_below(alpha, beta, p) ? -1 : 1;
  s |= m;
  return sign;
}

}  // namespace detail

}  // namespace dvqe
