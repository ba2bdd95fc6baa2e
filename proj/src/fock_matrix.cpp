#include "dvqe/fock_matrix.hpp"

#include <bit>
#include <string>
#include <vector>

#include "dvqe/error.hpp"

namespace dvqe {
namespace {

std::vector<std::size_t> spin_orbitals_in(std::uint64_t alpha,
                                          std::uint64_t beta) {
  std::vector<std::size_t> out;
  for (std::uint64_t a = alpha; a; a &= a - 1)
    out.push_back(spin_orbital(std::countr_zero(a), false));
  for (std::uint64_t b = beta; b; b &= b - 1)
    out.push_back(spin_orbital(std::countr_zero(b), true));
  return out;
}

double element(const NormalOrderedOperator& op, const Determinant& bra,
               const Determinant& ket) {
  const std::uint64_t da = bra.alpha ^ ket.alpha, db = bra.beta ^ ket.beta;
  const int rank = (std::popcount(da) + std::popcount(db)) / 2;
  if (rank > 2) return 0.0;
  if (rank == 0) {
    const auto occ = ket.occupied_spin_orbitals();
    double e = op.scalar();
    for (std::size_t i : occ) e += op.h(i, i);
    for (std::size_t i : occ)
      for (std::size_t j : occ) e += 0.5 * op.v(i, j, i, j);
    return e;
  }
  // removed from ket, added in bra, each ascending
  const auto holes = spin_orbitals_in(da & ket.alpha, db & ket.beta);
  const auto parts = spin_orbitals_in(da & bra.alpha, db & bra.beta);
  std::uint64_t a = ket.alpha, b = ket.beta;
  if (rank == 1) {
    const std::size_t r = holes[0], p = parts[0];
    int sign = detail::annihilate(a, b, r);
    sign *= detail::create(a, b, p);
    double x = op.h(p, r);
    for (std::size_t k : ket.occupied_spin_orbitals())
      if (k != r) x += op.v(p, k, r, k);
    return sign * x;
  }
  std::size_t r = holes[0], s = holes[1], p = parts[0], q = parts[1];
  int sign = detail::annihilate(a, b, r);
  sign *= detail::annihilate(a, b, s);
  sign *= detail::create(a, b, q);
  sign *= detail::create(a, b, p);
  return sign * op.v(p, q, r, s);
}

}  // namespace

Eigen::MatrixXd to_fock_matrix(const NormalOrderedOperator& op,
                               const DeterminantSpace& space, std::size_t cap) {
  if (!op.is_bare()) {
    throw IncompatibleOperator("matrix oracle expects a bare-vacuum operator");
  }
  if (op.n_spinorbitals() != space.n_spinorbitals()) {
    throw DimensionMismatch("operator and space differ in orbital count");
  }
  const std::size_t dim = space.size();
  if (dim > cap) {
    throw OracleTooLarge("space dimension " + std::to_string(dim) +
                         " exceeds the oracle cap " + std::to_string(cap));
  }
  std::vector<Determinant> dets(dim);
  for (std::size_t i = 0; i < dim; ++i) dets[i] = space.determinant(i);
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          element(op, dets[i], dets[j]);
  return m;
}

}  // namespace dvqe
