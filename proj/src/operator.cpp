#include "dvqe/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvqe/error.hpp"

namespace dvqe {

NormalOrderedOperator::NormalOrderedOperator(std::size_t n_spinorbitals)
    : n_(n_spinorbitals),
      h_(n_spinorbitals * n_spinorbitals, 0.0),
      v_(n_spinorbitals * n_spinorbitals * n_spinorbitals * n_spinorbitals,
         0.0) {
  if (n_spinorbitals > 2 * kMaxSpatialOrbitals) {
    throw DimensionMismatch("at most " +
                            std::to_string(2 * kMaxSpatialOrbitals) +
                            " spin orbitals are supported");
  }
}

NormalOrderedOperator::NormalOrderedOperator(std::size_t n_spinorbitals,
                                             Determinant fermi_vacuum)
    : NormalOrderedOperator(n_spinorbitals) {
  if (fermi_vacuum.spin_orbital_extent() > n_spinorbitals) {
    throw InvalidReference("reference occupies orbitals beyond " +
                           std::to_string(n_spinorbitals));
  }
  vacuum_ = fermi_vacuum;
}

void NormalOrderedOperator::set_v(std::size_t p, std::size_t q, std::size_t r,
                                  std::size_t s, double value) {
  if (p == q || r == s) return;
  v_[idx(p, q, r, s)] = value;
  v_[idx(q, p, r, s)] = -value;
  v_[idx(p, q, s, r)] = -value;
  v_[idx(q, p, s, r)] = value;
}

void NormalOrderedOperator::add_v(std::size_t p, std::size_t q, std::size_t r,
                                  std::size_t s, double value) {
  if (p == q || r == s) return;
  v_[idx(p, q, r, s)] += value;
  v_[idx(q, p, r, s)] -= value;
  v_[idx(p, q, s, r)] -= value;
  v_[idx(q, p, s, r)] += value;
}

bool NormalOrderedOperator::has_two_body() const {
  return std::any_of(v_.begin(), v_.end(), [](double x) { return x != 0.0; });
}

NormalOrderedOperator NormalOrderedOperator::adjoint() const {
  NormalOrderedOperator out = *this;
  const std::size_t n = n_;
  const std::size_t n2 = n * n;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) out.h_[p * n + q] = h_[q * n + p];
  for (std::size_t pq = 0; pq < n2; ++pq)
    for (std::size_t rs = 0; rs < n2; ++rs) out.v_[pq * n2 + rs] = v_[rs * n2 + pq];
  return out;
}

NormalOrderedOperator NormalOrderedOperator::with_vacuum(
    std::optional<Determinant> vacuum) const {
  NormalOrderedOperator out = *this;
  out.vacuum_ = vacuum;
  return out;
}

double NormalOrderedOperator::max_hermiticity_violation() const {
  const std::size_t n = n_, n2 = n * n;
  double m = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      m = std::max(m, std::abs(h_[p * n + q] - h_[q * n + p]));
  for (std::size_t pq = 0; pq < n2; ++pq)
    for (std::size_t rs = 0; rs < n2; ++rs)
      m = std::max(m, std::abs(v_[pq * n2 + rs] - v_[rs * n2 + pq]));
  return m;
}

double NormalOrderedOperator::max_anti_hermiticity_violation() const {
  const std::size_t n = n_, n2 = n * n;
  double m = std::abs(scalar_);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      m = std::max(m, std::abs(h_[p * n + q] + h_[q * n + p]));
  for (std::size_t pq = 0; pq < n2; ++pq)
    for (std::size_t rs = 0; rs < n2; ++rs)
      m = std::max(m, std::abs(v_[pq * n2 + rs] + v_[rs * n2 + pq]));
  return m;
}

double NormalOrderedOperator::max_antisymmetry_violation() const {
  const std::size_t n = n_;
  double m = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double x = v_[idx(p, q, r, s)];
          m = std::max(m, std::abs(x + v_[idx(q, p, r, s)]));
          m = std::max(m, std::abs(x + v_[idx(p, q, s, r)]));
        }
  return m;
}

double NormalOrderedOperator::max_abs_difference(
    const NormalOrderedOperator& other) const {
  check_frame(other);
  double m = std::abs(scalar_ - other.scalar_);
  for (std::size_t i = 0; i < h_.size(); ++i)
    m = std::max(m, std::abs(h_[i] - other.h_[i]));
  for (std::size_t i = 0; i < v_.size(); ++i)
    m = std::max(m, std::abs(v_[i] - other.v_[i]));
  return m;
}

void NormalOrderedOperator::check_frame(
    const NormalOrderedOperator& other) const {
  if (n_ != other.n_) {
    throw IncompatibleOperator("spin-orbital counts differ: " +
                               std::to_string(n_) + " vs " +
                               std::to_string(other.n_));
  }
  if (vacuum_ != other.vacuum_) {
    throw IncompatibleOperator("operators are normal ordered to different vacua");
  }
}

NormalOrderedOperator& NormalOrderedOperator::operator+=(
    const NormalOrderedOperator& other) {
  return axpy(1.0, other);
}

NormalOrderedOperator& NormalOrderedOperator::operator-=(
    const NormalOrderedOperator& other) {
  return axpy(-1.0, other);
}

NormalOrderedOperator& NormalOrderedOperator::operator*=(double factor) {
  scalar_ *= factor;
  for (double& x : h_) x *= factor;
  for (double& x : v_) x *= factor;
  return *this;
}

NormalOrderedOperator& NormalOrderedOperator::axpy(
    double factor, const NormalOrderedOperator& other) {
  check_frame(other);
  scalar_ += factor * other.scalar_;
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += factor * other.h_[i];
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += factor * other.v_[i];
  return *this;
}

AntiHermitianGenerator AntiHermitianGenerator::from_operator(
    NormalOrderedOperator op, double tol) {
  if (!op.is_bare()) {
    throw IncompatibleOperator("generators are stored in bare-vacuum form");
  }
  const double violation = op.max_anti_hermiticity_violation();
  if (violation > tol) {
    throw ContractViolation("operator is not anti-Hermitian (violation " +
                            std::to_string(violation) + ")");
  }
  AntiHermitianGenerator g;
  g.op_ = std::move(op);
  return g;
}

void AntiHermitianGenerator::add_single(std::size_t p, std::size_t q,
                                        double theta) {
  if (p == q) return;
  op_.h(p, q) += theta;
  op_.h(q, p) -= theta;
}

void AntiHermitianGenerator::add_double(std::size_t p, std::size_t q,
                                        std::size_t r, std::size_t s,
                                        double theta) {
  if (p == q || r == s) return;
  if ((p == r && q == s) || (p == s && q == r)) return;
  op_.add_v(p, q, r, s, theta);
  op_.add_v(r, s, p, q, -theta);
}

}  // namespace dvqe
