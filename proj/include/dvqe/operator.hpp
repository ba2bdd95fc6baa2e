#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dvqe/determinant.hpp"

namespace dvqe {

/// scalar + sum_pq h[p][q] {a_p^+ a_q} + 1/4 sum_pqrs v[p][q][r][s]
/// {a_p^+ a_q^+ a_s a_r}, where {...} is normal ordering with respect to
/// the bare vacuum or a Fermi-vacuum reference determinant.
class NormalOrderedOperator {
 public:
  NormalOrderedOperator() = default;
  explicit NormalOrderedOperator(std::size_t n_spinorbitals);
  NormalOrderedOperator(std::size_t n_spinorbitals, Determinant fermi_vacuum);

  std::size_t n_spinorbitals() const { return n_; }
  bool is_bare() const { return !vacuum_.has_value(); }
  const std::optional<Determinant>& fermi_vacuum() const { return vacuum_; }
  bool same_frame(const NormalOrderedOperator& other) const {
    return n_ == other.n_ && vacuum_ == other.vacuum_;
  }

  double scalar() const { return scalar_; }
  double& scalar() { return scalar_; }

  double h(std::size_t p, std::size_t q) const { return h_[p * n_ + q]; }
  double& h(std::size_t p, std::size_t q) { return h_[p * n_ + q]; }

  double v(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return v_[idx(p, q, r, s)];
  }
  /// Sets all four antisymmetric copies. Ignored when p == q or r == s.
  void set_v(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
             double value);
  /// Adds value to all four antisymmetric copies.
  void add_v(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
             double value);

  const std::vector<double>& one_body() const { return h_; }
  std::vector<double>& one_body() { return h_; }
  /// Row-major n^4 tensor; writers must keep it antisymmetric.
  const std::vector<double>& two_body() const { return v_; }
  std::vector<double>& two_body() { return v_; }

  bool has_two_body() const;
  std::size_t idx(std::size_t p, std::size_t q, std::size_t r,
                  std::size_t s) const {
    return ((p * n_ + q) * n_ + r) * n_ + s;
  }

  NormalOrderedOperator adjoint() const;
  /// Same tensors relabeled to another vacuum; no reordering.
  NormalOrderedOperator with_vacuum(std::optional<Determinant> vacuum) const;

  double max_hermiticity_violation() const;
  double max_anti_hermiticity_violation() const;
  double max_antisymmetry_violation() const;
  double max_abs_difference(const NormalOrderedOperator& other) const;

  NormalOrderedOperator& operator+=(const NormalOrderedOperator& other);
  NormalOrderedOperator& operator-=(const NormalOrderedOperator& other);
  NormalOrderedOperator& operator*=(double factor);
  /// this += factor * other
  NormalOrderedOperator& axpy(double factor, const NormalOrderedOperator& other);

  friend NormalOrderedOperator operator+(NormalOrderedOperator a,
                                         const NormalOrderedOperator& b) {
    return a += b;
  }
  friend NormalOrderedOperator operator-(NormalOrderedOperator a,
                                         const NormalOrderedOperator& b) {
    return a -= b;
  }
  friend NormalOrderedOperator operator*(double f, NormalOrderedOperator a) {
    return a *= f;
  }

 private:
  void check_frame(const NormalOrderedOperator& other) const;

  std::size_t n_ = 0;
  std::optional<Determinant> vacuum_;
  double scalar_ = 0.0;
  std::vector<double> h_;
  std::vector<double> v_;
};

/// Anti-Hermitian operator with no scalar part, always bare-vacuum ordered.
class AntiHermitianGenerator {
 public:
  AntiHermitianGenerator() = default;
  explicit AntiHermitianGenerator(std::size_t n_spinorbitals)
      : op_(n_spinorbitals) {}
  /// Validates anti-Hermiticity to tol.
  static AntiHermitianGenerator from_operator(NormalOrderedOperator op,
                                              double tol = 1e-12);

  std::size_t n_spinorbitals() const { return op_.n_spinorbitals(); }
  const NormalOrderedOperator& as_operator() const { return op_; }

  /// theta * (a_p^+ a_q - a_q^+ a_p)
  void add_single(std::size_t p, std::size_t q, double theta);
  /// theta * (a_p^+ a_q^+ a_s a_r - h.c.)
  void add_double(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
                  double theta);

  AntiHermitianGenerator& operator*=(double f) {
    op_ *= f;
    return *this;
  }
  AntiHermitianGenerator& operator+=(const AntiHermitianGenerator& o) {
    op_ += o.op_;
    return *this;
  }

 private:
  NormalOrderedOperator op_;
};

}  // namespace dvqe
