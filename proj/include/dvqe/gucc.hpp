#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dvqe/amplitudes.hpp"
#include "dvqe/ci_space.hpp"
#include "dvqe/expm.hpp"
#include "dvqe/operator.hpp"
#include "dvqe/sigma.hpp"

namespace dvqe {

/// Single (p,q), p > q: a_p^+ a_q - h.c.
/// Double (p,q,r,s), p > q, r > s, (p,q) > (r,s): a_p^+ a_q^+ a_s a_r - h.c.
struct Excitation {
  int rank = 1;
  std::array<std::uint8_t, 4> idx{};
  std::uint32_t key() const;
  friend bool operator==(const Excitation&, const Excitation&) = default;
};

class ExcitationPool {
 public:
  ExcitationPool() = default;
  /// Every canonical label over n spin orbitals; with conserve_sz only labels
  /// that keep S_z.
  static ExcitationPool generalized(std::size_t n_spinorbitals, bool conserve_sz = true);
  /// Only occupied -> virtual labels relative to reference (classic UCCSD).
  static ExcitationPool occupied_virtual(std::size_t n_spinorbitals,
                                         const Determinant& reference,
                                         bool conserve_sz = true);

  std::size_t size() const { return labels_.size(); }
  std::size_t n_spinorbitals() const { return n_; }
  bool conserves_sz() const { return conserve_sz_; }
  const std::vector<Excitation>& labels() const { return labels_; }
  const Excitation& operator[](std::size_t k) const { return labels_[k]; }
  std::optional<std::size_t> find(const Excitation& e) const;

 private:
  void add(const Excitation& e);
  std::size_t n_ = 0;
  bool conserve_sz_ = true;
  std::vector<Excitation> labels_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

/// A(theta) = sum_k theta_k (X_k - X_k^+)
AntiHermitianGenerator build_generator(const Eigen::VectorXd& theta, const ExcitationPool& pool);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct GuccConfig {
  int quadrature_order = 16;
  double expm_tol = 1e-12;
};

/// Energy and gradient of <ref| e^{-A} H e^{A} |ref> for one H, pool and ket.
class GuccObjective {
 public:
  GuccObjective(const NormalOrderedOperator& h, ExcitationPool pool, CIVector reference,
                GuccConfig config = {});

  const ExcitationPool& pool() const { return pool_; }
  const CIVector& reference() const { return ref_; }
  const NormalOrderedOperator& hamiltonian() const { return h_; }

  CIVector state(const Eigen::VectorXd& theta) const;
  double energy(const Eigen::VectorXd& theta) const;
  /// Wilcox identity with Gauss-Legendre quadrature.
  double energy_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const;

  /// Largest |(|psi| - 1)| over every prepared state so far.
  double max_norm_error() const { return max_norm_error_; }
  double min_energy() const { return min_energy_; }
  long evaluations() const { return evaluations_; }

 private:
  void check(const Eigen::VectorXd& theta) const;
  double record(const Eigen::VectorXd& psi, const Eigen::VectorXd& hpsi) const;

  NormalOrderedOperator h_;
  ExcitationPool pool_;
  CIVector ref_;
  GuccConfig config_;
  SigmaOperator hsigma_;
  std::vector<double> nodes_, weights_;
  mutable double max_norm_error_ = 0.0;
  mutable double min_energy_ = 0.0;
  mutable long evaluations_ = 0;
};

double energy(const Eigen::VectorXd& theta, const ExcitationPool& pool,
              const NormalOrderedOperator& h, const CIVector& ref);
Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const ExcitationPool& pool,
                         const NormalOrderedOperator& h, const CIVector& ref,
                         int quadrature_order = 16);

/// T1/T2 of a CI vector relative to reference (intermediate normalization,
/// disconnected T1 products removed from T2). |c_0| < 1e-6 is an error.
ClusterAmplitudes amplitudes_from_vector(const CIVector& v, const Determinant& reference);

/// Occupied -> virtual amplitudes placed on the matching pool labels.
Eigen::VectorXd parameters_from_amplitudes(const ClusterAmplitudes& t, const ExcitationPool& pool);

enum class InitialGuess { Zero, MP2, FromVector };

Eigen::VectorXd initial_parameters(InitialGuess kind, const ExcitationPool& pool,
                                   const NormalOrderedOperator& h, const Determinant& reference,
                                   const CIVector* vector = nullptr);

}  // namespace dvqe
