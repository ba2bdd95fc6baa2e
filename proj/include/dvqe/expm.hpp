#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dvqe/ci_space.hpp"
#include "dvqe/operator.hpp"
#include "dvqe/sigma.hpp"

namespace dvqe {

/// Action of e^{tA} for one anti-Hermitian A in a fixed determinant space.
/// A step of length t is cut into the fewest equal segments with |t| ||A|| / s <= 3,
/// ||A|| estimated by power iteration and capped by the row-sum bound. Each
/// segment is a Taylor series, truncated once two successive terms drop below
/// tol; intermediate times inside a segment reuse its terms.
class Propagator {
 public:
  Propagator(const AntiHermitianGenerator& a, SpacePtr space, double tol = 1e-12);

  const SpacePtr& space() const { return sigma_.space(); }
  double norm_estimate() const { return norm_; }
  double row_sum_bound() const { return bound_; }
  long matvecs() const { return matvecs_; }

  /// e^{tA} v
  Eigen::VectorXd apply(const Eigen::VectorXd& v, double t = 1.0) const;
  /// e^{sign t_k A} v for ascending t_k >= 0 (sign = +1 or -1).
  std::vector<Eigen::VectorXd> apply_chain(const Eigen::VectorXd& v,
                                           const std::vector<double>& times,
                                           double sign = 1.0) const;

 private:
  SigmaOperator sigma_;
  double bound_ = 0.0;
  double norm_ = 0.0;
  double tol_;
  mutable long matvecs_ = 0;
};

/// e^A v; throws ContractViolation if A is not anti-Hermitian.
CIVector apply_exponential(const AntiHermitianGenerator& a, const CIVector& v,
                           double tol = 1e-12);

}  // namespace dvqe
