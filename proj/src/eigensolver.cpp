#include "dvqe/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dvqe/error.hpp"
#include "dvqe/fock_matrix.hpp"
#include "dvqe/sigma.hpp"

namespace dvqe {
namespace {

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
}

void check_hermitian(const NormalOrderedOperator& op, double tol) {
  const double dev = op.max_hermiticity_violation();
  if (dev > tol) {
    throw ContractViolation("operator is not Hermitian (deviation " +
                            std::to_string(dev) + ")");
  }
}

}  // namespace

GroundState davidson(const NormalOrderedOperator& op, SpacePtr space,
                     const GroundStateConfig& config) {
  check_hermitian(op, config.hermiticity_tol);
  const SigmaOperator sigma(op, space);
  const auto dim = static_cast<Eigen::Index>(space->size());
  const Eigen::VectorXd diag = sigma.diagonal();

  Eigen::VectorXd v0;
  if (config.guess) {
    if (config.guess->coefficients.size() != dim) {
      throw DimensionMismatch("Davidson guess does not match the space");
    }
    v0 = config.guess->coefficients;
  } else {
    Eigen::Index imin = 0;
    diag.minCoeff(&imin);
    v0 = Eigen::VectorXd::Zero(dim);
    v0[imin] = 1.0;
  }
  // a small fixed admixture keeps the search out of symmetry-blocked subspaces
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (Eigen::Index i = 0; i < dim; ++i) v0[i] += 1e-4 * uni(rng);
  v0.normalize();

  GroundState result;
  if (dim == 1) {
    result.energy = diag[0];
    result.vector = CIVector(space, Eigen::VectorXd::Ones(1));
    return result;
  }

  const int max_sub = std::max(2, std::min<int>(config.max_subspace, static_cast<int>(dim)));
  const int keep = std::max(1, std::min(config.restart_size, max_sub - 1));
  std::vector<Eigen::VectorXd> V{v0}, AV{sigma.apply(v0)};
  std::vector<double> history;
  for (int it = 1; it <= config.max_iter; ++it) {
    const int m = static_cast<int>(V.size());
    Eigen::MatrixXd S(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = 0.5 * (V[i].dot(AV[j]) + V[j].dot(AV[i]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const double theta = es.eigenvalues()[0];
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim), ax = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i) {
      x += y[i] * V[i];
      ax += y[i] * AV[i];
    }
    Eigen::VectorXd r = ax - theta * x;
    const double rn = r.norm();
    history.push_back(rn);
    if (rn < config.residual_tol) {
      fix_sign(x);
      x.normalize();
      result.energy = theta;
      result.vector = CIVector(space, x);
      result.iterations = it;
      result.residual = rn;
      return result;
    }
    if (m >= max_sub) {
      std::vector<Eigen::VectorXd> nv, nav;
      for (int c = 0; c < keep; ++c) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(dim), b = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < m; ++i) {
          a += es.eigenvectors()(i, c) * V[i];
          b += es.eigenvectors()(i, c) * AV[i];
        }
        nv.push_back(std::move(a));
        nav.push_back(std::move(b));
      }
      V = std::move(nv);
      AV = std::move(nav);
    }
    Eigen::VectorXd t(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      double den = theta - diag[i];
      if (std::abs(den) < 1e-8) den = den < 0 ? -1e-8 : 1e-8;
      t[i] = r[i] / den;
    }
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : V) t -= b.dot(t) * b;
    double tn = t.norm();
    if (tn < 1e-10) {
      // preconditioned correction collapsed; fall back to the raw residual
      t = r;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : V) t -= b.dot(t) * b;
      tn = t.norm();
      if (tn < 1e-14) break;
    }
    t /= tn;
    AV.push_back(sigma.apply(t));
    V.push_back(std::move(t));
  }
  throw ConvergenceError("Davidson did not reach residual " +
                             std::to_string(config.residual_tol),
                         history);
}

GroundState ground_state(const NormalOrderedOperator& op, SpacePtr space,
                         const GroundStateConfig& config) {
  check_hermitian(op, config.hermiticity_tol);
  if (space->size() > config.dense_cap) return davidson(op, space, config);
  Eigen::MatrixXd m = to_fock_matrix(op, *space, std::max(config.dense_cap, space->size()));
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd x = es.eigenvectors().col(0);
  fix_sign(x);
  GroundState gs;
  gs.energy = es.eigenvalues()[0];
  gs.vector = CIVector(space, x);
  gs.residual = (m * x - gs.energy * x).norm();
  return gs;
}

double overlap(const CIVector& a, const CIVector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("overlap of vectors from different spaces");
  }
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw DegenerateVector("zero-norm vector");
  return std::abs(a.coefficients.dot(b.coefficients)) / (na * nb);
}

double delta_norm_from_overlap(double ov) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * ov));
}

double delta_norm(const CIVector& a, const CIVector& b) {
  return delta_norm_from_overlap(overlap(a, b));
}

}  // namespace dvqe
