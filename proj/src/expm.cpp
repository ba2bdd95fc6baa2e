#include "dvqe/expm.hpp"

#include <cmath>
#include <string>

#include "dvqe/error.hpp"

namespace dvqe {

Propagator::Propagator(const AntiHermitianGenerator& a, SpacePtr space, double tol)
    : sigma_(a.as_operator(), space), tol_(tol) {
  const double viol = a.as_operator().max_anti_hermiticity_violation();
  if (viol > 1e-12) {
    throw ContractViolation("generator is not anti-Hermitian (violation " +
                            std::to_string(viol) + ")");
  }
  bound_ = SigmaOperator(a.as_operator(), space, true).row_sum_bound();
  if (bound_ == 0.0) return;

  // power iteration on A^2 from a fixed pseudo-random start
  const auto dim = static_cast<Eigen::Index>(space->size());
  Eigen::VectorXd x(dim), y(dim);
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (Eigen::Index i = 0; i < dim; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    x[i] = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
  x.normalize();
  double est = 0.0;
  for (int k = 0; k < 3; ++k) {
    sigma_.apply(x, y);
    sigma_.apply(y, x);
    matvecs_ += 2;
    const double nx = x.norm();
    if (nx == 0.0) break;
    est = std::sqrt(nx);
    x /= nx;
  }
  norm_ = std::min(bound_, 1.5 * est);
  if (!(norm_ > 0.0)) norm_ = bound_;
}

std::vector<Eigen::VectorXd> Propagator::apply_chain(const Eigen::VectorXd& v,
                                                     const std::vector<double>& times,
                                                     double sign) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
      throw ContractViolation("propagation times must be non-negative and ascending");
    }
  }
  const double total = times.back();
  const double x = total * norm_;
  if (x == 0.0) {
    out.assign(times.size(), v);
    return out;
  }
  const long segments = std::max(1L, static_cast<long>(std::ceil(x / 3.0)));
  const double h = total / static_cast<double>(segments);
  const double stop = tol_ * std::max(v.norm(), 1e-300);

  Eigen::VectorXd w = v;
  std::vector<Eigen::VectorXd> terms;
  std::size_t next = 0;
  for (long seg = 0; seg < segments; ++seg) {
    const double t0 = h * static_cast<double>(seg);
    const double t1 = seg + 1 == segments ? total : t0 + h;
    terms.clear();
    terms.push_back(w);
    int small = 0;
    for (int k = 1; k < 200 && small < 2; ++k) {
      Eigen::VectorXd t(w.size());
      sigma_.apply(terms.back(), t);
      ++matvecs_;
      t *= sign * h / k;
      small = t.norm() < stop ? small + 1 : 0;
      terms.push_back(std::move(t));
    }
    // times inside (t0, t1]; Horner in the fraction of the segment
    while (next < times.size() && (times[next] <= t1 || seg + 1 == segments)) {
      const double f = (times[next] - t0) / h;
      Eigen::VectorXd y = terms.back();
      for (std::size_t k = terms.size() - 1; k-- > 0;) y = f * y + terms[k];
      out.push_back(std::move(y));
      ++next;
    }
    w = terms[0];
    for (std::size_t k = 1; k < terms.size(); ++k) w += terms[k];
  }
  return out;
}

Eigen::VectorXd Propagator::apply(const Eigen::VectorXd& v, double t) const {
  if (t == 0.0) return v;
  return apply_chain(v, {std::abs(t)}, t < 0 ? -1.0 : 1.0).front();
}

CIVector apply_exponential(const AntiHermitianGenerator& a, const CIVector& v, double tol) {
  if (!v.space) throw DimensionMismatch("vector has no determinant space");
  const Propagator prop(a, v.space, tol);
  return {v.space, prop.apply(v.coefficients)};
}

}  // namespace dvqe
