#include "dvqe/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dvqe/error.hpp"
#include "dvqe/parallel.hpp"

namespace dvqe {
namespace {

std::size_t so(std::size_t k, bool beta) { return spin_orbital(k, beta); }

}  // namespace

SigmaOperator::StringMatrix SigmaOperator::build_string_matrix(
    const NormalOrderedOperator& op, const StringSpace& strings,
    bool beta) const {
  StringMatrix m;
  m.row_start.push_back(0);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    row.clear();
    for (const auto& e : strings.singles(i)) {
      const double c = op.h(so(e.p, beta), so(e.r, beta));
      if (c != 0.0) row.emplace_back(e.source, absolute_ ? std::abs(c) : e.sign * c);
    }
    for (const auto& e : strings.doubles(i)) {
      const double c =
          op.v(so(e.p, beta), so(e.q, beta), so(e.r, beta), so(e.s, beta));
      if (c != 0.0) row.emplace_back(e.source, absolute_ ? std::abs(c) : e.sign * c);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size();) {
      std::size_t l = k;
      double sum = 0.0;
      while (l < row.size() && row[l].first == row[k].first) sum += row[l++].second;
      if (sum != 0.0 || absolute_) {
        m.col.push_back(row[k].first);
        m.val.push_back(sum);
      }
      k = l;
    }
    m.row_start.push_back(static_cast<std::uint32_t>(m.col.size()));
  }
  return m;
}

SigmaOperator::SigmaOperator(const NormalOrderedOperator& op, SpacePtr space,
                             bool absolute)
    : space_(std::move(space)), absolute_(absolute) {
  if (!op.is_bare()) {
    throw IncompatibleOperator("sigma builds need a bare-vacuum operator");
  }
  if (op.n_spinorbitals() != space_->n_spinorbitals()) {
    throw DimensionMismatch("operator has " +
                            std::to_string(op.n_spinorbitals()) +
                            " spin orbitals, space has " +
                            std::to_string(space_->n_spinorbitals()));
  }
  scalar_ = absolute ? std::abs(op.scalar()) : op.scalar();
  ha_ = build_string_matrix(op, space_->alpha(), false);
  hb_ = build_string_matrix(op, space_->beta(), true);
  const std::size_t n = space_->n_spatial();
  vab_.assign(n * n * n * n, 0.0);
  vab_nonzero_.assign(n * n, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = 0; s < n; ++s) {
          double c = op.v(so(p, false), so(q, true), so(r, false), so(s, true));
          if (absolute) c = std::abs(c);
          vab_[((p * n + r) * n + q) * n + s] = c;
          if (c != 0.0) vab_nonzero_[p * n + r] = 1;
        }
}

void SigmaOperator::apply_blocked(const Eigen::VectorXd& x,
                                  Eigen::VectorXd& y) const {
  const StringSpace& A = space_->alpha();
  const StringSpace& B = space_->beta();
  const std::size_t na = A.size(), nb = B.size(), n = space_->n_spatial();
  const double* xd = x.data();
  double* yd = y.data();
  const bool abs_mode = absolute_;
  parallel_for(na, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ia = begin; ia < end; ++ia) {
      double* yrow = yd + ia * nb;
      const double* xrow = xd + ia * nb;
      for (std::size_t ib = 0; ib < nb; ++ib) yrow[ib] = scalar_ * xrow[ib];
      for (std::uint32_t k = ha_.row_start[ia]; k < ha_.row_start[ia + 1]; ++k) {
        const double c = ha_.val[k];
        const double* src = xd + static_cast<std::size_t>(ha_.col[k]) * nb;
        for (std::size_t ib = 0; ib < nb; ++ib) yrow[ib] += c * src[ib];
      }
      for (std::size_t ib = 0; ib < nb; ++ib) {
        double acc = 0.0;
        for (std::uint32_t k = hb_.row_start[ib]; k < hb_.row_start[ib + 1]; ++k)
          acc += hb_.val[k] * xrow[hb_.col[k]];
        yrow[ib] += acc;
      }
      for (const auto& ea : A.singles(ia)) {
        if (!vab_nonzero_[ea.p * n + ea.r]) continue;
        const double* w = vab_.data() + (ea.p * n + ea.r) * n * n;
        const double sa = abs_mode ? 1.0 : ea.sign;
        const double* src = xd + static_cast<std::size_t>(ea.source) * nb;
        for (std::size_t ib = 0; ib < nb; ++ib) {
          double acc = 0.0;
          for (const auto& eb : B.singles(ib)) {
            const double c = w[eb.p * n + eb.r];
            if (c != 0.0) acc += (abs_mode ? c : eb.sign * c) * src[eb.source];
          }
          yrow[ib] += sa * acc;
        }
      }
    }
  });
}

void SigmaOperator::apply(const Eigen::VectorXd& in,
                          Eigen::VectorXd& out) const {
  const auto dim = static_cast<Eigen::Index>(space_->size());
  if (in.size() != dim) {
    throw DimensionMismatch("vector length " + std::to_string(in.size()) +
                            " does not match space dimension " +
                            std::to_string(dim));
  }
  out.resize(dim);
  if (absolute_) {
    apply_blocked(in, out);
    return;
  }
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    x[i] = space_->block_phase(static_cast<std::size_t>(i)) * in[i];
  apply_blocked(x, out);
  for (Eigen::Index i = 0; i < dim; ++i)
    out[i] *= space_->block_phase(static_cast<std::size_t>(i));
}

Eigen::VectorXd SigmaOperator::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out;
  apply(in, out);
  return out;
}

Eigen::VectorXd SigmaOperator::diagonal() const {
  const StringSpace& A = space_->alpha();
  const StringSpace& B = space_->beta();
  const std::size_t na = A.size(), nb = B.size(), n = space_->n_spatial();
  auto string_diag = [](const StringMatrix& m, std::size_t i) {
    for (std::uint32_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k)
      if (m.col[k] == i) return m.val[k];
    return 0.0;
  };
  Eigen::VectorXd d(static_cast<Eigen::Index>(na * nb));
  for (std::size_t ia = 0; ia < na; ++ia) {
    const double da = string_diag(ha_, ia);
    for (std::size_t ib = 0; ib < nb; ++ib) {
      double x = scalar_ + da + string_diag(hb_, ib);
      for (std::uint64_t a = A.string(ia); a; a &= a - 1) {
        const auto p = static_cast<std::size_t>(std::countr_zero(a));
        for (std::uint64_t b = B.string(ib); b; b &= b - 1) {
          const auto q = static_cast<std::size_t>(std::countr_zero(b));
          x += vab_[((p * n + p) * n + q) * n + q];
        }
      }
      d[static_cast<Eigen::Index>(ia * nb + ib)] = x;
    }
  }
  return d;
}

double SigmaOperator::row_sum_bound() const {
  if (!absolute_) {
    throw ContractViolation("row_sum_bound needs an absolute-mode operator");
  }
  const auto dim = static_cast<Eigen::Index>(space_->size());
  return apply(Eigen::VectorXd::Ones(dim)).maxCoeff();
}

CIVector apply_operator(const NormalOrderedOperator& op, const CIVector& v) {
  if (!v.space) throw DimensionMismatch("vector has no determinant space");
  SigmaOperator sigma(op, v.space);
  return {v.space, sigma.apply(v.coefficients)};
}

double rayleigh_quotient(const NormalOrderedOperator& op, const CIVector& v) {
  const CIVector hv = apply_operator(op, v);
  const double nn = v.coefficients.squaredNorm();
  if (!(nn > 0.0)) throw DegenerateVector("zero vector in Rayleigh quotient");
  return v.coefficients.dot(hv.coefficients) / nn;
}

TransitionDensity transition_density(
    const DeterminantSpace& space,
    const std::vector<const Eigen::VectorXd*>& bras,
    const std::vector<const Eigen::VectorXd*>& kets,
    const std::vector<double>& weights) {
  if (bras.size() != kets.size() || bras.size() != weights.size()) {
    throw DimensionMismatch("bra/ket/weight lists differ in length");
  }
  const StringSpace& A = space.alpha();
  const StringSpace& B = space.beta();
  const std::size_t na = A.size(), nb = B.size(), n = space.n_spatial();
  const std::size_t N = 2 * n;
  TransitionDensity out;
  out.n = N;
  out.one.assign(N * N, 0.0);
  out.two.assign(N * N * N * N, 0.0);
  std::vector<double> gab(n * n * n * n, 0.0);  // [p][r][q][s]
  auto G = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) -> double& {
    return out.two[((p * N + q) * N + r) * N + s];
  };

  const auto dim = static_cast<Eigen::Index>(space.size());
  Eigen::VectorXd eps(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    eps[i] = space.block_phase(static_cast<std::size_t>(i));

  for (std::size_t t = 0; t < bras.size(); ++t) {
    if (bras[t]->size() != dim || kets[t]->size() != dim) {
      throw DimensionMismatch("density vectors do not match the space");
    }
    const Eigen::VectorXd bv = eps.cwiseProduct(*bras[t]) * weights[t];
    const Eigen::VectorXd kv = eps.cwiseProduct(*kets[t]);
    const double* b = bv.data();
    const double* k = kv.data();
    for (std::size_t ia = 0; ia < na; ++ia) {
      const double* brow = b + ia * nb;
      const double* krow = k + ia * nb;
      for (const auto& e : A.singles(ia)) {
        const double* src = k + static_cast<std::size_t>(e.source) * nb;
        double dot = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) dot += brow[ib] * src[ib];
        out.one[so(e.p, false) * N + so(e.r, false)] += e.sign * dot;
        double* g = gab.data() + (e.p * n + e.r) * n * n;
        for (std::size_t ib = 0; ib < nb; ++ib) {
          const double x = brow[ib] * e.sign;
          if (x == 0.0) continue;
          for (const auto& f : B.singles(ib))
            g[f.p * n + f.r] += x * f.sign * src[f.source];
        }
      }
      for (const auto& e : A.doubles(ia)) {
        const double* src = k + static_cast<std::size_t>(e.source) * nb;
        double dot = 0.0;
        for (std::size_t ib = 0; ib < nb; ++ib) dot += brow[ib] * src[ib];
        G(so(e.p, false), so(e.q, false), so(e.r, false), so(e.s, false)) +=
            e.sign * dot;
      }
      for (std::size_t ib = 0; ib < nb; ++ib) {
        const double x = brow[ib];
        if (x == 0.0) continue;
        for (const auto& f : B.singles(ib))
          out.one[so(f.p, true) * N + so(f.r, true)] += x * f.sign * krow[f.source];
        for (const auto& f : B.doubles(ib))
          G(so(f.p, true), so(f.q, true), so(f.r, true), so(f.s, true)) +=
              x * f.sign * krow[f.source];
      }
    }
  }

  // same-spin entries were accumulated with p<q, r<s; opposite-spin into gab
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = p + 1; q < N; ++q)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t s = r + 1; s < N; ++s) {
          if (is_beta(p) != is_beta(q) || is_beta(r) != is_beta(s)) continue;
          const double x = G(p, q, r, s);
          G(q, p, r, s) = -x;
          G(p, q, s, r) = -x;
          G(q, p, s, r) = x;
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = 0; s < n; ++s) {
          const double x = gab[((p * n + r) * n + q) * n + s];
          const std::size_t P = so(p, false), Q = so(q, true);
          const std::size_t R = so(r, false), S = so(s, true);
          G(P, Q, R, S) = x;
          G(Q, P, S, R) = x;
          G(P, Q, S, R) = -x;
          G(Q, P, R, S) = -x;
        }
  return out;
}

TransitionDensity transition_density(const CIVector& bra, const CIVector& ket) {
  if (!bra.space || !ket.space || !(*bra.space == *ket.space)) {
    throw DimensionMismatch("bra and ket live in different spaces");
  }
  return transition_density(*bra.space, {&bra.coefficients}, {&ket.coefficients},
                            {1.0});
}

}  // namespace dvqe
