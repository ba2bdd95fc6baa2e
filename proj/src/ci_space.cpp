#include "dvqe/ci_space.hpp"

#include <bit>
#include <string>

#include "dvqe/error.hpp"

namespace dvqe {
namespace {

int string_sign_below(std::uint64_t s, std::size_t p) {
  return (std::popcount(s & detail::below(p)) & 1) ? -1 : 1;
}

}  // namespace

StringSpace::StringSpace(std::size_t n_orbitals, int n_particles)
    : n_orb_(n_orbitals), n_part_(n_particles) {
  if (n_orbitals > kMaxSpatialOrbitals) {
    throw DimensionMismatch("at most " + std::to_string(kMaxSpatialOrbitals) +
                            " spatial orbitals are supported");
  }
  if (n_particles < 0 || static_cast<std::size_t>(n_particles) > n_orbitals) {
    throw DimensionMismatch("cannot place " + std::to_string(n_particles) +
                            " electrons of one spin in " +
                            std::to_string(n_orbitals) + " orbitals");
  }
  binom_.assign(n_orb_ + 1, std::vector<std::uint64_t>(n_orb_ + 2, 0));
  for (std::size_t n = 0; n <= n_orb_; ++n) {
    binom_[n][0] = 1;
    for (std::size_t k = 1; k <= n; ++k)
      binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0);
  }

  const std::uint64_t limit = std::uint64_t{1} << n_orb_;
  std::uint64_t s = detail::below(static_cast<std::size_t>(n_particles));
  if (n_particles == 0) {
    strings_.push_back(0);
  } else {
    while (s < limit) {
      strings_.push_back(s);
      const std::uint64_t c = s & (~s + 1);
      const std::uint64_t r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }

  singles_.resize(strings_.size());
  doubles_.resize(strings_.size());
  for (std::size_t i = 0; i < strings_.size(); ++i) {
    const std::uint64_t I = strings_[i];
    for (std::size_t p = 0; p < n_orb_; ++p) {
      if (!((I >> p) & 1)) continue;
      const std::uint64_t Ip = I & ~(std::uint64_t{1} << p);
      const int sp = string_sign_below(I, p);
      for (std::size_t r = 0; r < n_orb_; ++r) {
        if ((Ip >> r) & 1) continue;
        const int sr = string_sign_below(Ip, r);
        const std::uint64_t J = Ip | (std::uint64_t{1} << r);
        singles_[i].push_back({static_cast<std::uint32_t>(rank(J)),
                               static_cast<std::uint8_t>(p),
                               static_cast<std::uint8_t>(r),
                               static_cast<std::int8_t>(sp * sr)});
      }
      for (std::size_t q = p + 1; q < n_orb_; ++q) {
        if (!((Ip >> q) & 1)) continue;
        const int sq = string_sign_below(Ip, q);
        const std::uint64_t Ipq = Ip & ~(std::uint64_t{1} << q);
        for (std::size_t r = 0; r < n_orb_; ++r) {
          if ((Ipq >> r) & 1) continue;
          for (std::size_t t = r + 1; t < n_orb_; ++t) {
            if ((Ipq >> t) & 1) continue;
            // a_r^+ a_t^+ applied after removal: create t first, then r
            const int st = string_sign_below(Ipq, t);
            const std::uint64_t It = Ipq | (std::uint64_t{1} << t);
            const int sr = string_sign_below(It, r);
            const std::uint64_t J = It | (std::uint64_t{1} << r);
            doubles_[i].push_back(
                {static_cast<std::uint32_t>(rank(J)),
                 static_cast<std::uint8_t>(p), static_cast<std::uint8_t>(q),
                 static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(t),
                 static_cast<std::int8_t>(sp * sq * st * sr)});
          }
        }
      }
    }
  }
}

std::size_t StringSpace::rank(std::uint64_t s) const {
  std::size_t r = 0;
  std::size_t j = 1;
  while (s) {
    const auto b = static_cast<std::size_t>(std::countr_zero(s));
    r += binom_[b][j];
    ++j;
    s &= s - 1;
  }
  return r;
}

DeterminantSpace::DeterminantSpace(std::size_t n_spatial, int n_alpha,
                                   int n_beta)
    : n_spatial_(n_spatial) {
  alpha_ = std::make_shared<const StringSpace>(n_spatial, n_alpha);
  beta_ = n_alpha == n_beta ? alpha_
                            : std::make_shared<const StringSpace>(n_spatial, n_beta);
  const std::size_t nb = beta_->size();
  phase_.resize(size());
  for (std::size_t ia = 0; ia < alpha_->size(); ++ia) {
    const std::uint64_t a = alpha_->string(ia);
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const std::uint64_t b = beta_->string(ib);
      int count = 0;
      for (std::uint64_t s = a; s; s &= s - 1)
        count += std::popcount(b & detail::below(std::countr_zero(s)));
      phase_[ia * nb + ib] = (count & 1) ? -1 : 1;
    }
  }
}

Determinant DeterminantSpace::determinant(std::size_t index) const {
  const std::size_t nb = beta_->size();
  return {alpha_->string(index / nb), beta_->string(index % nb)};
}

bool DeterminantSpace::contains(const Determinant& d) const {
  const std::uint64_t limit = detail::below(n_spatial_);
  return (d.alpha & ~limit) == 0 && (d.beta & ~limit) == 0 &&
         d.n_alpha() == n_alpha() && d.n_beta() == n_beta();
}

std::size_t DeterminantSpace::index_of(const Determinant& d) const {
  if (!contains(d)) {
    throw DimensionMismatch("determinant does not belong to the space");
  }
  return alpha_->rank(d.alpha) * beta_->size() + beta_->rank(d.beta);
}

CIVector CIVector::zeros(SpacePtr s) {
  const auto n = static_cast<Eigen::Index>(s->size());
  return {std::move(s), Eigen::VectorXd::Zero(n)};
}

CIVector CIVector::basis(SpacePtr s, const Determinant& d) {
  CIVector v = zeros(s);
  v.coefficients[static_cast<Eigen::Index>(s->index_of(d))] = 1.0;
  return v;
}

CIVector CIVector::normalized() const {
  const double n = norm();
  if (!(n >= 1e-8)) {
    throw DegenerateVector("vector norm " + std::to_string(n) + " is below 1e-8");
  }
  return {space, coefficients / n};
}

}  // namespace dvqe
