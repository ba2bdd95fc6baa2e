#include "dvqe/gucc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dvqe/ccsd.hpp"
#include "dvqe/error.hpp"

namespace dvqe {

std::uint32_t Excitation::key() const {
  return static_cast<std::uint32_t>(rank) << 24 | static_cast<std::uint32_t>(idx[0]) << 18 |
         static_cast<std::uint32_t>(idx[1]) << 12 | static_cast<std::uint32_t>(idx[2]) << 6 |
         idx[3];
}

void ExcitationPool::add(const Excitation& e) {
  index_.emplace(e.key(), labels_.size());
  labels_.push_back(e);
}

std::optional<std::size_t> ExcitationPool::find(const Excitation& e) const {
  const auto it = index_.find(e.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ExcitationPool ExcitationPool::generalized(std::size_t n, bool conserve_sz) {
  if (n > 64) throw ConfigError("excitation pool supports at most 64 spin orbitals");
  ExcitationPool pool;
  pool.n_ = n;
  pool.conserve_sz_ = conserve_sz;
  auto u8 = [](std::size_t x) { return static_cast<std::uint8_t>(x); };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < p; ++q)
      if (!conserve_sz || is_beta(p) == is_beta(q)) pool.add({1, {u8(p), u8(q), 0, 0}});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < p; ++q) pairs.emplace_back(p, q);
  auto spin = [](std::pair<std::size_t, std::size_t> x) {
    return static_cast<int>(is_beta(x.first)) + static_cast<int>(is_beta(x.second));
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (conserve_sz && spin(pairs[i]) != spin(pairs[j])) continue;
      pool.add({2, {u8(pairs[i].first), u8(pairs[i].second), u8(pairs[j].first),
                    u8(pairs[j].second)}});
    }
  return pool;
}

ExcitationPool ExcitationPool::occupied_virtual(std::size_t n, const Determinant& reference,
                                                bool conserve_sz) {
  const ExcitationPool all = generalized(n, conserve_sz);
  ExcitationPool pool;
  pool.n_ = n;
  pool.conserve_sz_ = conserve_sz;
  auto occ = [&](std::size_t p) { return reference.occupied(p); };
  for (const Excitation& e : all.labels_) {
    bool keep;
    if (e.rank == 1) {
      keep = occ(e.idx[0]) != occ(e.idx[1]);
    } else {
      const bool left_occ = occ(e.idx[0]) && occ(e.idx[1]);
      const bool left_vir = !occ(e.idx[0]) && !occ(e.idx[1]);
      const bool right_occ = occ(e.idx[2]) && occ(e.idx[3]);
      const bool right_vir = !occ(e.idx[2]) && !occ(e.idx[3]);
      keep = (left_vir && right_occ) || (left_occ && right_vir);
    }
    if (keep) pool.add(e);
  }
  return pool;
}

AntiHermitianGenerator build_generator(const Eigen::VectorXd& theta, const ExcitationPool& pool) {
  if (static_cast<std::size_t>(theta.size()) != pool.size()) {
    throw DimensionMismatch("parameter vector has " + std::to_string(theta.size()) +
                            " entries, pool has " + std::to_string(pool.size()));
  }
  AntiHermitianGenerator g(pool.n_spinorbitals());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const double t = theta[static_cast<Eigen::Index>(k)];
    if (!std::isfinite(t)) throw ContractViolation("non-finite parameter");
    if (t == 0.0) continue;
    const auto& i = pool[k].idx;
    if (pool[k].rank == 1) {
      g.add_single(i[0], i[1], t);
    } else {
      g.add_double(i[0], i[1], i[2], i[3], t);
    }
  }
  return g;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 2) throw ConfigError("quadrature order must be at least 2");
  // Golub-Welsch
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(order);
  weights.resize(order);
  for (int k = 0; k < order; ++k) {
    nodes[k] = 0.5 * (es.eigenvalues()[k] + 1.0);
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = v0 * v0;  // 2 v0^2 on [-1, 1], halved on [0, 1]
  }
}

GuccObjective::GuccObjective(const NormalOrderedOperator& h, ExcitationPool pool,
                             CIVector reference, GuccConfig config)
    : h_(h),
      pool_(std::move(pool)),
      ref_(std::move(reference)),
      config_(config),
      hsigma_(h, ref_.space) {
  gauss_legendre(config_.quadrature_order, nodes_, weights_);
  if (pool_.n_spinorbitals() != h.n_spinorbitals() ||
      ref_.space->n_spinorbitals() != h.n_spinorbitals()) {
    throw DimensionMismatch("Hamiltonian, pool and reference act on different orbital sets");
  }
  if (!pool_.conserves_sz()) {
    throw ConfigError("the CI space has fixed S_z; the pool must conserve it");
  }
  if (!ref_.is_normalized(1e-8)) throw ContractViolation("reference ket is not normalized");
  min_energy_ = std::numeric_limits<double>::infinity();
}

void GuccObjective::check(const Eigen::VectorXd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != pool_.size()) {
    throw DimensionMismatch("parameter vector length does not match the pool");
  }
}

double GuccObjective::record(const Eigen::VectorXd& psi, const Eigen::VectorXd& hpsi) const {
  const double nn = psi.squaredNorm();
  const double e = psi.dot(hpsi) / nn;
  if (!std::isfinite(e)) throw ContractViolation("non-finite energy");
  max_norm_error_ = std::max(max_norm_error_, std::abs(std::sqrt(nn) - 1.0));
  min_energy_ = std::min(min_energy_, e);
  ++evaluations_;
  return e;
}

CIVector GuccObjective::state(const Eigen::VectorXd& theta) const {
  check(theta);
  const Propagator prop(build_generator(theta, pool_), ref_.space, config_.expm_tol);
  return {ref_.space, prop.apply(ref_.coefficients)};
}

double GuccObjective::energy(const Eigen::VectorXd& theta) const {
  const CIVector psi = state(theta);
  return record(psi.coefficients, hsigma_.apply(psi.coefficients));
}

double GuccObjective::energy_and_gradient(const Eigen::VectorXd& theta,
                                          Eigen::VectorXd& grad) const {
  check(theta);
  const Propagator prop(build_generator(theta, pool_), ref_.space, config_.expm_tol);
  std::vector<double> times = nodes_;
  times.push_back(1.0);
  std::vector<Eigen::VectorXd> phi = prop.apply_chain(ref_.coefficients, times);
  const Eigen::VectorXd psi = std::move(phi.back());
  phi.pop_back();
  const Eigen::VectorXd hpsi = hsigma_.apply(psi);
  const double e = record(psi, hpsi);

  // <H psi| e^{(1-s)A} = (e^{-(1-s)A} H psi)^T, nodes in reverse order
  std::vector<double> back(nodes_.rbegin(), nodes_.rend());
  for (double& t : back) t = 1.0 - t;
  const std::vector<Eigen::VectorXd> chi = prop.apply_chain(hpsi, back, -1.0);
  const std::size_t q = nodes_.size();
  std::vector<const Eigen::VectorXd*> bras, kets;
  for (std::size_t j = 0; j < q; ++j) {
    bras.push_back(&chi[q - 1 - j]);
    kets.push_back(&phi[j]);
  }
  const TransitionDensity d = transition_density(*ref_.space, bras, kets, weights_);
  grad.resize(static_cast<Eigen::Index>(pool_.size()));
  for (std::size_t k = 0; k < pool_.size(); ++k) {
    const auto& i = pool_[k].idx;
    double g;
    if (pool_[k].rank == 1) {
      g = d.gamma(i[0], i[1]) - d.gamma(i[1], i[0]);
    } else {
      g = d.Gamma(i[0], i[1], i[2], i[3]) - d.Gamma(i[2], i[3], i[0], i[1]);
    }
    grad[static_cast<Eigen::Index>(k)] = 2.0 * g;
  }
  return e;
}

double energy(const Eigen::VectorXd& theta, const ExcitationPool& pool,
              const NormalOrderedOperator& h, const CIVector& ref) {
  return GuccObjective(h, pool, ref).energy(theta);
}

Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const ExcitationPool& pool,
                         const NormalOrderedOperator& h, const CIVector& ref,
                         int quadrature_order) {
  GuccConfig cfg;
  cfg.quadrature_order = quadrature_order;
  Eigen::VectorXd g;
  GuccObjective(h, pool, ref, cfg).energy_and_gradient(theta, g);
  return g;
}

namespace {

// coefficient of a^+_{c...} a_{...} |ref> in v, with the string's sign
double excited_coefficient(const CIVector& v, const Determinant& ref,
                           std::initializer_list<std::size_t> annihilate,
                           std::initializer_list<std::size_t> create) {
  Determinant d = ref;
  int sign = 1;
  for (std::size_t p : annihilate) sign *= detail::annihilate(d.alpha, d.beta, p);
  for (std::size_t p : create) sign *= detail::create(d.alpha, d.beta, p);
  if (sign == 0 || !v.space->contains(d)) return 0.0;
  return sign * v.coefficients[static_cast<Eigen::Index>(v.space->index_of(d))];
}

void canonical_double(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double t,
                      Excitation& e, double& theta) {
  if (p < q) {
    std::swap(p, q);
    t = -t;
  }
  if (r < s) {
    std::swap(r, s);
    t = -t;
  }
  if (std::make_pair(p, q) < std::make_pair(r, s)) {
    std::swap(p, r);
    std::swap(q, s);
    t = -t;
  }
  auto u8 = [](std::size_t x) { return static_cast<std::uint8_t>(x); };
  e = {2, {u8(p), u8(q), u8(r), u8(s)}};
  theta = t;
}

}  // namespace

ClusterAmplitudes amplitudes_from_vector(const CIVector& v, const Determinant& reference) {
  if (!v.space) throw DimensionMismatch("vector has no determinant space");
  if (!v.space->contains(reference)) {
    throw DimensionMismatch("reference determinant is outside the vector's space");
  }
  const CIVector u = v.normalized();
  const double c0 = u.coefficients[static_cast<Eigen::Index>(u.space->index_of(reference))];
  if (std::abs(c0) < 1e-6) {
    throw DominantDeterminantError("reference coefficient " + std::to_string(c0) +
                                   " is below 1e-6");
  }
  ClusterAmplitudes t(u.space->n_spinorbitals(), reference);
  const auto& O = t.occupied();
  const auto& V = t.virtuals();
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t i = 0; i < O.size(); ++i)
      t.t1(a, i) = excited_coefficient(u, reference, {O[i]}, {V[a]}) / c0;
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = a + 1; b < V.size(); ++b)
      for (std::size_t i = 0; i < O.size(); ++i)
        for (std::size_t j = i + 1; j < O.size(); ++j) {
          // a_a^+ a_b^+ a_j a_i |ref>
          const double c = excited_coefficient(u, reference, {O[i], O[j]}, {V[b], V[a]}) / c0;
          t.set_t2(a, b, i, j, c - (t.t1(a, i) * t.t1(b, j) - t.t1(b, i) * t.t1(a, j)));
        }
  return t;
}

Eigen::VectorXd parameters_from_amplitudes(const ClusterAmplitudes& t, const ExcitationPool& pool) {
  if (t.n_spinorbitals() != pool.n_spinorbitals()) {
    throw DimensionMismatch("amplitudes and pool act on different orbital sets");
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pool.size()));
  const auto& O = t.occupied();
  const auto& V = t.virtuals();
  auto put = [&](const Excitation& e, double x) {
    if (x == 0.0) return;
    if (const auto k = pool.find(e)) theta[static_cast<Eigen::Index>(*k)] = x;
  };
  auto u8 = [](std::size_t x) { return static_cast<std::uint8_t>(x); };
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t i = 0; i < O.size(); ++i) {
      const double x = t.t1(a, i);
      if (V[a] > O[i]) {
        put({1, {u8(V[a]), u8(O[i]), 0, 0}}, x);
      } else {
        put({1, {u8(O[i]), u8(V[a]), 0, 0}}, -x);
      }
    }
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = a + 1; b < V.size(); ++b)
      for (std::size_t i = 0; i < O.size(); ++i)
        for (std::size_t j = i + 1; j < O.size(); ++j) {
          Excitation e;
          double x;
          canonical_double(V[a], V[b], O[i], O[j], t.t2(a, b, i, j), e, x);
          put(e, x);
        }
  return theta;
}

Eigen::VectorXd initial_parameters(InitialGuess kind, const ExcitationPool& pool,
                                   const NormalOrderedOperator& h, const Determinant& reference,
                                   const CIVector* vector) {
  switch (kind) {
    case InitialGuess::Zero:
      return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pool.size()));
    case InitialGuess::MP2:
      return parameters_from_amplitudes(mp2_amplitudes(h, reference).t, pool);
    case InitialGuess::FromVector:
      if (!vector) throw ConfigError("vector guess needs a reference CI vector");
      return parameters_from_amplitudes(amplitudes_from_vector(*vector, reference), pool);
  }
  throw ConfigError("unknown initial guess");
}

}  // namespace dvqe
