#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

#include "dvqe/ccsd.hpp"
#include "dvqe/eigensolver.hpp"
#include "dvqe/error.hpp"
#include "dvqe/expm.hpp"
#include "dvqe/fcidump.hpp"
#include "dvqe/fermion_ops.hpp"
#include "dvqe/fock_matrix.hpp"
#include "dvqe/gucc.hpp"
#include "support/fixtures.hpp"
#include "support/fock_space.hpp"

using namespace dvqe;

namespace {

Eigen::VectorXd random_theta(std::size_t n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd t(static_cast<Eigen::Index>(n));
  for (auto& x : t) x = u(rng);
  return t;
}

CIVector random_state(SpacePtr s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd c(static_cast<Eigen::Index>(s->size()));
  for (auto& x : c) x = g(rng);
  return CIVector(s, c).normalized();
}

struct Case {
  NormalOrderedOperator h;
  SpacePtr space;
  Determinant hf;
};

Case fixture_case(const std::string& name) {
  const FcidumpData d = read_fcidump(fixtures::fcidump(name));
  return {spatial_to_spinorbital(d), make_space(d.norb, d.n_alpha(), d.n_beta()),
          Determinant::lowest(d.n_alpha(), d.n_beta())};
}

Eigen::MatrixXd label_matrix(const ExcitationPool& pool, std::size_t k, const DeterminantSpace& s) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pool.size()));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return to_fock_matrix(build_generator(e, pool).as_operator(), s);
}

}  // namespace

TEST_CASE("pool enumeration and counts") {
  for (std::size_t n : {4u, 6u, 8u, 20u}) {
    const std::size_t pairs = n * (n - 1) / 2;
    CHECK(ExcitationPool::generalized(n, false).size() == pairs + pairs * (pairs - 1) / 2);

    // brute force over all index tuples, canonicalized
    std::set<std::uint32_t> keys;
    std::size_t singles = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < p; ++q)
        if (is_beta(p) == is_beta(q)) ++singles;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            if (p == q || r == s) continue;
            std::pair<std::size_t, std::size_t> a{std::max(p, q), std::min(p, q)};
            std::pair<std::size_t, std::size_t> b{std::max(r, s), std::min(r, s)};
            if (a == b) continue;
            if (is_beta(p) + is_beta(q) != is_beta(r) + is_beta(s)) continue;
            if (a < b) std::swap(a, b);
            keys.insert(static_cast<std::uint32_t>(((a.first * 64 + a.second) * 64 + b.first) * 64 +
                                                   b.second));
          }
    const ExcitationPool pool = ExcitationPool::generalized(n);
    CHECK(pool.size() == singles + keys.size());
    std::set<std::uint32_t> seen;
    for (const Excitation& e : pool.labels()) {
      CHECK(e.idx[0] > e.idx[1]);
      if (e.rank == 2) {
        CHECK(e.idx[2] > e.idx[3]);
        CHECK(std::make_pair(e.idx[0], e.idx[1]) > std::make_pair(e.idx[2], e.idx[3]));
      }
      CHECK(seen.insert(e.key()).second);
    }
  }
  CHECK(ExcitationPool::generalized(20).size() == 7020);
  const ExcitationPool ov = ExcitationPool::occupied_virtual(8, Determinant::lowest(2, 2));
  // 2x2 same-spin singles, doubles: aa 1, bb 1, ab 4*4
  CHECK(ov.size() == 8 + 18);
}

TEST_CASE("generator construction") {
  const ExcitationPool pool = ExcitationPool::generalized(6);
  const AntiHermitianGenerator zero = build_generator(Eigen::VectorXd::Zero(pool.size()), pool);
  CHECK(zero.as_operator().max_abs_difference(NormalOrderedOperator(6)) == 0.0);

  Eigen::VectorXd t = Eigen::VectorXd::Zero(pool.size());
  const std::size_t k = *pool.find({1, {4, 0, 0, 0}});
  t[k] = 0.25;
  const AntiHermitianGenerator one = build_generator(t, pool);
  CHECK(one.as_operator().h(4, 0) == 0.25);
  CHECK(one.as_operator().h(0, 4) == -0.25);

  std::mt19937_64 rng(5);
  const AntiHermitianGenerator g = build_generator(random_theta(pool.size(), rng, 0.5), pool);
  const Eigen::MatrixXd m = oracle::operator_matrix(g.as_operator());
  CHECK(oracle::max_abs(m + m.transpose()) < 1e-12);
  CHECK_THROWS_AS(build_generator(Eigen::VectorXd::Zero(3), pool), DimensionMismatch);
}

TEST_CASE("exponential action matches the dense exponential") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (auto [ns, na, nb] : {std::tuple{3, 1, 1}, std::tuple{3, 2, 1}, std::tuple{4, 2, 2},
                            std::tuple{4, 1, 2}}) {
    const SpacePtr s = make_space(ns, na, nb);
    const ExcitationPool pool = ExcitationPool::generalized(2 * ns);
    for (double scale : {0.0, 0.1, 1.0, 3.0}) {
      const AntiHermitianGenerator a = build_generator(random_theta(pool.size(), rng, scale), pool);
      const CIVector v = random_state(s, rng);
      const CIVector w = apply_exponential(a, v);
      const Eigen::MatrixXd m = to_fock_matrix(a.as_operator(), *s);
      const Eigen::VectorXd ref = m.exp() * v.coefficients;
      CHECK((w.coefficients - ref).lpNorm<Eigen::Infinity>() < 1e-10);
      CHECK(std::abs(w.norm() - 1.0) < 1e-10);
      if (scale == 0.0) CHECK(w.coefficients == v.coefficients);
      ++checked;
    }
  }
  CHECK(checked == 16);
}

TEST_CASE("propagation chains and reversal") {
  std::mt19937_64 rng(18);
  const SpacePtr s = make_space(4, 2, 2);
  const ExcitationPool pool = ExcitationPool::generalized(8);
  const AntiHermitianGenerator a = build_generator(random_theta(pool.size(), rng, 0.7), pool);
  const Propagator p(a, s);
  const CIVector v = random_state(s, rng);
  const std::vector<double> times{0.0, 0.013, 0.4, 0.41, 1.7};
  const auto chain = p.apply_chain(v.coefficients, times);
  const Eigen::MatrixXd m = to_fock_matrix(a.as_operator(), *s);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXd ref = (times[k] * m).exp() * v.coefficients;
    CHECK((chain[k] - ref).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  const Eigen::VectorXd back = p.apply(p.apply(v.coefficients, 1.3), -1.3);
  CHECK((back - v.coefficients).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(p.norm_estimate() <= p.row_sum_bound());
  CHECK_THROWS_AS(p.apply_chain(v.coefficients, {0.5, 0.2}), ContractViolation);
}

TEST_CASE("energy at zero parameters and the variational bound") {
  for (const char* name : {"h2_sto3g_r0.74", "h2_631g_r0.74", "h4_sto3g_r1.50"}) {
    const Case c = fixture_case(name);
    const ExcitationPool pool = ExcitationPool::generalized(c.h.n_spinorbitals());
    const CIVector hf = CIVector::basis(c.space, c.hf);
    const double e0 = energy(Eigen::VectorXd::Zero(pool.size()), pool, c.h, hf);
    CHECK(e0 == doctest::Approx(normal_order(c.h, c.hf).scalar()).epsilon(1e-12));
    const double e_fci = ground_state(c.h, c.space).energy;
    std::mt19937_64 rng(3);
    const GuccObjective obj(c.h, pool, hf);
    for (int k = 0; k < 5; ++k) CHECK(obj.energy(random_theta(pool.size(), rng, 0.5)) >= e_fci - 1e-9);
    CHECK(obj.max_norm_error() < 1e-10);
  }
}

TEST_CASE("gradient at zero parameters") {
  const Case c = fixture_case("h4_sto3g_r1.50");
  const ExcitationPool pool = ExcitationPool::generalized(8);
  const CIVector hf = CIVector::basis(c.space, c.hf);
  const Eigen::VectorXd g = gradient(Eigen::VectorXd::Zero(pool.size()), pool, c.h, hf);
  const Eigen::MatrixXd mh = to_fock_matrix(c.h, *c.space);
  double worst = 0.0;
  for (std::size_t k = 0; k < pool.size(); k += 7) {
    const Eigen::MatrixXd d = label_matrix(pool, k, *c.space);
    const double expect = 2.0 * hf.coefficients.dot(mh * d * hf.coefficients);
    worst = std::max(worst, std::abs(g[k] - expect));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(41);
  std::vector<Case> cases;
  for (const char* name : {"h2_sto3g_r0.74", "h2_631g_r0.74", "h4_sto3g_r1.50"})
    cases.push_back(fixture_case(name));
  {
    const NormalOrderedOperator h = oracle::random_molecular(3, rng, 0.5);
    cases.push_back({h, make_space(3, 2, 1), Determinant::lowest(2, 1)});
  }
  int pairs = 0;
  for (const Case& c : cases) {
    const ExcitationPool pool = ExcitationPool::generalized(c.h.n_spinorbitals());
    for (int k = 0; k < 6; ++k) {
      const CIVector ref = k % 2 ? CIVector::basis(c.space, c.hf) : random_state(c.space, rng);
      const GuccObjective obj(c.h, pool, ref);
      const Eigen::VectorXd theta = random_theta(pool.size(), rng, 0.4);
      Eigen::VectorXd g;
      obj.energy_and_gradient(theta, g);
      Eigen::VectorXd fd(g.size());
      const double step = 1e-5;
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[i] += step;
        tm[i] -= step;
        fd[i] = (obj.energy(tp) - obj.energy(tm)) / (2 * step);
      }
      const double rel = (g - fd).lpNorm<Eigen::Infinity>() / fd.lpNorm<Eigen::Infinity>();
      CHECK(rel < 1e-6);
      ++pairs;
    }
  }
  CHECK(pairs >= 20);
}

TEST_CASE("gradient of a label commuting with the generator") {
  const Case c = fixture_case("h2_631g_r0.74");
  const ExcitationPool pool = ExcitationPool::generalized(8);
  const std::size_t k = *pool.find({2, {5, 4, 1, 0}});
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(pool.size());
  theta[k] = 0.37;
  const CIVector hf = CIVector::basis(c.space, c.hf);
  const GuccObjective obj(c.h, pool, hf);
  Eigen::VectorXd g;
  obj.energy_and_gradient(theta, g);
  const Eigen::VectorXd psi = obj.state(theta).coefficients;
  const Eigen::MatrixXd mh = to_fock_matrix(c.h, *c.space);
  const Eigen::MatrixXd d = label_matrix(pool, k, *c.space);
  CHECK(g[k] == doctest::Approx(2.0 * psi.dot(mh * d * psi)).epsilon(1e-12));
}

TEST_CASE("quadrature order is validated") {
  const Case c = fixture_case("h2_sto3g_r0.74");
  const ExcitationPool pool = ExcitationPool::generalized(4);
  const CIVector hf = CIVector::basis(c.space, c.hf);
  CHECK_THROWS_AS(gradient(Eigen::VectorXd::Zero(pool.size()), pool, c.h, hf, 1), ConfigError);
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double sum = 0.0, moment = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += w[i];
    moment += w[i] * std::pow(x[i], 31);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("initial parameters") {
  const Case c = fixture_case("h4_sto3g_r1.50");
  const ExcitationPool pool = ExcitationPool::generalized(8);
  CHECK(initial_parameters(InitialGuess::Zero, pool, c.h, c.hf).isZero(0.0));

  const CIVector hf = CIVector::basis(c.space, c.hf);
  CHECK(initial_parameters(InitialGuess::FromVector, pool, c.h, c.hf, &hf).isZero(0.0));
  CHECK_THROWS_AS(initial_parameters(InitialGuess::FromVector, pool, c.h, c.hf), ConfigError);

  // the MP2 guess builds the same generator as the cluster amplitudes
  const Mp2Result mp2 = mp2_amplitudes(c.h, c.hf);
  const Eigen::VectorXd t = initial_parameters(InitialGuess::MP2, pool, c.h, c.hf);
  CHECK(build_generator(t, pool).as_operator().max_abs_difference(
            generator_from_cluster(mp2.t).as_operator()) < 1e-15);

  // zero reference weight
  CIVector other = CIVector::basis(c.space, Determinant{0b1100, 0b0011});
  CHECK_THROWS_AS(amplitudes_from_vector(other, c.hf), DominantDeterminantError);
}

TEST_CASE("CI analysis of a two-electron ground state") {
  for (const char* name : {"h2_sto3g_r0.74", "h2_631g_r0.74"}) {
    const Case c = fixture_case(name);
    const CIVector fci = ground_state(c.h, c.space).vector;
    const ClusterAmplitudes t = amplitudes_from_vector(fci, c.hf);
    // e^T |HF> = |HF> + T|HF> + T^2/2 |HF>, compared in intermediate normalization
    NormalOrderedOperator top(c.h.n_spinorbitals());
    const auto& O = t.occupied();
    const auto& V = t.virtuals();
    for (std::size_t a = 0; a < V.size(); ++a)
      for (std::size_t i = 0; i < O.size(); ++i) top.h(V[a], O[i]) = t.t1(a, i);
    for (std::size_t a = 0; a < V.size(); ++a)
      for (std::size_t b = 0; b < V.size(); ++b)
        for (std::size_t i = 0; i < O.size(); ++i)
          for (std::size_t j = 0; j < O.size(); ++j)
            top.two_body()[top.idx(V[a], V[b], O[i], O[j])] = t.t2(a, b, i, j);
    const CIVector hf = CIVector::basis(c.space, c.hf);
    const CIVector t1 = apply_operator(top, hf);
    const CIVector t2 = apply_operator(top, t1);
    const Eigen::VectorXd ecc = hf.coefficients + t1.coefficients + 0.5 * t2.coefficients;
    const double c0 = fci.coefficients[static_cast<Eigen::Index>(c.space->index_of(c.hf))];
    CHECK((ecc - fci.coefficients / c0).lpNorm<Eigen::Infinity>() < 1e-12);

    const ExcitationPool pool = ExcitationPool::generalized(c.h.n_spinorbitals());
    const Eigen::VectorXd theta = initial_parameters(InitialGuess::FromVector, pool, c.h, c.hf, &fci);
    CHECK(build_generator(theta, pool).as_operator().max_abs_difference(
              generator_from_cluster(t).as_operator()) < 1e-15);
  }
}
