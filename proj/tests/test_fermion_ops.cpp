#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dvqe/error.hpp"
#include "dvqe/fermion_ops.hpp"
#include "support/fock_space.hpp"

using namespace dvqe;

namespace {

Determinant random_reference(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> occ;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t p = 0; p < n; ++p)
    if (coin(rng)) occ.push_back(p);
  return Determinant::from_spin_orbitals(occ);
}

}  // namespace

TEST_CASE("normal_order of a scalar is the scalar") {
  NormalOrderedOperator op(4);
  op.scalar() = -1.25;
  const auto f = normal_order(op, Determinant::from_spin_orbitals({0, 1}));
  CHECK(f.scalar() == -1.25);
  CHECK(*f.fermi_vacuum() == Determinant::from_spin_orbitals({0, 1}));
  CHECK(std::all_of(f.one_body().begin(), f.one_body().end(), [](double x) { return x == 0.0; }));
  CHECK(!f.has_two_body());
}

TEST_CASE("normal_order of a one-body operator traces the occupied block") {
  std::mt19937_64 rng(1);
  const auto op = oracle::random_hermitian(4, rng, 1.0, false);
  const auto f = normal_order(op, Determinant::from_spin_orbitals({0, 1}));
  CHECK(f.scalar() == doctest::Approx(op.scalar() + op.h(0, 0) + op.h(1, 1)).epsilon(1e-14));
}

TEST_CASE("normal_order matches the Fock-space matrix") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto op = oracle::random_hermitian(6, rng);
    const Determinant ref = random_reference(6, rng);
    const auto f = normal_order(op, ref);
    const Eigen::MatrixXd m = oracle::operator_matrix(op);
    const auto r = oracle::mask_of(ref);
    CHECK(std::abs(f.scalar() - m(r, r)) < 1e-12);
    // the whole operator, not only its expectation value, is unchanged
    CHECK(oracle::max_abs(oracle::operator_matrix(f) - m) < 1e-12);
    CHECK(to_bare_vacuum(f).max_abs_difference(op) < 1e-12);
    CHECK(fock_part(f).max_abs_difference(fock_part(f)) == 0.0);
    CHECK(without_scalar(f).scalar() == 0.0);
  }
}

TEST_CASE("normal_order rejects references outside the orbital range") {
  NormalOrderedOperator op(4);
  CHECK_THROWS_AS(normal_order(op, Determinant::from_spin_orbitals({0, 4})),
                  InvalidReference);
}

TEST_CASE("commutator of an operator with itself vanishes") {
  std::mt19937_64 rng(3);
  const auto a = normal_order(oracle::random_hermitian(6, rng),
                              Determinant::from_spin_orbitals({0, 1, 2}));
  const auto c = commutator_truncated(a, a, 2);
  CHECK(c.max_abs_difference(NormalOrderedOperator(6, *a.fermi_vacuum())) < 1e-14);
}

TEST_CASE("commutator of Hermitian and anti-Hermitian operators is Hermitian") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Determinant ref = random_reference(8, rng);
    const auto h = normal_order(oracle::random_hermitian(8, rng), ref);
    const auto s = normal_order(oracle::random_generator(8, rng).as_operator(), ref);
    const auto c = commutator_truncated(h, s, 2);
    CHECK(c.max_hermiticity_violation() < 1e-12);
    const auto f = fock_part(h);
    const auto cc = commutator_truncated(commutator_truncated(f, s, 2), s, 2);
    CHECK(cc.max_hermiticity_violation() < 1e-12);
  }
}

TEST_CASE("commutator agrees with the rank-extraction oracle") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (std::size_t n : {4u, 6u, 8u}) {
    for (int trial = 0; trial < 6; ++trial) {
      const Determinant ref = random_reference(n, rng);
      const auto a = normal_order(oracle::random_operator(n, rng), ref);
      const auto b = normal_order(oracle::random_operator(n, rng), ref);
      const Eigen::MatrixXd ma = oracle::operator_matrix(a);
      const Eigen::MatrixXd mb = oracle::operator_matrix(b);
      const auto expected =
          oracle::extract_rank2(ma * mb - mb * ma, n, oracle::mask_of(ref));
      REQUIRE(expected.has_two_body());
      const auto got = commutator_truncated(a, b, 2);
      CHECK(got.max_abs_difference(expected) < 1e-10);

      auto expected1 = expected;
      std::fill(expected1.two_body().begin(), expected1.two_body().end(), 0.0);
      CHECK(commutator_truncated(a, b, 1).max_abs_difference(expected1) < 1e-10);
      ++checked;
    }
  }
  CHECK(checked == 18);
}

TEST_CASE("bare-vacuum commutator keeps bare ranks") {
  std::mt19937_64 rng(6);
  const auto a = oracle::random_operator(6, rng);
  const auto b = oracle::random_operator(6, rng);
  const Eigen::MatrixXd ma = oracle::operator_matrix(a), mb = oracle::operator_matrix(b);
  const auto expected = oracle::extract_rank2(ma * mb - mb * ma, 6, 0);
  CHECK(commutator_truncated(a, b, 2).max_abs_difference(expected) < 1e-10);
}

TEST_CASE("commutator rejects mismatched frames") {
  NormalOrderedOperator a(4), b(4, Determinant::from_spin_orbitals({0}));
  CHECK_THROWS_AS(commutator_truncated(a, b, 2), IncompatibleOperator);
  CHECK_THROWS_AS(commutator_truncated(a, a, 3), ConfigError);
}

TEST_CASE("generator_from_cluster builds T - T^+") {
  const Determinant ref = Determinant::from_spin_orbitals({0, 1});
  ClusterAmplitudes zero(6, ref);
  CHECK(generator_from_cluster(zero).as_operator().max_abs_difference(NormalOrderedOperator(6)) == 0.0);

  ClusterAmplitudes t(6, ref);
  // virtual index 2 is spin orbital 4, occupied index 0 is spin orbital 0
  t.t1(2, 0) = 0.1;
  const auto g = generator_from_cluster(t);
  CHECK(g.as_operator().h(4, 0) == 0.1);
  CHECK(g.as_operator().h(0, 4) == -0.1);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  ClusterAmplitudes r(8, Determinant::from_spin_orbitals({0, 1, 2}));
  for (double& x : r.t1_data()) x = u(rng);
  for (std::size_t a = 0; a < r.n_vir(); ++a)
    for (std::size_t b = a + 1; b < r.n_vir(); ++b)
      for (std::size_t i = 0; i < r.n_occ(); ++i)
        for (std::size_t j = i + 1; j < r.n_occ(); ++j) r.set_t2(a, b, i, j, u(rng));
  const auto gr = generator_from_cluster(r).as_operator();
  CHECK(gr.max_anti_hermiticity_violation() == 0.0);
  CHECK(gr.max_antisymmetry_violation() == 0.0);
  const std::size_t A = r.virtuals()[1], B = r.virtuals()[3];
  const std::size_t I = r.occupied()[0], J = r.occupied()[2];
  CHECK(gr.v(A, B, I, J) == r.t2(1, 3, 0, 2));
  CHECK(gr.v(I, J, A, B) == -r.t2(1, 3, 0, 2));
}
