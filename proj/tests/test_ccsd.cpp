#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dvqe/ccsd.hpp"
#include "dvqe/eigensolver.hpp"
#include "dvqe/error.hpp"
#include "dvqe/fcidump.hpp"
#include "dvqe/fermion_ops.hpp"
#include "support/fixtures.hpp"
#include "support/fock_space.hpp"

using namespace dvqe;

namespace {

struct System {
  NormalOrderedOperator h;
  Determinant ref;
  std::size_t n_spatial;
  int na, nb;
};

System load(const std::string& name) {
  const FcidumpData d = read_fcidump(fixtures::fcidump(name));
  return {spatial_to_spinorbital(d), Determinant::lowest(d.n_alpha(), d.n_beta()), d.norb,
          d.n_alpha(), d.n_beta()};
}

double fci(const System& s) {
  return ground_state(s.h, make_space(s.n_spatial, s.na, s.nb)).energy;
}

}  // namespace

TEST_CASE("two-electron CCSD is exact") {
  for (const char* name : {"h2_sto3g_r0.74", "h2_631g_r0.74"}) {
    const System s = load(name);
    const CcsdResult r = ccsd_solve(s.h, s.ref);
    CHECK(r.energy() == doctest::Approx(fixtures::reference(name).e_fci).epsilon(1e-9));
    CHECK(r.energy() == doctest::Approx(fci(s)).epsilon(1e-9));
  }
}

TEST_CASE("CCSD matches external reference values") {
  for (const char* name : {"n2_sto3g_r1.00", "h4_sto3g_r1.50"}) {
    const System s = load(name);
    const auto ref = fixtures::reference(name);
    REQUIRE(ref.e_ccsd.has_value());
    const CcsdResult r = ccsd_solve(s.h, s.ref);
    CHECK(std::abs(r.energy() - *ref.e_ccsd) < 1e-8);
    CHECK(r.reference_energy == doctest::Approx(ref.e_hf).epsilon(1e-10));
    CHECK(r.residual_history.back() < 1e-9);
    CHECK(ccsd_residual_norm(s.h, r.t) < 1e-9);
    const Mp2Result m = mp2_amplitudes(s.h, s.ref);
    CHECK(std::abs(m.correlation_energy - ref.e_mp2_corr) < 1e-8);
  }
}

TEST_CASE("CCSD improves on MP2 near equilibrium") {
  const System s = load("n2_sto3g_r1.00");
  const double e_fci = fixtures::reference("n2_sto3g_r1.00").e_fci;
  const CcsdResult r = ccsd_solve(s.h, s.ref);
  const Mp2Result m = mp2_amplitudes(s.h, s.ref);
  CHECK(std::abs(r.energy() - e_fci) < std::abs(r.reference_energy + m.correlation_energy - e_fci));
}

TEST_CASE("amplitudes are antisymmetric") {
  const System s = load("lih_sto3g_r1.60");
  const CcsdResult r = ccsd_solve(s.h, s.ref);
  const auto& t = r.t;
  double worst = 0.0;
  for (std::size_t a = 0; a < t.n_vir(); ++a)
    for (std::size_t b = 0; b < t.n_vir(); ++b)
      for (std::size_t i = 0; i < t.n_occ(); ++i)
        for (std::size_t j = 0; j < t.n_occ(); ++j) {
          worst = std::max(worst, std::abs(t.t2(a, b, i, j) + t.t2(b, a, i, j)));
          worst = std::max(worst, std::abs(t.t2(a, b, i, j) + t.t2(a, b, j, i)));
        }
  CHECK(worst < 1e-12);
  CHECK(r.energy() < r.reference_energy);
}

TEST_CASE("zero two-body part gives zero correlation") {
  std::mt19937_64 rng(3);
  NormalOrderedOperator h(8);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  // spin-free diagonal one-body part with a gap
  for (std::size_t k = 0; k < 4; ++k) {
    const double e = -1.0 + 0.5 * static_cast<double>(k);
    h.h(2 * k, 2 * k) = e;
    h.h(2 * k + 1, 2 * k + 1) = e;
  }
  const CcsdResult r = ccsd_solve(h, Determinant::lowest(2, 2));
  CHECK(std::abs(r.correlation_energy) < 1e-14);
  CHECK(r.reference_energy == doctest::Approx(-3.0));
}

TEST_CASE("degenerate denominators are reported") {
  NormalOrderedOperator h(4);
  h.add_v(0, 1, 2, 3, 0.1);
  h.add_v(2, 3, 0, 1, 0.1);
  CHECK_THROWS_AS(mp2_amplitudes(h, Determinant::lowest(1, 1)), DegeneracyError);
  CHECK_THROWS_AS(ccsd_solve(h, Determinant::lowest(1, 1)), DegeneracyError);
}

TEST_CASE("non-convergence carries the residual history") {
  const System s = load("n2_sto3g_r1.00");
  CcsdConfig cfg;
  cfg.max_iter = 3;
  try {
    ccsd_solve(s.h, s.ref, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual_history().size() == 3);
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("partition and amplitude files") {
  const System s = load("h4_sto3g_r1.50");
  const CcsdResult r = ccsd_solve(s.h, s.ref);
  ActiveSpaceSpec spec{0, {1, 2}, 2};
  const auto [tin, tex] = partition_amplitudes(r.t, spec);
  const auto& O = r.t.occupied();
  const auto& V = r.t.virtuals();
  auto act = [&](std::size_t p) { return spec.is_active(spatial_of(p)); };
  std::size_t n_in = 0;
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = 0; b < V.size(); ++b)
      for (std::size_t i = 0; i < O.size(); ++i)
        for (std::size_t j = 0; j < O.size(); ++j) {
          const std::size_t k = r.t.i4(a, b, i, j);
          CHECK(tin.t2_data()[k] + tex.t2_data()[k] == r.t.t2_data()[k]);
          const bool all = act(V[a]) && act(V[b]) && act(O[i]) && act(O[j]);
          if (all) {
            CHECK(tex.t2_data()[k] == 0.0);
            if (tin.t2_data()[k] != 0.0) ++n_in;
          } else {
            CHECK(tin.t2_data()[k] == 0.0);
          }
        }
  CHECK(n_in > 0);
  for (std::size_t k = 0; k < r.t.t1_data().size(); ++k)
    CHECK(tin.t1_data()[k] + tex.t1_data()[k] == r.t.t1_data()[k]);

  std::stringstream ss;
  write_amplitudes(r.t, ss);
  const ClusterAmplitudes back = read_amplitudes(ss, r.t.n_spinorbitals(), s.ref);
  for (std::size_t k = 0; k < r.t.t2_data().size(); ++k)
    CHECK(back.t2_data()[k] == r.t.t2_data()[k]);
  for (std::size_t k = 0; k < r.t.t1_data().size(); ++k)
    CHECK(back.t1_data()[k] == r.t.t1_data()[k]);

  std::stringstream bad("0 1 0.5\n");
  CHECK_THROWS_AS(read_amplitudes(bad, r.t.n_spinorbitals(), s.ref), ParseError);
}
