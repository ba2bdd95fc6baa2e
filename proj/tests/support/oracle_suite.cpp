#include "support/oracle_suite.hpp"

#include <algorithm>
#include <random>

#include "dvqe/downfold.hpp"
#include "dvqe/fermion_ops.hpp"
#include "support/fock_space.hpp"

using namespace dvqe;

namespace oracle {

namespace {

Mask random_reference(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Mask> u(1, (Mask{1} << n) - 2);
  return u(rng);
}

std::size_t size_for(int k) { return 4 + 2 * static_cast<std::size_t>(k % 3); }

}  // namespace

SuiteResult commutator_suite(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SuiteResult r;
  for (int k = 0; k < instances; ++k) {
    const std::size_t n = size_for(k);
    const Mask ref = k % 4 == 3 ? 0 : random_reference(n, rng);
    auto a = random_operator(n, rng), b = random_operator(n, rng);
    if (ref != 0) {
      a = normal_order(a, determinant_of(ref));
      b = normal_order(b, determinant_of(ref));
    }
    const Eigen::MatrixXd ma = operator_matrix(a), mb = operator_matrix(b);
    const auto expected = extract_rank2(ma * mb - mb * ma, n, ref);
    r.worst = std::max(r.worst, commutator_truncated(a, b, 2).max_abs_difference(expected));
    ++r.instances;
  }
  return r;
}

SuiteResult ducc_suite(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SuiteResult r;
  for (int k = 0; k < instances; ++k) {
    const std::size_t n = size_for(k);
    const NormalOrderedOperator h =
        k % 2 ? random_hermitian(n, rng) : random_molecular(n / 2, rng);
    const AntiHermitianGenerator s = random_generator(n, rng, 0.3);
    const Mask ref = random_reference(n, rng);
    const NormalOrderedOperator hf = normal_order(h, determinant_of(ref));
    const Eigen::MatrixXd mh = operator_matrix(h);
    const Eigen::MatrixXd mhn = operator_matrix(without_scalar(hf));
    const Eigen::MatrixXd mf = operator_matrix(fock_part(hf));
    const Eigen::MatrixXd ms = operator_matrix(s.as_operator());
    const Eigen::MatrixXd c = mf * ms - ms * mf;
    const Eigen::MatrixXd m = mh + (mhn * ms - ms * mhn) + 0.5 * (c * ms - ms * c);
    const NormalOrderedOperator expected = to_bare_vacuum(extract_rank2(m, n, ref));
    const NormalOrderedOperator got = build_ducc_hamiltonian(h, s, determinant_of(ref));
    r.worst = std::max(r.worst, got.max_abs_difference(expected));
    ++r.instances;
  }
  return r;
}

SuiteResult projection_suite(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SuiteResult r;
  for (int k = 0; k < instances; ++k) {
    const std::size_t ns = 2 + static_cast<std::size_t>(k % 3);
    const std::size_t n = 2 * ns;
    const NormalOrderedOperator a = k % 2 ? random_hermitian(n, rng) : random_operator(n, rng);
    const Determinant ref = determinant_of(random_reference(n, rng));
    std::vector<std::size_t> orbs(ns);
    for (std::size_t i = 0; i < ns; ++i) orbs[i] = i;
    std::shuffle(orbs.begin(), orbs.end(), rng);
    ActiveSpaceSpec spec;
    spec.active_orbitals.assign(orbs.begin(),
                                orbs.begin() + static_cast<long>(1 + rng() % ns));
    spec.n_active_electrons = active_reference(spec, ref).n_electrons();

    const NormalOrderedOperator p = project_active(a, spec, ref);
    std::vector<std::size_t> map;
    for (std::size_t o : spec.active_orbitals) {
      map.push_back(2 * o);
      map.push_back(2 * o + 1);
    }
    Mask core = 0;
    for (std::size_t q = 0; q < n; ++q)
      if (ref.occupied(q) && !spec.is_active(q / 2)) core |= Mask{1} << q;

    const Eigen::MatrixXd full = operator_matrix(a);
    const Eigen::MatrixXd act = operator_matrix(p);
    const Mask dim = Mask{1} << map.size();
    for (Mask x = 0; x < dim; ++x)
      for (Mask y = 0; y < dim; ++y) {
        const auto [mx, sx] = embed(x, core, map);
        const auto [my, sy] = embed(y, core, map);
        r.worst = std::max(r.worst, std::abs(act(x, y) - sx * sy * full(mx, my)));
      }
    ++r.instances;
  }
  return r;
}

}  // namespace oracle
