#include "dvqe/downfold.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "dvqe/ci_space.hpp"
#include "dvqe/error.hpp"
#include "dvqe/fermion_ops.hpp"
#include "dvqe/fock_matrix.hpp"

namespace dvqe {
namespace {

void check_external(const NormalOrderedOperator& s, const ActiveSpaceSpec& spec) {
  const std::size_t n = s.n_spinorbitals();
  auto act = [&](std::size_t p) { return spec.is_active(spatial_of(p)); };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (s.h(p, q) != 0.0 && act(p) && act(q)) {
        throw InvalidGenerator("sigma_ext has an all-active single (" + std::to_string(p) +
                               "," + std::to_string(q) + ")");
      }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t)
          if (s.v(p, q, r, t) != 0.0 && act(p) && act(q) && act(r) && act(t)) {
            throw InvalidGenerator("sigma_ext has an all-active double (" + std::to_string(p) +
                                   "," + std::to_string(q) + "," + std::to_string(r) + "," +
                                   std::to_string(t) + ")");
          }
}

double audit(const NormalOrderedOperator& h, const NormalOrderedOperator& sigma,
             const NormalOrderedOperator& hermitized, const Determinant& ref,
             std::size_t cap) {
  const DeterminantSpace space(h.n_spinorbitals() / 2, ref.n_alpha(), ref.n_beta());
  if (space.size() > cap) {
    throw OracleTooLarge("three-body audit needs " + std::to_string(space.size()) +
                         " determinants, cap " + std::to_string(cap));
  }
  const NormalOrderedOperator hf = normal_order(h, ref);
  const Eigen::MatrixXd mh = to_fock_matrix(h, space, cap);
  const Eigen::MatrixXd mhn =
      mh - hf.scalar() * Eigen::MatrixXd::Identity(mh.rows(), mh.cols());
  const Eigen::MatrixXd mf = to_fock_matrix(to_bare_vacuum(fock_part(hf)), space, cap);
  const Eigen::MatrixXd ms = to_fock_matrix(sigma, space, cap);
  const Eigen::MatrixXd c = mf * ms - ms * mf;
  const Eigen::MatrixXd exact = mh + (mhn * ms - ms * mhn) + 0.5 * (c * ms - ms * c);
  return (exact - to_fock_matrix(hermitized, space, cap)).cwiseAbs().maxCoeff();
}

}  // namespace

NormalOrderedOperator build_ducc_hamiltonian(const NormalOrderedOperator& h,
                                             const AntiHermitianGenerator& sigma_ext,
                                             const Determinant& reference,
                                             const DuccOptions& options, DuccReport* report) {
  if (!h.is_bare()) throw IncompatibleOperator("DUCC expects a bare-vacuum Hamiltonian");
  if (h.n_spinorbitals() != sigma_ext.n_spinorbitals()) {
    throw DimensionMismatch("Hamiltonian and sigma_ext act on different orbital sets");
  }
  if (options.spec) check_external(sigma_ext.as_operator(), *options.spec);

  const NormalOrderedOperator hn_full = normal_order(h, reference);
  const NormalOrderedOperator hn = without_scalar(hn_full);
  const NormalOrderedOperator fn = fock_part(hn_full);
  const NormalOrderedOperator s = normal_order(sigma_ext.as_operator(), reference);

  NormalOrderedOperator c = commutator_truncated(hn, s, 2);
  c.axpy(0.5, commutator_truncated(commutator_truncated(fn, s, 2), s, 2));
  NormalOrderedOperator bare = h;
  bare += to_bare_vacuum(c);

  const double asym = bare.max_hermiticity_violation();
  spdlog::debug("DUCC Hamiltonian asymmetry before symmetrization: {:.3e}", asym);
  if (asym > 1e-8) spdlog::warn("DUCC Hamiltonian asymmetry {:.3e} exceeds 1e-8", asym);
  NormalOrderedOperator herm = bare;
  herm += bare.adjoint();
  herm *= 0.5;

  if (report) {
    report->asymmetry = asym;
    report->three_body_residual.reset();
    if (options.audit_three_body) {
      report->three_body_residual =
          audit(h, sigma_ext.as_operator(), herm, reference, options.audit_cap);
    }
  }
  return herm;
}

Determinant active_reference(const ActiveSpaceSpec& spec, const Determinant& reference) {
  Determinant d;
  for (std::size_t k = 0; k < spec.active_orbitals.size(); ++k) {
    const std::size_t src = spec.active_orbitals[k];
    if (reference.occupied(spin_orbital(src, false))) d.alpha |= 1u << k;
    if (reference.occupied(spin_orbital(src, true))) d.beta |= 1u << k;
  }
  return d;
}

NormalOrderedOperator project_active(const NormalOrderedOperator& a,
                                     const ActiveSpaceSpec& spec,
                                     const Determinant& reference) {
  if (!a.is_bare()) throw IncompatibleOperator("project_active expects a bare operator");
  const std::size_t n = a.n_spinorbitals();
  if (n % 2 != 0) throw DimensionMismatch("odd spin-orbital count");
  if (reference.spin_orbital_extent() > n) {
    throw InvalidReference("reference occupies orbitals beyond the operator");
  }
  spec.validate(n / 2, reference.n_electrons());
  for (std::size_t k = 0; k < spec.n_frozen_core; ++k) {
    if (!reference.occupied(spin_orbital(k, false)) || !reference.occupied(spin_orbital(k, true)))
      throw ConfigError("frozen orbital " + std::to_string(k) + " is not doubly occupied");
  }
  if (active_reference(spec, reference).n_electrons() != spec.n_active_electrons) {
    throw ConfigError("active electron count " + std::to_string(spec.n_active_electrons) +
                      " disagrees with the reference");
  }

  std::vector<std::size_t> map;  // active spin orbital -> full index
  for (std::size_t k : spec.active_orbitals) {
    map.push_back(spin_orbital(k, false));
    map.push_back(spin_orbital(k, true));
  }
  std::vector<std::size_t> core;
  for (std::size_t p = 0; p < n; ++p)
    if (reference.occupied(p) && !spec.is_active(spatial_of(p))) core.push_back(p);

  const std::size_t m = map.size();
  NormalOrderedOperator out(m);
  double c = a.scalar();
  for (std::size_t i : core) c += a.h(i, i);
  for (std::size_t i : core)
    for (std::size_t j : core) c += 0.5 * a.v(i, j, i, j);
  out.scalar() = c;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) {
      double x = a.h(map[p], map[q]);
      for (std::size_t i : core) x += a.v(map[p], i, map[q], i);
      out.h(p, q) = x;
    }
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s)
          out.two_body()[out.idx(p, q, r, s)] = a.v(map[p], map[q], map[r], map[s]);
  return out;
}

DownfoldResult downfold(const FcidumpData& fcidump, const ActiveSpaceSpec& spec,
                        const DownfoldConfig& config) {
  const std::size_t norb = fcidump.norb;
  spec.validate(norb, fcidump.nelec);
  const NormalOrderedOperator h_full = spatial_to_spinorbital(fcidump);
  const Determinant ref_full = Determinant::lowest(fcidump.n_alpha(), fcidump.n_beta());

  DownfoldResult result;
  result.reference_energy = normal_order(h_full, ref_full).scalar();

  // frozen core first, then everything runs on the reduced orbital set
  const std::size_t nfc = spec.n_frozen_core;
  ActiveSpaceSpec keep;
  keep.n_frozen_core = nfc;
  for (std::size_t k = nfc; k < norb; ++k) keep.active_orbitals.push_back(k);
  keep.n_active_electrons = fcidump.nelec - 2 * static_cast<int>(nfc);
  const NormalOrderedOperator h =
      nfc > 0 ? project_active(h_full, keep, ref_full) : h_full;
  const Determinant ref = nfc > 0 ? active_reference(keep, ref_full) : ref_full;

  ActiveSpaceSpec local;
  local.n_active_electrons = spec.n_active_electrons;
  for (std::size_t k : spec.active_orbitals) local.active_orbitals.push_back(k - nfc);

  NormalOrderedOperator a = h;
  if (config.ducc) {
    ClusterAmplitudes t;
    if (config.amplitudes) {
      t = *config.amplitudes;
      if (t.n_spinorbitals() != h.n_spinorbitals() || !(t.reference() == ref)) {
        throw DimensionMismatch("supplied amplitudes do not match the frozen-core reference");
      }
    } else {
      result.ccsd = ccsd_solve(h, ref, config.ccsd);
      t = result.ccsd->t;
    }
    const auto [t_int, t_ext] = partition_amplitudes(t, local);
    for (double x : t_ext.t1_data()) result.n_external_amplitudes += x != 0.0;
    for (double x : t_ext.t2_data()) result.n_external_amplitudes += x != 0.0;
    DuccOptions opts;
    opts.spec = local;
    opts.audit_three_body = config.audit_three_body;
    a = build_ducc_hamiltonian(h, generator_from_cluster(t_ext), ref, opts, &result.ducc);
  }
  result.active = project_active(a, local, ref);
  result.active_reference = active_reference(local, ref);
  result.n_active_spatial = local.active_orbitals.size();
  result.n_alpha = result.active_reference.n_alpha();
  result.n_beta = result.active_reference.n_beta();
  spdlog::info("downfold: {} active orbitals, {} external amplitudes, asymmetry {:.3e}",
               result.n_active_spatial, result.n_external_amplitudes, result.ducc.asymmetry);
  return result;
}

}  // namespace dvqe
