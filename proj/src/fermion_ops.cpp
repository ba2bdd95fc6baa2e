#include "dvqe/fermion_ops.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "dvqe/error.hpp"

namespace dvqe {
namespace {

struct Occupation {
  std::vector<std::size_t> occ;
  std::vector<std::size_t> vir;
};

Occupation occupation_of(const NormalOrderedOperator& op) {
  Occupation o;
  for (std::size_t p = 0; p < op.n_spinorbitals(); ++p) {
    const bool filled = op.fermi_vacuum() && op.fermi_vacuum()->occupied(p);
    (filled ? o.occ : o.vir).push_back(p);
  }
  return o;
}

// Adds sign * (contracted part of the product a b) into out, split by rank.
void add_contractions(const NormalOrderedOperator& a,
                      const NormalOrderedOperator& b, const Occupation& f,
                      int max_rank, double sign, NormalOrderedOperator& out) {
  const std::size_t n = a.n_spinorbitals();
  const auto I2 = [n](std::size_t p, std::size_t q) { return p * n + q; };
  const auto I4 = [n](std::size_t p, std::size_t q, std::size_t r,
                      std::size_t s) { return ((p * n + q) * n + r) * n + s; };
  const double* a1 = a.one_body().data();
  const double* b1 = b.one_body().data();
  const double* a2 = a.two_body().data();
  const double* b2 = b.two_body().data();
  const bool a_two = a.has_two_body();
  const bool b_two = b.has_two_body();
  const auto& occ = f.occ;
  const auto& vir = f.vir;

  double c0 = 0.0;
  std::vector<double> c1(n * n, 0.0);

  // one-body x one-body
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double acc = 0.0;
      for (std::size_t k : vir) acc += a1[I2(x, k)] * b1[I2(k, y)];
      for (std::size_t k : occ) acc -= b1[I2(x, k)] * a1[I2(k, y)];
      c1[I2(x, y)] += acc;
    }
  for (std::size_t k : occ)
    for (std::size_t l : vir) c0 += a1[I2(k, l)] * b1[I2(l, k)];

  // double contractions into the one-body part
  if (b_two) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        double acc = 0.0;
        for (std::size_t k : occ)
          for (std::size_t l : vir) acc += a1[I2(k, l)] * b2[I4(l, x, k, y)];
        c1[I2(x, y)] += acc;
      }
  }
  if (a_two) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        double acc = 0.0;
        for (std::size_t k : occ)
          for (std::size_t l : vir) acc += a2[I4(k, x, l, y)] * b1[I2(l, k)];
        c1[I2(x, y)] += acc;
      }
  }
  if (a_two && b_two) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        double acc = 0.0;
        for (std::size_t k : occ)
          for (std::size_t l : occ)
            for (std::size_t m : vir)
              acc += 0.5 * a2[I4(k, l, m, y)] * b2[I4(x, m, k, l)];
        for (std::size_t k : occ)
          for (std::size_t l : vir)
            for (std::size_t m : vir)
              acc += 0.5 * a2[I4(k, x, l, m)] * b2[I4(l, m, k, y)];
        c1[I2(x, y)] += acc;
      }
    for (std::size_t k : occ)
      for (std::size_t l : occ)
        for (std::size_t m : vir)
          for (std::size_t q : vir)
            c0 += 0.25 * a2[I4(k, l, m, q)] * b2[I4(m, q, k, l)];
  }

  out.scalar() += sign * c0;
  for (std::size_t i = 0; i < n * n; ++i) out.one_body()[i] += sign * c1[i];

  if (max_rank < 2 || (!a_two && !b_two)) return;

  const std::size_t n4 = n * n * n * n;
  std::vector<double> plain(n4, 0.0), x12(n4, 0.0), x34(n4, 0.0), x1234;

  if (b_two) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            double acc34 = 0.0;
            for (std::size_t k : occ) acc34 -= b2[I4(p, q, r, k)] * a1[I2(k, s)];
            double acc12 = 0.0;
            for (std::size_t k : vir) acc12 += a1[I2(p, k)] * b2[I4(k, q, r, s)];
            x34[I4(p, q, r, s)] += acc34;
            x12[I4(p, q, r, s)] += acc12;
          }
  }
  if (a_two) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            double acc12 = 0.0;
            for (std::size_t k : occ) acc12 -= b1[I2(p, k)] * a2[I4(k, q, r, s)];
            double acc34 = 0.0;
            for (std::size_t k : vir) acc34 += a2[I4(p, q, r, k)] * b1[I2(k, s)];
            x12[I4(p, q, r, s)] += acc12;
            x34[I4(p, q, r, s)] += acc34;
          }
  }
  if (a_two && b_two) {
    const std::size_t n2 = n * n;
    // particle-particle and hole-hole ladders over pair indices
    for (std::size_t pq = 0; pq < n2; ++pq)
      for (std::size_t k : occ)
        for (std::size_t l : occ) {
          const double bv = b2[pq * n2 + I2(k, l)];
          if (bv == 0.0) continue;
          const double* arow = a2 + I2(k, l) * n2;
          double* out_row = plain.data() + pq * n2;
          for (std::size_t rs = 0; rs < n2; ++rs) out_row[rs] += 0.5 * bv * arow[rs];
        }
    for (std::size_t pq = 0; pq < n2; ++pq)
      for (std::size_t k : vir)
        for (std::size_t l : vir) {
          const double av = a2[pq * n2 + I2(k, l)];
          if (av == 0.0) continue;
          const double* brow = b2 + I2(k, l) * n2;
          double* out_row = plain.data() + pq * n2;
          for (std::size_t rs = 0; rs < n2; ++rs) out_row[rs] += 0.5 * av * brow[rs];
        }
    // particle-hole ring: -sum_kl a[k][q][l][s] b[l][p][r][k]
    x1234.assign(n4, 0.0);
    for (std::size_t k : occ)
      for (std::size_t l : vir)
        for (std::size_t q = 0; q < n; ++q)
          for (std::size_t s = 0; s < n; ++s) {
            const double av = a2[I4(k, q, l, s)];
            if (av == 0.0) continue;
            for (std::size_t p = 0; p < n; ++p)
              for (std::size_t r = 0; r < n; ++r)
                x1234[I4(p, q, r, s)] -= av * b2[I4(l, p, r, k)];
          }
  }

  double* o2 = out.two_body().data();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double t = plain[I4(p, q, r, s)] + x12[I4(p, q, r, s)] -
                     x12[I4(q, p, r, s)] + x34[I4(p, q, r, s)] -
                     x34[I4(p, q, s, r)];
          if (!x1234.empty()) {
            t += x1234[I4(p, q, r, s)] - x1234[I4(q, p, r, s)] -
                 x1234[I4(p, q, s, r)] + x1234[I4(q, p, s, r)];
          }
          o2[I4(p, q, r, s)] += sign * t;
        }
}

}  // namespace

NormalOrderedOperator normal_order(const NormalOrderedOperator& op,
                                   const Determinant& reference) {
  if (!op.is_bare()) {
    throw IncompatibleOperator("normal_order expects a bare-vacuum operator");
  }
  const std::size_t n = op.n_spinorbitals();
  if (reference.spin_orbital_extent() > n) {
    throw InvalidReference("reference occupies orbitals beyond " +
                           std::to_string(n));
  }
  NormalOrderedOperator out = op.with_vacuum(reference);
  const auto occ = reference.occupied_spin_orbitals();
  for (std::size_t i : occ) out.scalar() += op.h(i, i);
  for (std::size_t i : occ)
    for (std::size_t j : occ) out.scalar() += 0.5 * op.v(i, j, i, j);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t i : occ) acc += op.v(p, i, q, i);
      out.h(p, q) += acc;
    }
  return out;
}

NormalOrderedOperator to_bare_vacuum(const NormalOrderedOperator& op) {
  if (op.is_bare()) return op;
  const std::size_t n = op.n_spinorbitals();
  const auto occ = op.fermi_vacuum()->occupied_spin_orbitals();
  NormalOrderedOperator out = op.with_vacuum(std::nullopt);
  for (std::size_t i : occ) out.scalar() -= op.h(i, i);
  for (std::size_t i : occ)
    for (std::size_t j : occ) out.scalar() += 0.5 * op.v(i, j, i, j);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t i : occ) acc += op.v(p, i, q, i);
      out.h(p, q) -= acc;
    }
  return out;
}

NormalOrderedOperator fock_part(const NormalOrderedOperator& fermi_op) {
  NormalOrderedOperator out = fermi_op;
  out.scalar() = 0.0;
  std::fill(out.two_body().begin(), out.two_body().end(), 0.0);
  return out;
}

NormalOrderedOperator without_scalar(const NormalOrderedOperator& op) {
  NormalOrderedOperator out = op;
  out.scalar() = 0.0;
  return out;
}

NormalOrderedOperator commutator_truncated(const NormalOrderedOperator& a,
                                           const NormalOrderedOperator& b,
                                           int max_rank) {
  if (!a.same_frame(b)) {
    throw IncompatibleOperator(
        "commutator operands differ in vacuum or orbital count");
  }
  if (max_rank != 1 && max_rank != 2) {
    throw ConfigError("commutator rank must be 1 or 2, got " +
                      std::to_string(max_rank));
  }
  const Occupation f = occupation_of(a);
  NormalOrderedOperator out(a.n_spinorbitals());
  out = out.with_vacuum(a.fermi_vacuum());
  add_contractions(a, b, f, max_rank, 1.0, out);
  add_contractions(b, a, f, max_rank, -1.0, out);
  return out;
}

AntiHermitianGenerator generator_from_cluster(const ClusterAmplitudes& t) {
  NormalOrderedOperator op(t.n_spinorbitals());
  const auto& occ = t.occupied();
  const auto& vir = t.virtuals();
  for (std::size_t a = 0; a < vir.size(); ++a)
    for (std::size_t i = 0; i < occ.size(); ++i) {
      op.h(vir[a], occ[i]) = t.t1(a, i);
      op.h(occ[i], vir[a]) = -t.t1(a, i);
    }
  auto& v = op.two_body();
  for (std::size_t a = 0; a < vir.size(); ++a)
    for (std::size_t b = 0; b < vir.size(); ++b)
      for (std::size_t i = 0; i < occ.size(); ++i)
        for (std::size_t j = 0; j < occ.size(); ++j) {
          const double x = t.t2(a, b, i, j);
          v[op.idx(vir[a], vir[b], occ[i], occ[j])] = x;
          v[op.idx(occ[i], occ[j], vir[a], vir[b])] = -x;
        }
  return AntiHermitianGenerator::from_operator(std::move(op), 0.0);
}

}  // namespace dvqe
