#include "dvqe/ccsd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dvqe/error.hpp"
#include "dvqe/fermion_ops.hpp"

namespace dvqe {
namespace {

// Fock matrix and antisymmetrized integrals in occupied/virtual blocks.
struct Blocks {
  std::size_t no, nv;
  std::vector<std::size_t> O, V;
  Eigen::MatrixXd f;  // full Fock matrix, global indices
  const NormalOrderedOperator* op;

  Blocks(const NormalOrderedOperator& h, const Determinant& ref) : op(&h) {
    if (!h.is_bare()) throw IncompatibleOperator("CCSD expects a bare-vacuum Hamiltonian");
    const NormalOrderedOperator fermi = normal_order(h, ref);
    const std::size_t n = h.n_spinorbitals();
    f.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) f(p, q) = fermi.h(p, q);
    for (std::size_t p = 0; p < n; ++p) (ref.occupied(p) ? O : V).push_back(p);
    no = O.size();
    nv = V.size();
  }
  double foo(std::size_t m, std::size_t i) const { return f(O[m], O[i]); }
  double fov(std::size_t m, std::size_t e) const { return f(O[m], V[e]); }
  double fvo(std::size_t a, std::size_t i) const { return f(V[a], O[i]); }
  double fvv(std::size_t a, std::size_t e) const { return f(V[a], V[e]); }
};

double eps_denominator(const Blocks& b, std::initializer_list<std::size_t> occ,
                       std::initializer_list<std::size_t> vir) {
  double d = 0.0;
  for (std::size_t i : occ) d += b.foo(i, i);
  for (std::size_t a : vir) d -= b.fvv(a, a);
  return d;
}

void check_denominator(double d, const std::string& label) {
  if (std::abs(d) < 1e-10) {
    throw DegeneracyError("vanishing orbital-energy denominator for " + label);
  }
}

struct Residuals {
  std::vector<double> r1, r2;
};

// Projected CCSD residuals R = RHS - D t (zero at convergence).
Residuals residuals(const Blocks& B, const ClusterAmplitudes& t) {
  const std::size_t no = B.no, nv = B.nv;
  const auto& O = B.O;
  const auto& V = B.V;
  const NormalOrderedOperator& op = *B.op;
  auto t1 = [&](std::size_t a, std::size_t i) { return t.t1(a, i); };
  auto t2 = [&](std::size_t a, std::size_t b, std::size_t i, std::size_t j) { return t.t2(a, b, i, j); };
  // integrals by block, local indices
  auto oooo = [&](std::size_t m, std::size_t n, std::size_t i, std::size_t j) { return op.v(O[m], O[n], O[i], O[j]); };
  auto ooov = [&](std::size_t m, std::size_t n, std::size_t i, std::size_t e) { return op.v(O[m], O[n], O[i], V[e]); };
  auto oovv = [&](std::size_t m, std::size_t n, std::size_t e, std::size_t f) { return op.v(O[m], O[n], V[e], V[f]); };
  auto ovvo = [&](std::size_t m, std::size_t b, std::size_t e, std::size_t j) { return op.v(O[m], V[b], V[e], O[j]); };
  auto ovvv = [&](std::size_t m, std::size_t a, std::size_t e, std::size_t f) { return op.v(O[m], V[a], V[e], V[f]); };
  auto vvvv = [&](std::size_t a, std::size_t b, std::size_t e, std::size_t f) { return op.v(V[a], V[b], V[e], V[f]); };
  auto vvvo = [&](std::size_t a, std::size_t b, std::size_t e, std::size_t j) { return op.v(V[a], V[b], V[e], O[j]); };
  auto ovoo = [&](std::size_t m, std::size_t b, std::size_t i, std::size_t j) { return op.v(O[m], V[b], O[i], O[j]); };
  auto vvoo = [&](std::size_t a, std::size_t b, std::size_t i, std::size_t j) { return op.v(V[a], V[b], O[i], O[j]); };
  auto ovov = [&](std::size_t n, std::size_t a, std::size_t i, std::size_t f) { return op.v(O[n], V[a], O[i], V[f]); };
  auto oovo = [&](std::size_t n, std::size_t m, std::size_t e, std::size_t i) { return op.v(O[n], O[m], V[e], O[i]); };

  auto tau = [&](std::size_t a, std::size_t b, std::size_t i, std::size_t j) {
    return t2(a, b, i, j) + t1(a, i) * t1(b, j) - t1(b, i) * t1(a, j);
  };
  auto taut = [&](std::size_t a, std::size_t b, std::size_t i, std::size_t j) {
    return t2(a, b, i, j) + 0.5 * (t1(a, i) * t1(b, j) - t1(b, i) * t1(a, j));
  };

  Eigen::MatrixXd Fae = Eigen::MatrixXd::Zero(nv, nv), Fmi = Eigen::MatrixXd::Zero(no, no),
                  Fme = Eigen::MatrixXd::Zero(no, nv);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t e = 0; e < nv; ++e) {
      double x = a == e ? 0.0 : B.fvv(a, e);
      for (std::size_t m = 0; m < no; ++m) x -= 0.5 * B.fov(m, e) * t1(a, m);
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t f = 0; f < nv; ++f) x += t1(f, m) * ovvv(m, a, f, e);
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t n = 0; n < no; ++n)
          for (std::size_t f = 0; f < nv; ++f) x -= 0.5 * taut(a, f, m, n) * oovv(m, n, e, f);
      Fae(a, e) = x;
    }
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t i = 0; i < no; ++i) {
      double x = m == i ? 0.0 : B.foo(m, i);
      for (std::size_t e = 0; e < nv; ++e) x += 0.5 * t1(e, i) * B.fov(m, e);
      for (std::size_t n = 0; n < no; ++n)
        for (std::size_t e = 0; e < nv; ++e) x += t1(e, n) * ooov(m, n, i, e);
      for (std::size_t n = 0; n < no; ++n)
        for (std::size_t e = 0; e < nv; ++e)
          for (std::size_t f = 0; f < nv; ++f) x += 0.5 * taut(e, f, i, n) * oovv(m, n, e, f);
      Fmi(m, i) = x;
    }
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t e = 0; e < nv; ++e) {
      double x = B.fov(m, e);
      for (std::size_t n = 0; n < no; ++n)
        for (std::size_t f = 0; f < nv; ++f) x += t1(f, n) * oovv(m, n, e, f);
      Fme(m, e) = x;
    }

  const std::size_t o2 = no * no, v2 = nv * nv;
  std::vector<double> Wmnij(o2 * o2), Wabef(v2 * v2), Wmbej(no * nv * nv * no);
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t n = 0; n < no; ++n)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          double x = oooo(m, n, i, j);
          for (std::size_t e = 0; e < nv; ++e)
            x += t1(e, j) * ooov(m, n, i, e) - t1(e, i) * ooov(m, n, j, e);
          for (std::size_t e = 0; e < nv; ++e)
            for (std::size_t f = 0; f < nv; ++f) x += 0.25 * tau(e, f, i, j) * oovv(m, n, e, f);
          Wmnij[((m * no + n) * no + i) * no + j] = x;
        }
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t e = 0; e < nv; ++e)
        for (std::size_t f = 0; f < nv; ++f) {
          double x = vvvv(a, b, e, f);
          for (std::size_t m = 0; m < no; ++m)
            x += t1(b, m) * ovvv(m, a, e, f) - t1(a, m) * ovvv(m, b, e, f);
          for (std::size_t m = 0; m < no; ++m)
            for (std::size_t n = 0; n < no; ++n) x += 0.25 * tau(a, b, m, n) * oovv(m, n, e, f);
          Wabef[((a * nv + b) * nv + e) * nv + f] = x;
        }
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t e = 0; e < nv; ++e)
        for (std::size_t j = 0; j < no; ++j) {
          double x = ovvo(m, b, e, j);
          for (std::size_t f = 0; f < nv; ++f) x += t1(f, j) * ovvv(m, b, e, f);
          for (std::size_t n = 0; n < no; ++n) x -= t1(b, n) * oovo(m, n, e, j);
          for (std::size_t n = 0; n < no; ++n)
            for (std::size_t f = 0; f < nv; ++f)
              x -= (0.5 * t2(f, b, j, n) + t1(f, j) * t1(b, n)) * oovv(m, n, e, f);
          Wmbej[((m * nv + b) * nv + e) * no + j] = x;
        }

  Residuals R;
  R.r1.assign(nv * no, 0.0);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) {
      double x = B.fvo(a, i);
      for (std::size_t e = 0; e < nv; ++e) x += t1(e, i) * Fae(a, e);
      for (std::size_t m = 0; m < no; ++m) x -= t1(a, m) * Fmi(m, i);
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t e = 0; e < nv; ++e) {
          x += t2(a, e, i, m) * Fme(m, e);
          x -= t1(e, m) * ovov(m, a, i, e);
        }
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t e = 0; e < nv; ++e)
          for (std::size_t f = 0; f < nv; ++f) x -= 0.5 * t2(e, f, i, m) * ovvv(m, a, e, f);
      for (std::size_t m = 0; m < no; ++m)
        for (std::size_t e = 0; e < nv; ++e)
          for (std::size_t n = 0; n < no; ++n) x -= 0.5 * t2(a, e, m, n) * oovo(n, m, e, i);
      x -= eps_denominator(B, {i}, {a}) * t1(a, i);
      R.r1[a * no + i] = x;
    }

  // intermediates folded with T1 for the doubles equation
  Eigen::MatrixXd Fbe_t = Fae, Fmj_t = Fmi;
  for (std::size_t b = 0; b < nv; ++b)
    for (std::size_t e = 0; e < nv; ++e)
      for (std::size_t m = 0; m < no; ++m) Fbe_t(b, e) -= 0.5 * t1(b, m) * Fme(m, e);
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t j = 0; j < no; ++j)
      for (std::size_t e = 0; e < nv; ++e) Fmj_t(m, j) += 0.5 * t1(e, j) * Fme(m, e);

  R.r2.assign(nv * nv * no * no, 0.0);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) {
          if (a == b || i == j) continue;
          double x = vvoo(a, b, i, j);
          for (std::size_t e = 0; e < nv; ++e)
            x += t2(a, e, i, j) * Fbe_t(b, e) - t2(b, e, i, j) * Fbe_t(a, e);
          for (std::size_t m = 0; m < no; ++m)
            x -= t2(a, b, i, m) * Fmj_t(m, j) - t2(a, b, j, m) * Fmj_t(m, i);
          for (std::size_t m = 0; m < no; ++m)
            for (std::size_t n = 0; n < no; ++n)
              x += 0.5 * tau(a, b, m, n) * Wmnij[((m * no + n) * no + i) * no + j];
          for (std::size_t e = 0; e < nv; ++e)
            for (std::size_t f = 0; f < nv; ++f)
              x += 0.5 * tau(e, f, i, j) * Wabef[((a * nv + b) * nv + e) * nv + f];
          auto ring = [&](std::size_t A, std::size_t Bb, std::size_t I, std::size_t J) {
            double y = 0.0;
            for (std::size_t m = 0; m < no; ++m)
              for (std::size_t e = 0; e < nv; ++e)
                y += t2(A, e, I, m) * Wmbej[((m * nv + Bb) * nv + e) * no + J] -
                     t1(e, I) * t1(A, m) * ovvo(m, Bb, e, J);
            return y;
          };
          x += ring(a, b, i, j) - ring(a, b, j, i) - ring(b, a, i, j) + ring(b, a, j, i);
          for (std::size_t e = 0; e < nv; ++e)
            x += t1(e, i) * vvvo(a, b, e, j) - t1(e, j) * vvvo(a, b, e, i);
          for (std::size_t m = 0; m < no; ++m)
            x -= t1(a, m) * ovoo(m, b, i, j) - t1(b, m) * ovoo(m, a, i, j);
          x -= eps_denominator(B, {i, j}, {a, b}) * t2(a, b, i, j);
          R.r2[t.i4(a, b, i, j)] = x;
        }
  return R;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Mp2Result mp2_amplitudes(const NormalOrderedOperator& op, const Determinant& reference) {
  const Blocks B(op, reference);
  Mp2Result r{ClusterAmplitudes(op.n_spinorbitals(), reference), 0.0};
  for (std::size_t a = 0; a < B.nv; ++a)
    for (std::size_t b = a + 1; b < B.nv; ++b)
      for (std::size_t i = 0; i < B.no; ++i)
        for (std::size_t j = i + 1; j < B.no; ++j) {
          const double num = op.v(B.V[a], B.V[b], B.O[i], B.O[j]);
          const double d = eps_denominator(B, {i, j}, {a, b});
          if (num == 0.0 && std::abs(d) >= 1e-10) continue;
          check_denominator(d, "(i,j,a,b) = (" + std::to_string(B.O[i]) + "," +
                                   std::to_string(B.O[j]) + "," + std::to_string(B.V[a]) +
                                   "," + std::to_string(B.V[b]) + ")");
          r.t.set_t2(a, b, i, j, num / d);
        }
  r.correlation_energy = ccsd_correlation_energy(op, r.t);
  return r;
}

double ccsd_correlation_energy(const NormalOrderedOperator& op, const ClusterAmplitudes& t) {
  const Blocks B(op, t.reference());
  double e = 0.0;
  for (std::size_t a = 0; a < B.nv; ++a)
    for (std::size_t i = 0; i < B.no; ++i) e += B.fov(i, a) * t.t1(a, i);
  for (std::size_t a = 0; a < B.nv; ++a)
    for (std::size_t b = 0; b < B.nv; ++b)
      for (std::size_t i = 0; i < B.no; ++i)
        for (std::size_t j = 0; j < B.no; ++j) {
          const double g = op.v(B.O[i], B.O[j], B.V[a], B.V[b]);
          e += 0.25 * g * t.t2(a, b, i, j) + 0.5 * g * t.t1(a, i) * t.t1(b, j);
        }
  return e;
}

double ccsd_residual_norm(const NormalOrderedOperator& op, const ClusterAmplitudes& t) {
  const Blocks B(op, t.reference());
  const Residuals R = residuals(B, t);
  return std::max(max_abs(R.r1), max_abs(R.r2));
}

CcsdResult ccsd_solve(const NormalOrderedOperator& op, const Determinant& reference,
                      const CcsdConfig& config) {
  const Blocks B(op, reference);
  const std::size_t no = B.no, nv = B.nv;
  std::vector<double> d1(nv * no), d2(nv * nv * no * no, 1.0);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t i = 0; i < no; ++i) {
      d1[a * no + i] = eps_denominator(B, {i}, {a});
      check_denominator(d1[a * no + i], "(i,a) = (" + std::to_string(B.O[i]) + "," +
                                            std::to_string(B.V[a]) + ")");
    }
  CcsdResult result;
  result.t = mp2_amplitudes(op, reference).t;
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j)
          if (a != b && i != j) d2[result.t.i4(a, b, i, j)] = eps_denominator(B, {i, j}, {a, b});
  result.reference_energy = normal_order(op, reference).scalar();

  const std::size_t n1 = d1.size(), n2 = d2.size();
  std::deque<Eigen::VectorXd> hist_t, hist_e;
  ClusterAmplitudes& t = result.t;
  for (int it = 1; it <= config.max_iter; ++it) {
    const Residuals R = residuals(B, t);
    const double rnorm = std::max(max_abs(R.r1), max_abs(R.r2));
    result.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) {
      throw ConvergenceError("CCSD residual became non-finite", result.residual_history);
    }
    if (rnorm < config.residual_tol) {
      result.iterations = it - 1;
      result.correlation_energy = ccsd_correlation_energy(op, t);
      return result;
    }
    Eigen::VectorXd tv(n1 + n2), ev(n1 + n2);
    for (std::size_t k = 0; k < n1; ++k) {
      ev[k] = config.damping * R.r1[k] / d1[k];
      tv[k] = t.t1_data()[k] + ev[k];
    }
    for (std::size_t k = 0; k < n2; ++k) {
      ev[n1 + k] = config.damping * R.r2[k] / d2[k];
      tv[n1 + k] = t.t2_data()[k] + ev[n1 + k];
    }
    if (config.diis_depth > 1) {
      hist_t.push_back(tv);
      hist_e.push_back(ev);
      if (static_cast<int>(hist_t.size()) > config.diis_depth) {
        hist_t.pop_front();
        hist_e.pop_front();
      }
      const auto m = static_cast<Eigen::Index>(hist_t.size());
      if (m >= 2) {
        Eigen::MatrixXd Bm = Eigen::MatrixXd::Zero(m + 1, m + 1);
        for (Eigen::Index x = 0; x < m; ++x)
          for (Eigen::Index y = 0; y < m; ++y) Bm(x, y) = hist_e[x].dot(hist_e[y]);
        const double scale = Bm.diagonal().head(m).maxCoeff();
        if (scale > 0) Bm.topLeftCorner(m, m) /= scale;
        Bm.row(m).head(m).setConstant(-1.0);
        Bm.col(m).head(m).setConstant(-1.0);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        rhs[m] = -1.0;
        const Eigen::VectorXd c = Bm.colPivHouseholderQr().solve(rhs);
        if (c.allFinite()) {
          tv.setZero();
          for (Eigen::Index x = 0; x < m; ++x) tv += c[x] * hist_t[x];
        }
      }
    }
    for (std::size_t k = 0; k < n1; ++k) t.t1_data()[k] = tv[k];
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = a + 1; b < nv; ++b)
        for (std::size_t i = 0; i < no; ++i)
          for (std::size_t j = i + 1; j < no; ++j)
            t.set_t2(a, b, i, j, tv[static_cast<Eigen::Index>(n1 + t.i4(a, b, i, j))]);
  }
  throw ConvergenceError("CCSD did not converge in " + std::to_string(config.max_iter) +
                             " iterations",
                         result.residual_history);
}

std::pair<ClusterAmplitudes, ClusterAmplitudes> partition_amplitudes(
    const ClusterAmplitudes& t, const ActiveSpaceSpec& spec) {
  ClusterAmplitudes tin = t, tex = t;
  auto active = [&](std::size_t spin_orb) { return spec.is_active(spatial_of(spin_orb)); };
  const auto& O = t.occupied();
  const auto& V = t.virtuals();
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t i = 0; i < O.size(); ++i) {
      const bool in = active(V[a]) && active(O[i]);
      (in ? tex : tin).t1(a, i) = 0.0;
    }
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = 0; b < V.size(); ++b)
      for (std::size_t i = 0; i < O.size(); ++i)
        for (std::size_t j = 0; j < O.size(); ++j) {
          const bool in = active(V[a]) && active(V[b]) && active(O[i]) && active(O[j]);
          (in ? tex : tin).t2_data()[t.i4(a, b, i, j)] = 0.0;
        }
  return {std::move(tin), std::move(tex)};
}

void write_amplitudes(const ClusterAmplitudes& t, std::ostream& out) {
  const auto& O = t.occupied();
  const auto& V = t.virtuals();
  char buf[64];
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t i = 0; i < O.size(); ++i)
      if (t.t1(a, i) != 0.0) {
        std::snprintf(buf, sizeof buf, "%.16e", t.t1(a, i));
        out << V[a] << ' ' << O[i] << ' ' << buf << '\n';
      }
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = a + 1; b < V.size(); ++b)
      for (std::size_t i = 0; i < O.size(); ++i)
        for (std::size_t j = i + 1; j < O.size(); ++j)
          if (t.t2(a, b, i, j) != 0.0) {
            std::snprintf(buf, sizeof buf, "%.16e", t.t2(a, b, i, j));
            out << V[a] << ' ' << V[b] << ' ' << O[i] << ' ' << O[j] << ' ' << buf << '\n';
          }
}

ClusterAmplitudes read_amplitudes(std::istream& in, std::size_t n_spinorbitals,
                                  const Determinant& reference) {
  ClusterAmplitudes t(n_spinorbitals, reference);
  std::vector<long> occ_pos(n_spinorbitals, -1), vir_pos(n_spinorbitals, -1);
  for (std::size_t k = 0; k < t.n_occ(); ++k) occ_pos[t.occupied()[k]] = static_cast<long>(k);
  for (std::size_t k = 0; k < t.n_vir(); ++k) vir_pos[t.virtuals()[k]] = static_cast<long>(k);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> f;
    std::string tok;
    while (ss >> tok) f.push_back(tok);
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 3 && f.size() != 5) throw ParseError("expected 3 or 5 fields", lineno);
    std::vector<long> idx;
    try {
      for (std::size_t k = 0; k + 1 < f.size(); ++k) idx.push_back(std::stol(f[k]));
    } catch (const std::exception&) {
      throw ParseError("bad orbital label", lineno);
    }
    double value;
    try {
      value = std::stod(f.back());
    } catch (const std::exception&) {
      throw ParseError("bad amplitude value", lineno);
    }
    for (long x : idx)
      if (x < 0 || static_cast<std::size_t>(x) >= n_spinorbitals)
        throw ParseError("orbital label out of range", lineno);
    const std::size_t half = idx.size() / 2;
    std::vector<long> loc;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const long p = k < half ? vir_pos[idx[k]] : occ_pos[idx[k]];
      if (p < 0) throw ParseError("label does not match the occupied/virtual split", lineno);
      loc.push_back(p);
    }
    if (idx.size() == 2) {
      t.t1(loc[0], loc[1]) = value;
    } else {
      t.set_t2(loc[0], loc[1], loc[2], loc[3], value);
    }
  }
  return t;
}

}  // namespace dvqe
