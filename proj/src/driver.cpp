#include "dvqe/driver.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dvqe/downfold.hpp"
#include "dvqe/eigensolver.hpp"
#include "dvqe/error.hpp"
#include "dvqe/fcidump.hpp"
#include "dvqe/fermion_ops.hpp"
#include "dvqe/refvec.hpp"
#include "dvqe/vqe.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace dvqe {

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Fci: return "fci";
    case Stage::Ccsd: return "ccsd";
    case Stage::BareFci: return "bare-fci";
    case Stage::DuccFci: return "ducc-fci";
    case Stage::BareVqe: return "bare-vqe";
    case Stage::DuccVqe: return "ducc-vqe";
  }
  return "unknown";
}

Stage parse_stage(const std::string& s) {
  for (Stage st : {Stage::Fci, Stage::Ccsd, Stage::BareFci, Stage::DuccFci, Stage::BareVqe,
                   Stage::DuccVqe})
    if (to_string(st) == s) return st;
  throw ConfigError("unknown stage '" + s + "'");
}

InitialGuess parse_guess(const std::string& s) {
  if (s == "zero") return InitialGuess::Zero;
  if (s == "mp2") return InitialGuess::MP2;
  if (s == "vector") return InitialGuess::FromVector;
  throw ConfigError("unknown initial guess '" + s + "'");
}

double percent_correlation(double e_hf, double e_method, double e_fci) {
  if (!(e_hf > e_fci)) {
    throw DegenerateReference("reference energy does not lie above the FCI energy");
  }
  return 100.0 * (e_hf - e_method) / (e_hf - e_fci);
}

bool PointResult::ok() const {
  if (!error.empty()) return false;
  for (const auto& m : methods)
    if (!m.error.empty()) return false;
  return true;
}

const MethodResult* PointResult::find(Stage s) const {
  for (const auto& m : methods)
    if (m.stage == s) return &m;
  return nullptr;
}

ojson PointResult::to_json() const {
  ojson j;
  j["label"] = label;
  j["fcidump"] = fcidump;
  if (!error.empty()) j["error"] = error;
  j["e_hf"] = error.empty() ? ojson(e_hf) : ojson(nullptr);
  j["e_fci"] = e_fci ? ojson(*e_fci) : ojson(nullptr);
  j["active_space"] = {{"n_frozen_core", active.n_frozen_core},
                       {"orbitals", active.active_orbitals},
                       {"n_electrons", active.n_active_electrons}};
  ojson ms = ojson::array();
  for (const auto& m : methods) {
    ojson x;
    x["stage"] = to_string(m.stage);
    x["energy"] = m.energy ? ojson(*m.energy) : ojson(nullptr);
    if (m.energy && e_fci) {
      x["error_vs_fci"] = *m.energy - *e_fci;
      try {
        x["percent_correlation"] = percent_correlation(e_hf, *m.energy, *e_fci);
      } catch (const DegenerateReference&) {
        x["percent_correlation"] = nullptr;
      }
    }
    if (!m.error.empty()) x["error"] = m.error;
    for (const auto& [k, v] : m.details.items()) x[k] = v;
    ms.push_back(std::move(x));
  }
  j["methods"] = std::move(ms);
  return j;
}

ActiveSpaceSpec resolve_active_space(const RunConfig& config, std::size_t norb, int nelec) {
  ActiveSpaceSpec spec;
  if (!config.active_orbitals.empty()) {
    spec.n_frozen_core = config.n_frozen_core;
    spec.active_orbitals = config.active_orbitals;
    // electrons of the lowest determinant that sit in the chosen orbitals
    const int na = (nelec + 1) / 2, nb = nelec / 2;
    for (std::size_t k : spec.active_orbitals)
      spec.n_active_electrons += (static_cast<int>(k) < na) + (static_cast<int>(k) < nb);
  } else {
    const std::size_t n_act =
        config.n_active.value_or(norb > config.n_frozen_core ? norb - config.n_frozen_core : 0);
    spec = ActiveSpaceSpec::lowest(norb, nelec, n_act, config.n_frozen_core);
  }
  spec.validate(norb, nelec);
  return spec;
}

namespace {

struct Context {
  const RunConfig& cfg;
  FcidumpData data;
  NormalOrderedOperator h;
  Determinant hf;
  ActiveSpaceSpec spec;
  std::optional<DownfoldResult> bare, ducc;
  std::optional<GroundState> bare_fci, ducc_fci;

  const DownfoldResult& active(bool with_ducc) {
    auto& slot = with_ducc ? ducc : bare;
    if (!slot) {
      DownfoldConfig dc;
      dc.ccsd = cfg.ccsd;
      dc.ducc = with_ducc;
      slot = downfold(data, spec, dc);
    }
    return *slot;
  }
  const GroundState& active_fci(bool with_ducc) {
    auto& slot = with_ducc ? ducc_fci : bare_fci;
    if (!slot) {
      const DownfoldResult& d = active(with_ducc);
      slot = ground_state(d.active, make_space(d.n_active_spatial, d.n_alpha, d.n_beta));
    }
    return *slot;
  }
  fs::path out(const std::string& name) const { return fs::path(cfg.out_dir) / name; }
};

void describe_downfold(const DownfoldResult& d, ojson& x) {
  x["n_active_orbitals"] = d.n_active_spatial;
  x["n_alpha"] = d.n_alpha;
  x["n_beta"] = d.n_beta;
  if (d.ccsd) {
    x["ccsd_iterations"] = d.ccsd->iterations;
    x["ccsd_energy"] = d.ccsd->energy();
  }
  x["n_external_amplitudes"] = d.n_external_amplitudes;
  x["asymmetry_before_symmetrization"] = d.ducc.asymmetry;
}

void run_stage(Stage stage, Context& c, MethodResult& m) {
  const RunConfig& cfg = c.cfg;
  const bool files = !cfg.out_dir.empty();
  switch (stage) {
    case Stage::Fci: {
      const SpacePtr s = make_space(c.data.norb, c.data.n_alpha(), c.data.n_beta());
      const GroundState g = ground_state(c.h, s);
      m.energy = g.energy;
      m.details["dimension"] = s->size();
      m.details["iterations"] = g.iterations;
      return;
    }
    case Stage::Ccsd: {
      const CcsdResult r = ccsd_solve(c.h, c.hf, cfg.ccsd);
      const Mp2Result mp2 = mp2_amplitudes(c.h, c.hf);
      m.energy = r.energy();
      m.details["correlation_energy"] = r.correlation_energy;
      m.details["mp2_correlation_energy"] = mp2.correlation_energy;
      m.details["iterations"] = r.iterations;
      m.details["final_residual"] = r.residual_history.empty() ? 0.0 : r.residual_history.back();
      if (files) {
        std::ofstream f(c.out("amplitudes.txt"));
        write_amplitudes(r.t, f);
      }
      return;
    }
    case Stage::BareFci:
    case Stage::DuccFci: {
      const bool with = stage == Stage::DuccFci;
      const DownfoldResult& d = c.active(with);
      const GroundState& g = c.active_fci(with);
      m.energy = g.energy;
      describe_downfold(d, m.details);
      if (files && cfg.export_fcidump) {
        const std::string name = with ? "active_ducc.fcidump" : "active_bare.fcidump";
        write_fcidump(d.active, d.n_alpha + d.n_beta, d.n_alpha - d.n_beta, c.out(name).string());
        m.details["fcidump_export"] = name;
      }
      return;
    }
    case Stage::BareVqe:
    case Stage::DuccVqe: {
      const bool with = stage == Stage::DuccVqe;
      const DownfoldResult& d = c.active(with);
      const GroundState& g = c.active_fci(with);
      const SpacePtr s = g.vector.space;
      const CIVector hf = CIVector::basis(s, d.active_reference);
      CIVector ket = hf;
      if (cfg.ket.rfind("file:", 0) == 0) {
        ket = load_reference_vector(cfg.ket.substr(5), s);
      } else if (cfg.ket != "hf") {
        throw ConfigError("ket must be 'hf' or 'file:PATH'");
      }
      const std::size_t n = d.active.n_spinorbitals();
      const ExcitationPool pool = cfg.occupied_virtual_pool
                                      ? ExcitationPool::occupied_virtual(n, d.active_reference)
                                      : ExcitationPool::generalized(n);
      VqeConfig vc;
      vc.optimizer.amp_tol = cfg.amp_tol;
      vc.optimizer.grad_tol = cfg.grad_tol;
      vc.optimizer.max_iter = cfg.max_iter;
      vc.optimizer.limited_memory = cfg.limited_memory;
      vc.gucc.quadrature_order = cfg.quadrature_order;
      vc.fci_state = g.vector;
      vc.initial = initial_parameters(cfg.guess, pool, d.active, d.active_reference, &ket);
      std::ofstream trace;
      const std::string tname = "trace_" + to_string(stage) + ".jsonl";
      if (files) {
        trace.open(c.out(tname));
        vc.trace = &trace;
      }
      const VqeResult r = vqe_minimize(d.active, ket, pool, vc);
      m.energy = r.energy;
      m.details["active_fci_energy"] = g.energy;
      m.details["vqe_minus_active_fci"] = r.energy - g.energy;
      m.details["pool_size"] = pool.size();
      m.details["iterations"] = r.iterations;
      m.details["evaluations"] = r.evaluations;
      m.details["gradient_inf_norm"] = r.gradient_inf_norm;
      m.details["overlap_with_fci"] = *r.overlap_with_fci;
      m.details["delta_norm"] = *r.delta_norm;
      m.details["converged"] = r.converged;
      m.details["termination_reason"] = to_string(r.termination_reason);
      m.details["min_energy_evaluated"] = r.min_energy_evaluated;
      m.details["max_norm_error"] = r.max_norm_error;
      if (files) {
        m.details["trace"] = tname;
        const std::string vname = "state_" + to_string(stage) + ".vec";
        write_reference_vector(r.state, c.out(vname).string(), 0.0);
        m.details["state_export"] = vname;
      }
      return;
    }
  }
}

}  // namespace

PointResult run_point(const RunConfig& cfg) {
  PointResult p;
  p.label = cfg.label.empty() ? cfg.fcidump : cfg.label;
  p.fcidump = cfg.fcidump;
  p.e_fci = cfg.e_fci_reference;
  std::optional<Context> c;
  try {
    FcidumpData data = read_fcidump(cfg.fcidump);
    NormalOrderedOperator h = spatial_to_spinorbital(data);
    const Determinant hf = Determinant::lowest(data.n_alpha(), data.n_beta());
    const ActiveSpaceSpec spec = resolve_active_space(cfg, data.norb, data.nelec);
    c.emplace(Context{cfg, std::move(data), std::move(h), hf, spec, {}, {}, {}, {}});
    p.active = spec;
    p.e_hf = normal_order(c->h, hf).scalar();
    if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    p.error = std::string("setup: ") + e.what();
    spdlog::error("{}: {}", p.label, p.error);
    return p;
  }
  for (Stage s : cfg.stages) {
    MethodResult m;
    m.stage = s;
    try {
      run_stage(s, *c, m);
      spdlog::info("{} {}: {:.8f}", p.label, to_string(s), *m.energy);
    } catch (const std::exception& e) {
      m.error = to_string(s) + ": " + e.what();
      spdlog::error("{}: {}", p.label, m.error);
    }
    if (s == Stage::Fci && m.energy && !cfg.e_fci_reference) p.e_fci = m.energy;
    p.methods.push_back(std::move(m));
  }
  if (!cfg.out_dir.empty()) {
    std::ofstream f(fs::path(cfg.out_dir) / "result.json");
    f << p.to_json().dump(2) << '\n';
  }
  return p;
}

void write_table_tsv(const std::vector<PointResult>& rows, const std::vector<Stage>& stages,
                     std::ostream& out) {
  auto full = [](double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return std::string(b);
  };
  auto fixed8 = [](double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.8f", x);
    return std::string(b);
  };
  out << "label\te_hf\te_fci";
  for (Stage s : stages) {
    const std::string n = to_string(s);
    out << '\t' << n << "_energy\t" << n << "_error\t" << n << "_percent";
  }
  for (Stage s : stages) {
    const std::string n = to_string(s);
    out << '\t' << n << "_energy_display\t" << n << "_error_display\t" << n << "_percent_display";
  }
  out << '\n';
  for (const PointResult& r : rows) {
    std::vector<std::string> fullcols, shown;
    for (Stage s : stages) {
      const MethodResult* m = r.find(s);
      std::string e = "NA", err = "NA", pc = "NA", e8 = "NA", err8 = "NA", pc0 = "NA";
      if (m && m->energy) {
        e = full(*m->energy);
        e8 = fixed8(*m->energy);
        if (r.e_fci) {
          err = full(*m->energy - *r.e_fci);
          err8 = fixed8(*m->energy - *r.e_fci);
          try {
            const double p = percent_correlation(r.e_hf, *m->energy, *r.e_fci);
            pc = full(p);
            pc0 = std::to_string(static_cast<long>(std::lround(p)));
          } catch (const DegenerateReference&) {
          }
        }
      }
      fullcols.insert(fullcols.end(), {e, err, pc});
      shown.insert(shown.end(), {e8, err8, pc0});
    }
    out << r.label << '\t' << (r.error.empty() ? full(r.e_hf) : "NA") << '\t'
        << (r.e_fci ? full(*r.e_fci) : "NA");
    for (const auto& x : fullcols) out << '\t' << x;
    for (const auto& x : shown) out << '\t' << x;
    out << '\n';
  }
}

std::vector<PointResult> run_scan(const ScanManifest& manifest) {
  const std::size_t n = manifest.rows.size();
  std::vector<PointResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      RunConfig cfg = manifest.base;
      cfg.label = manifest.rows[i].first;
      cfg.fcidump = manifest.rows[i].second;
      if (!manifest.base.out_dir.empty()) {
        cfg.out_dir = (fs::path(manifest.base.out_dir) / cfg.label).string();
      }
      results[i] = run_point(cfg);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(manifest.jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!manifest.base.out_dir.empty()) {
    fs::create_directories(manifest.base.out_dir);
    std::ofstream tsv(fs::path(manifest.base.out_dir) / "table.tsv");
    write_table_tsv(results, manifest.base.stages, tsv);
    ojson all = ojson::array();
    for (const auto& r : results) all.push_back(r.to_json());
    std::ofstream js(fs::path(manifest.base.out_dir) / "table.json");
    js << all.dump(2) << '\n';
  }
  return results;
}

}  // namespace dvqe
