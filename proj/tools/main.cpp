#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dvqe/driver.hpp"
#include "dvqe/error.hpp"

using namespace dvqe;

namespace {

struct Flags {
  std::string fcidump;
  std::string active;
  std::size_t frozen_core = 0;
  std::string ket = "hf";
  std::string guess = "zero";
  double amp_tol = 1e-8;
  double grad_tol = 1e-5;
  int max_iter = 5000;
  int quadrature = 16;
  bool lbfgs = false;
  bool occ_virt = false;
  bool bare = false;
  std::string out;
  std::vector<std::string> stages;
  std::string log_level = "info";
  // scan
  std::vector<std::string> points;
  std::string manifest;
  unsigned jobs = 1;
};

void add_common(CLI::App* sub, Flags& f, bool needs_fcidump) {
  auto* opt = sub->add_option("--fcidump", f.fcidump, "FCIDUMP file");
  if (needs_fcidump) opt->required();
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--stages", f.stages, "stages to run, overriding the subcommand default")
      ->delimiter(',');
}

void add_active(CLI::App* sub, Flags& f) {
  sub->add_option("--active", f.active,
                  "active orbitals: a count (lowest after the core) or a comma list of indices");
  sub->add_option("--frozen-core", f.frozen_core, "number of frozen core orbitals");
}

void add_vqe(CLI::App* sub, Flags& f) {
  sub->add_option("--ket", f.ket, "reference ket: hf or file:PATH");
  sub->add_option("--guess", f.guess, "initial parameters")
      ->check(CLI::IsMember({"zero", "mp2", "vector"}));
  sub->add_option("--amp-tol", f.amp_tol, "maximum amplitude change for convergence");
  sub->add_option("--grad-tol", f.grad_tol, "maximum gradient component for convergence");
  sub->add_option("--max-iter", f.max_iter);
  sub->add_option("--quadrature", f.quadrature, "Gauss-Legendre order for the gradient");
  sub->add_flag("--lbfgs", f.lbfgs, "limited-memory BFGS");
  sub->add_flag("--occ-virt", f.occ_virt, "occupied-to-virtual pool instead of generalized");
}

RunConfig to_config(const Flags& f, std::vector<Stage> defaults) {
  RunConfig c;
  c.fcidump = f.fcidump;
  c.n_frozen_core = f.frozen_core;
  if (!f.active.empty()) {
    if (f.active.find(',') == std::string::npos) {
      c.n_active = std::stoul(f.active);
    } else {
      std::stringstream ss(f.active);
      std::string tok;
      while (std::getline(ss, tok, ',')) c.active_orbitals.push_back(std::stoul(tok));
    }
  }
  c.ket = f.ket;
  c.guess = parse_guess(f.guess);
  c.amp_tol = f.amp_tol;
  c.grad_tol = f.grad_tol;
  c.max_iter = f.max_iter;
  c.quadrature_order = f.quadrature;
  c.limited_memory = f.lbfgs;
  c.occupied_virtual_pool = f.occ_virt;
  c.out_dir = f.out;
  c.stages.clear();
  if (f.stages.empty()) {
    c.stages = std::move(defaults);
  } else {
    for (const auto& s : f.stages) c.stages.push_back(parse_stage(s));
  }
  return c;
}

int report(const PointResult& r) {
  std::cout << r.to_json().dump(2) << '\n';
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DUCC downfolding and GUCCSD VQE emulation"};
  app.set_config("--config", "", "INI or TOML file; command-line flags override its keys");
  app.require_subcommand(1);
  Flags f;
  app.add_option("--log-level", f.log_level)
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto* fci = app.add_subcommand("fci", "full-space FCI");
  add_common(fci, f, true);

  auto* ccsd = app.add_subcommand("ccsd", "CCSD on the full space, amplitudes written to --out");
  add_common(ccsd, f, true);

  auto* down = app.add_subcommand("downfold", "active-space Hamiltonian and its FCI energy");
  add_common(down, f, true);
  add_active(down, f);
  down->add_flag("--bare", f.bare, "skip the DUCC transformation");

  auto* vqe = app.add_subcommand("vqe", "GUCCSD VQE on the (downfolded) active space");
  add_common(vqe, f, true);
  add_active(vqe, f);
  add_vqe(vqe, f);
  vqe->add_flag("--bare", f.bare, "skip the DUCC transformation");

  auto* scan = app.add_subcommand("scan", "several FCIDUMP files through the same stages");
  add_common(scan, f, false);
  add_active(scan, f);
  add_vqe(scan, f);
  scan->add_option("--point", f.points, "label=path, repeatable");
  scan->add_option("--manifest", f.manifest, "file with one 'label path' pair per line");
  scan->add_option("--jobs", f.jobs, "concurrent points");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("dvqe"));
  spdlog::set_level(spdlog::level::from_str(f.log_level));

  try {
    if (fci->parsed()) return report(run_point(to_config(f, {Stage::Fci})));
    if (ccsd->parsed()) return report(run_point(to_config(f, {Stage::Ccsd})));
    if (down->parsed()) {
      return report(run_point(to_config(f, {f.bare ? Stage::BareFci : Stage::DuccFci})));
    }
    if (vqe->parsed()) {
      return report(run_point(
          to_config(f, {f.bare ? Stage::BareFci : Stage::DuccFci,
                        f.bare ? Stage::BareVqe : Stage::DuccVqe})));
    }
    ScanManifest m;
    m.base = to_config(f, {Stage::Fci, Stage::BareFci, Stage::DuccFci});
    m.jobs = f.jobs;
    for (const auto& p : f.points) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ConfigError("--point expects label=path, got " + p);
      m.rows.emplace_back(p.substr(0, eq), p.substr(eq + 1));
    }
    if (!f.manifest.empty()) {
      std::ifstream in(f.manifest);
      if (!in) throw ConfigError("cannot open manifest " + f.manifest);
      std::string label, path;
      while (in >> label >> path) m.rows.emplace_back(label, path);
    }
    if (m.rows.empty()) throw ConfigError("scan needs --point or --manifest");
    const auto rows = run_scan(m);
    write_table_tsv(rows, m.base.stages, std::cout);
    for (const auto& r : rows)
      if (!r.ok()) return 1;
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
