#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dvqe/active_space.hpp"
#include "dvqe/ccsd.hpp"
#include "dvqe/gucc.hpp"

namespace dvqe {

/// fci: full-system FCI; bare-/ducc- stages act on the active space.
enum class Stage { Fci, Ccsd, BareFci, DuccFci, BareVqe, DuccVqe };
std::string to_string(Stage s);
Stage parse_stage(const std::string& s);
InitialGuess parse_guess(const std::string& s);

struct RunConfig {
  std::string label;
  std::string fcidump;
  std::size_t n_frozen_core = 0;
  std::optional<std::size_t> n_active;       // lowest window after the frozen core
  std::vector<std::size_t> active_orbitals;  // explicit list, wins over n_active
  std::vector<Stage> stages{Stage::Fci};
  std::string ket = "hf";                    // or file:PATH over the active space
  InitialGuess guess = InitialGuess::Zero;
  bool occupied_virtual_pool = false;
  double amp_tol = 1e-8;
  double grad_tol = 1e-5;
  int max_iter = 5000;
  bool limited_memory = false;
  int quadrature_order = 16;
  CcsdConfig ccsd;
  std::optional<double> e_fci_reference;
  std::string out_dir;  // empty: nothing written
  bool export_fcidump = true;
};

struct MethodResult {
  Stage stage = Stage::Fci;
  std::optional<double> energy;
  std::string error;  // non-empty when the stage failed
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct PointResult {
  std::string label;
  std::string fcidump;
  double e_hf = 0.0;
  std::optional<double> e_fci;
  ActiveSpaceSpec active;
  std::vector<MethodResult> methods;
  std::string error;  // setup failure

  bool ok() const;
  const MethodResult* find(Stage s) const;
  nlohmann::ordered_json to_json() const;
};

/// 100 (e_hf - e_method) / (e_hf - e_fci); DegenerateReference if e_hf <= e_fci.
double percent_correlation(double e_hf, double e_method, double e_fci);

ActiveSpaceSpec resolve_active_space(const RunConfig& config, std::size_t norb, int nelec);

/// Runs the selected stages in order. Failures are recorded per stage.
/// With out_dir set: result.json, trace_<stage>.jsonl, vector and FCIDUMP exports.
PointResult run_point(const RunConfig& config);

struct ScanManifest {
  RunConfig base;
  std::vector<std::pair<std::string, std::string>> rows;  // label, FCIDUMP path
  unsigned jobs = 1;
};

/// One run_point per row (concurrent up to jobs), results in manifest order;
/// table.tsv and table.json go to base.out_dir, row outputs to out_dir/label.
std::vector<PointResult> run_scan(const ScanManifest& manifest);

void write_table_tsv(const std::vector<PointResult>& rows, const std::vector<Stage>& stages,
                     std::ostream& out);

}  // namespace dvqe
