#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dvqe/driver.hpp"
#include "dvqe/error.hpp"
#include "dvqe/fcidump.hpp"
#include "dvqe/refvec.hpp"
#include "support/fixtures.hpp"

using namespace dvqe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dvqe_test_driver_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_tsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, '\t')) cols.push_back(c);
    rows.push_back(cols);
  }
  return rows;
}

}  // namespace

TEST_CASE("percent correlation recovered") {
  CHECK(std::lround(percent_correlation(0.2178, 0.2113, 0.0)) == 3);
  CHECK(std::lround(percent_correlation(0.2178, 0.0189, 0.0)) == 91);
  CHECK(percent_correlation(-1.0, -1.3, -1.3) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(percent_correlation(-1.0, -1.0, -1.3) == 0.0);
  CHECK_THROWS_AS(percent_correlation(-1.3, -1.2, -1.3), DegenerateReference);
  CHECK_THROWS_AS(percent_correlation(-1.4, -1.2, -1.3), DegenerateReference);
}

TEST_CASE("stage names and guesses parse") {
  for (Stage s : {Stage::Fci, Stage::Ccsd, Stage::BareFci, Stage::DuccFci, Stage::BareVqe,
                  Stage::DuccVqe})
    CHECK(parse_stage(to_string(s)) == s);
  CHECK_THROWS_AS(parse_stage("mps"), ConfigError);
  CHECK(parse_guess("mp2") == InitialGuess::MP2);
  CHECK_THROWS_AS(parse_guess("random"), ConfigError);
}

TEST_CASE("active space resolution") {
  RunConfig c;
  const ActiveSpaceSpec all = resolve_active_space(c, 6, 6);
  CHECK(all.active_orbitals.size() == 6);
  CHECK(all.n_active_electrons == 6);
  c.n_frozen_core = 1;
  c.n_active = 3;
  const ActiveSpaceSpec w = resolve_active_space(c, 6, 6);
  CHECK(w.active_orbitals == std::vector<std::size_t>{1, 2, 3});
  CHECK(w.n_active_electrons == 4);
  c.active_orbitals = {2, 4};
  CHECK(resolve_active_space(c, 6, 6).n_active_electrons == 2);
  c.active_orbitals = {0, 2};
  CHECK_THROWS_AS(resolve_active_space(c, 6, 6), ConfigError);
}

TEST_CASE("ducc-fci with every orbital active equals bare-fci and fci") {
  RunConfig c;
  c.fcidump = fixtures::fcidump("h4_sto3g_r1.50");
  c.stages = {Stage::Fci, Stage::BareFci, Stage::DuccFci};
  const PointResult r = run_point(c);
  REQUIRE(r.ok());
  const double e = *r.find(Stage::Fci)->energy;
  CHECK(*r.find(Stage::BareFci)->energy == doctest::Approx(e).epsilon(1e-12));
  CHECK(*r.find(Stage::DuccFci)->energy == doctest::Approx(e).epsilon(1e-12));
  CHECK(e == doctest::Approx(fixtures::reference("h4_sto3g_r1.50").e_fci).epsilon(1e-10));
  CHECK(r.e_hf == doctest::Approx(fixtures::reference("h4_sto3g_r1.50").e_hf).epsilon(1e-10));
  CHECK(*r.e_fci == e);
}

TEST_CASE("ducc-vqe matches ducc-fci and writes its outputs") {
  const fs::path out = scratch("point");
  RunConfig c;
  c.fcidump = fixtures::fcidump("h6_sto3g_r1.00");
  c.n_active = 4;
  c.stages = {Stage::DuccFci, Stage::DuccVqe, Stage::BareVqe};
  c.out_dir = out.string();
  const PointResult r = run_point(c);
  REQUIRE(r.ok());
  const double ducc = *r.find(Stage::DuccFci)->energy;
  CHECK(std::abs(*r.find(Stage::DuccVqe)->energy - ducc) < 1e-4);
  CHECK(std::abs(r.find(Stage::DuccVqe)->details["vqe_minus_active_fci"].get<double>()) < 1e-4);
  CHECK(std::abs(r.find(Stage::BareVqe)->details["vqe_minus_active_fci"].get<double>()) < 1e-4);
  for (const char* f : {"result.json", "active_ducc.fcidump", "trace_ducc-vqe.jsonl",
                        "trace_bare-vqe.jsonl", "state_ducc-vqe.vec"})
    CHECK(fs::exists(out / f));

  // exported operator reproduces the active-space energy
  RunConfig again;
  again.fcidump = (out / "active_ducc.fcidump").string();
  again.stages = {Stage::Fci};
  CHECK(*run_point(again).find(Stage::Fci)->energy == doctest::Approx(ducc).epsilon(1e-11));

  // exported state used as the reference ket starts at the optimum
  RunConfig k = c;
  k.out_dir.clear();
  k.stages = {Stage::DuccVqe};
  k.ket = "file:" + (out / "state_ducc-vqe.vec").string();
  const PointResult rk = run_point(k);
  REQUIRE(rk.ok());
  CHECK(rk.find(Stage::DuccVqe)->details["iterations"].get<int>() <= 2);
  CHECK(std::abs(*rk.find(Stage::DuccVqe)->energy - ducc) < 1e-8);
}

TEST_CASE("identical configurations give byte-identical JSON") {
  RunConfig c;
  c.fcidump = fixtures::fcidump("lih_sto3g_r1.60");
  c.n_frozen_core = 1;
  c.n_active = 3;
  c.stages = {Stage::Fci, Stage::Ccsd, Stage::DuccFci, Stage::DuccVqe};
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  c.out_dir = a.string();
  run_point(c);
  c.out_dir = b.string();
  run_point(c);
  const std::string ja = slurp(a / "result.json");
  CHECK(!ja.empty());
  CHECK(ja == slurp(b / "result.json"));
  CHECK(slurp(a / "trace_ducc-vqe.jsonl") == slurp(b / "trace_ducc-vqe.jsonl"));
  CHECK(slurp(a / "active_ducc.fcidump") == slurp(b / "active_ducc.fcidump"));
}

TEST_CASE("stage failures are reported with the stage name and keep partial results") {
  RunConfig c;
  c.fcidump = fixtures::fcidump("h4_sto3g_r1.50");
  c.n_active = 2;
  c.stages = {Stage::Fci, Stage::DuccVqe, Stage::BareFci};
  c.ket = "file:/nonexistent/ket.vec";
  const PointResult r = run_point(c);
  CHECK(!r.ok());
  CHECK(r.find(Stage::Fci)->energy);
  CHECK(r.find(Stage::BareFci)->energy);
  const MethodResult* v = r.find(Stage::DuccVqe);
  CHECK(!v->energy);
  CHECK(v->error.rfind("ducc-vqe: ", 0) == 0);
  const auto j = r.to_json();
  CHECK(j["methods"][1]["error"].get<std::string>().find("ducc-vqe") != std::string::npos);

  RunConfig bad;
  bad.fcidump = "/nonexistent.fcidump";
  const PointResult rb = run_point(bad);
  CHECK(!rb.ok());
  CHECK(rb.error.rfind("setup: ", 0) == 0);
  CHECK(rb.methods.empty());

  RunConfig badspec = c;
  badspec.ket = "hf";
  badspec.active_orbitals = {7};
  CHECK(run_point(badspec).error.find("setup") == 0);
}

TEST_CASE("scan: one row equals run_point, rows stay in manifest order") {
  const fs::path out = scratch("scan");
  ScanManifest m;
  m.base.stages = {Stage::Fci, Stage::BareFci, Stage::DuccFci};
  m.base.n_active = 2;
  m.base.out_dir = out.string();
  m.jobs = 3;
  // largest first so a later row finishes first
  m.rows = {{"h6", fixtures::fcidump("h6_sto3g_r1.00")},
            {"h2", fixtures::fcidump("h2_sto3g_r0.74")},
            {"missing", "/nonexistent.fcidump"},
            {"h4", fixtures::fcidump("h4_sto3g_r1.50")}};
  const auto rows = run_scan(m);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].label == "h6");
  CHECK(rows[1].label == "h2");
  CHECK(rows[2].label == "missing");
  CHECK(!rows[2].error.empty());
  CHECK(rows[3].label == "h4");

  RunConfig single = m.base;
  single.label = "h4";
  single.fcidump = m.rows[3].second;
  single.out_dir = scratch("single").string();
  CHECK(run_point(single).to_json() == rows[3].to_json());

  const auto tsv = read_tsv(slurp(out / "table.tsv"));
  REQUIRE(tsv.size() == 5);
  CHECK(tsv[1][0] == "h6");
  CHECK(tsv[4][0] == "h4");
  const auto js = nlohmann::json::parse(slurp(out / "table.json"));
  REQUIRE(js.size() == 4);
  // full-precision columns carry the JSON values exactly
  const auto& hdr = tsv[0];
  for (std::size_t r : {0u, 1u, 3u}) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string col = to_string(m.base.stages[k]) + "_energy";
      const auto at = std::find(hdr.begin(), hdr.end(), col) - hdr.begin();
      CHECK(std::stod(tsv[r + 1][at]) == js[r]["methods"][k]["energy"].get<double>());
      const std::string pcol = to_string(m.base.stages[k]) + "_percent_display";
      const auto pat = std::find(hdr.begin(), hdr.end(), pcol) - hdr.begin();
      CHECK(std::stol(tsv[r + 1][pat]) ==
            std::lround(js[r]["methods"][k]["percent_correlation"].get<double>()));
    }
  }
  CHECK(tsv[3][1] == "NA");
  CHECK(fs::exists(out / "h6" / "result.json"));
}

TEST_CASE("N2 fixture pair reproduces both FCI anchors") {
  ScanManifest m;
  m.base.stages = {Stage::BareFci};
  m.rows = {{"1.00", fixtures::fcidump("n2_sto3g_r1.00")},
            {"2.50", fixtures::fcidump("n2_sto3g_r2.50")}};
  const auto rows = run_scan(m);
  REQUIRE(rows[0].ok());
  REQUIRE(rows[1].ok());
  const double e1 = *rows[0].find(Stage::BareFci)->energy;
  const double e2 = *rows[1].find(Stage::BareFci)->energy;
  CHECK(std::abs(e1 - -107.54896677) < 5e-4);
  CHECK(std::abs(e2 - -107.44040982) < 5e-4);
  CHECK(std::abs(e1 - fixtures::reference("n2_sto3g_r1.00").e_fci) < 1e-8);
  CHECK(std::abs(e2 - fixtures::reference("n2_sto3g_r2.50").e_fci) < 1e-8);
}
