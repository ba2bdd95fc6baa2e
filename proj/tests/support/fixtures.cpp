#include "fixtures.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace fixtures {

std::string path(const std::string& name) {
  return std::string(DVQE_TEST_DATA) + "/" + name;
}

std::string fcidump(const std::string& system) {
  return path(system + ".fcidump");
}

Reference reference(const std::string& system) {
  std::ifstream in(path("reference_energies.json"));
  if (!in) throw std::runtime_error("missing reference_energies.json");
  const auto j = nlohmann::json::parse(in);
  const auto& e = j.at(system);
  Reference r;
  r.e_hf = e.at("e_hf").get<double>();
  r.e_fci = e.at("e_fci").get<double>();
  r.e_mp2_corr = e.at("e_mp2_corr").get<double>();
  if (!e.at("e_ccsd").is_null()) r.e_ccsd = e.at("e_ccsd").get<double>();
  return r;
}

}  // namespace fixtures
