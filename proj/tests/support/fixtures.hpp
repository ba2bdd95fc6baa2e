#pragma once

#include <optional>
#include <string>

namespace fixtures {

std::string path(const std::string& name);
std::string fcidump(const std::string& system);

struct Reference {
  double e_hf = 0.0;
  double e_fci = 0.0;
  double e_mp2_corr = 0.0;
  std::optional<double> e_ccsd;
};

/// Independent reference energies computed alongside the FCIDUMP files.
Reference reference(const std::string& system);

}  // namespace fixtures
