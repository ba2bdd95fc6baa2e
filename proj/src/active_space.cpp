#include "dvqe/active_space.hpp"

#include <algorithm>
#include <string>

#include "dvqe/error.hpp"

namespace dvqe {

ActiveSpaceSpec ActiveSpaceSpec::lowest(std::size_t norb, int nelec,
                                        std::size_t n_active,
                                        std::size_t n_frozen_core) {
  if (n_frozen_core + n_active > norb) {
    throw ConfigError("frozen core plus active orbitals exceed " +
                      std::to_string(norb) + " orbitals");
  }
  ActiveSpaceSpec spec;
  spec.n_frozen_core = n_frozen_core;
  for (std::size_t i = 0; i < n_active; ++i) spec.active_orbitals.push_back(n_frozen_core + i);
  spec.n_active_electrons = nelec - 2 * static_cast<int>(n_frozen_core);
  // occupied orbitals that fall outside the window stay doubly occupied
  const std::size_t n_docc = static_cast<std::size_t>(std::max(0, nelec)) / 2;
  for (std::size_t k = n_frozen_core + n_active; k < n_docc && k < norb; ++k)
    spec.n_active_electrons -= 2;
  return spec;
}

bool ActiveSpaceSpec::is_active(std::size_t spatial) const {
  return std::find(active_orbitals.begin(), active_orbitals.end(), spatial) !=
         active_orbitals.end();
}

void ActiveSpaceSpec::validate(std::size_t norb, int nelec) const {
  if (n_frozen_core > norb) throw ConfigError("frozen core exceeds the orbital count");
  if (2 * static_cast<int>(n_frozen_core) > nelec) {
    throw ConfigError("frozen core holds more electrons than the system");
  }
  std::vector<std::size_t> seen = active_orbitals;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ConfigError("active orbital listed twice");
  }
  for (std::size_t a : active_orbitals) {
    if (a >= norb) throw ConfigError("active orbital " + std::to_string(a) + " out of range");
    if (a < n_frozen_core) {
      throw ConfigError("active orbital " + std::to_string(a) + " is frozen");
    }
  }
  if (n_active_electrons < 0 ||
      n_active_electrons > 2 * static_cast<int>(active_orbitals.size())) {
    throw ConfigError("active electron count does not fit the active orbitals");
  }
  if (active_orbitals.empty()) throw ConfigError("empty active space");
}

}  // namespace dvqe
