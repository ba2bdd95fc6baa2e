#pragma once

#include <cstddef>
#include <vector>

namespace dvqe {

/// Spatial-orbital partition: the lowest n_frozen_core orbitals are frozen,
/// active_orbitals (in the given order) span the active space.
struct ActiveSpaceSpec {
  std::size_t n_frozen_core = 0;
  std::vector<std::size_t> active_orbitals;
  int n_active_electrons = 0;

  /// Lowest orbitals after the frozen core, n_active of them.
  static ActiveSpaceSpec lowest(std::size_t norb, int nelec, std::size_t n_active,
                                std::size_t n_frozen_core = 0);
  static ActiveSpaceSpec all(std::size_t norb, int nelec) {
    return lowest(norb, nelec, norb, 0);
  }
  /// Throws ConfigError on overlap with the frozen core, repeated or
  /// out-of-range orbitals, or an inconsistent electron count.
  void validate(std::size_t norb, int nelec) const;
  bool is_active(std::size_t spatial) const;
};

}  // namespace dvqe
