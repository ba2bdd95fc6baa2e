#pragma once

#include <cstddef>
#include <functional>

namespace dvqe {

/// Worker count used by the CI kernels; 0 restores the hardware default.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Calls body(begin, end) on disjoint chunks of [0, n).
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace dvqe
