#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "dvqe/ci_space.hpp"
#include "dvqe/operator.hpp"

namespace dvqe {

inline constexpr std::size_t kDefaultOracleCap = 20000;

/// Dense matrix of a bare-vacuum operator by pairwise Slater-Condon rules.
Eigen::MatrixXd to_fock_matrix(const NormalOrderedOperator& op,
                               const DeterminantSpace& space,
                               std::size_t cap = kDefaultOracleCap);

}  // namespace dvqe
