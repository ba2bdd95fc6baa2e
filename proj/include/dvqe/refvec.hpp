#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dvqe/ci_space.hpp"

namespace dvqe {

/// Plain-text CI vector: header lines NSPINORB, NELEC, NDET followed by one
/// "occupation-string coefficient" pair per line. Character k of the string
/// is the occupation of interleaved spin orbital k.
struct ReferenceVectorFile {
  std::size_t n_spinorbitals = 0;
  int n_electrons = 0;
  std::vector<std::pair<Determinant, double>> entries;
};

ReferenceVectorFile parse_reference_vector(std::istream& in);
ReferenceVectorFile read_reference_vector(const std::string& path);

/// Normalized vector over space; determinants absent from the file are zero.
CIVector to_civector(const ReferenceVectorFile& file, SpacePtr space);
CIVector load_reference_vector(const std::string& path, SpacePtr space);

/// Entries with |c| <= threshold are skipped.
void write_reference_vector(const CIVector& v, std::ostream& out,
                            double threshold = 0.0);
void write_reference_vector(const CIVector& v, const std::string& path,
                            double threshold = 0.0);

}  // namespace dvqe
