#include "dvqe/refvec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dvqe/error.hpp"

namespace dvqe {

ReferenceVectorFile parse_reference_vector(std::istream& in) {
  ReferenceVectorFile f;
  std::string line;
  std::size_t lineno = 0;
  long ndet = -1;
  bool have_n = false, have_e = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "NSPINORB" || first == "NELEC" || first == "NDET") {
      long value;
      if (!(ss >> value) || value < 0) throw ParseError("bad " + first + " value", lineno);
      if (first == "NSPINORB") {
        f.n_spinorbitals = static_cast<std::size_t>(value);
        have_n = true;
      } else if (first == "NELEC") {
        f.n_electrons = static_cast<int>(value);
        have_e = true;
      } else {
        ndet = value;
      }
      continue;
    }
    if (!have_n || !have_e) {
      throw ParseError("NSPINORB and NELEC must precede the determinants", lineno);
    }
    if (first.size() != f.n_spinorbitals) {
      throw FormatError("line " + std::to_string(lineno) + ": occupation string of length " +
                        std::to_string(first.size()) + ", expected " +
                        std::to_string(f.n_spinorbitals));
    }
    double c;
    if (!(ss >> c)) throw ParseError("missing coefficient", lineno);
    const Determinant d = Determinant::from_bitstring(first);
    if (d.n_electrons() != f.n_electrons) {
      throw FormatError("line " + std::to_string(lineno) + ": determinant has " +
                        std::to_string(d.n_electrons()) + " electrons, header says " +
                        std::to_string(f.n_electrons));
    }
    f.entries.emplace_back(d, c);
  }
  if (!have_n || !have_e) throw ParseError("missing NSPINORB/NELEC header", lineno);
  if (ndet >= 0 && static_cast<std::size_t>(ndet) != f.entries.size()) {
    throw FormatError("NDET is " + std::to_string(ndet) + " but " +
                      std::to_string(f.entries.size()) + " determinants were listed");
  }
  return f;
}

ReferenceVectorFile read_reference_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open reference vector '" + path + "'");
  return parse_reference_vector(in);
}

CIVector to_civector(const ReferenceVectorFile& file, SpacePtr space) {
  if (file.n_spinorbitals != space->n_spinorbitals()) {
    throw FormatError("vector has " + std::to_string(file.n_spinorbitals) +
                      " spin orbitals, space has " +
                      std::to_string(space->n_spinorbitals()));
  }
  if (file.n_electrons != space->n_alpha() + space->n_beta()) {
    throw DimensionMismatch("vector electron count differs from the space");
  }
  CIVector v = CIVector::zeros(space);
  for (const auto& [d, c] : file.entries) {
    if (!space->contains(d)) {
      throw DimensionMismatch("determinant " + d.to_bitstring(file.n_spinorbitals) +
                              " has the wrong spin projection for the space");
    }
    v.coefficients[static_cast<Eigen::Index>(space->index_of(d))] += c;
  }
  return v.normalized();
}

CIVector load_reference_vector(const std::string& path, SpacePtr space) {
  return to_civector(read_reference_vector(path), std::move(space));
}

void write_reference_vector(const CIVector& v, std::ostream& out, double threshold) {
  const std::size_t n = v.space->n_spinorbitals();
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < v.coefficients.size(); ++i)
    if (std::abs(v.coefficients[i]) > threshold) ++count;
  out << "NSPINORB " << n << "\nNELEC " << v.space->n_alpha() + v.space->n_beta()
      << "\nNDET " << count << "\n";
  char buf[48];
  for (std::size_t i = 0; i < v.space->size(); ++i) {
    const double c = v.coefficients[static_cast<Eigen::Index>(i)];
    if (std::abs(c) <= threshold) continue;
    std::snprintf(buf, sizeof buf, " %.16e\n", c);
    out << v.space->determinant(i).to_bitstring(n) << buf;
  }
}

void write_reference_vector(const CIVector& v, const std::string& path, double threshold) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  write_reference_vector(v, out, threshold);
}

}  // namespace dvqe
