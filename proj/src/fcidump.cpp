#include "dvqe/fcidump.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dvqe/error.hpp"

namespace dvqe {
namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct Token {
  std::string text;
  std::size_t line;
};

long parse_int(const Token& t) {
  try {
    std::size_t used = 0;
    const long v = std::stol(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument(t.text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer in the header, got '" + t.text + "'", t.line);
  }
}

// the four index permutations that survive for spin-free non-real-symmetric
// operators: (pq|rs) = (rs|pq) = (qp|sr) = (sr|qp)
std::array<std::array<std::size_t, 4>, 4> four_fold(std::size_t p, std::size_t q,
                                                     std::size_t r, std::size_t s) {
  return {{{p, q, r, s}, {r, s, p, q}, {q, p, s, r}, {s, r, q, p}}};
}

std::array<std::array<std::size_t, 4>, 8> eight_fold(std::size_t p, std::size_t q,
                                                      std::size_t r, std::size_t s) {
  return {{{p, q, r, s},
           {q, p, r, s},
           {p, q, s, r},
           {q, p, s, r},
           {r, s, p, q},
           {s, r, p, q},
           {r, s, q, p},
           {s, r, q, p}}};
}

void store_eri(FcidumpData& d, std::size_t p, std::size_t q, std::size_t r,
               std::size_t s, double x) {
  if (d.permutational_symmetry == 8) {
    for (const auto& t : eight_fold(p, q, r, s)) d.eri(t[0], t[1], t[2], t[3]) = x;
  } else {
    for (const auto& t : four_fold(p, q, r, s)) d.eri(t[0], t[1], t[2], t[3]) = x;
  }
}

void write_line(std::ostream& out, double x, std::size_t i, std::size_t j,
                std::size_t k, std::size_t l) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%24.16e %4zu %4zu %4zu %4zu\n", x, i, j, k, l);
  out << buf;
}

}  // namespace

FcidumpData::FcidumpData(std::size_t n)
    : norb(n), orbsym(n, 1), one_electron(n * n, 0.0), two_electron(n * n * n * n, 0.0) {}

double FcidumpData::max_symmetry_violation() const {
  double m = 0.0;
  for (std::size_t p = 0; p < norb; ++p)
    for (std::size_t q = 0; q < norb; ++q) m = std::max(m, std::abs(h(p, q) - h(q, p)));
  for (std::size_t p = 0; p < norb; ++p)
    for (std::size_t q = 0; q < norb; ++q)
      for (std::size_t r = 0; r < norb; ++r)
        for (std::size_t s = 0; s < norb; ++s) {
          const double x = eri(p, q, r, s);
          if (permutational_symmetry == 8) {
            for (const auto& t : eight_fold(p, q, r, s))
              m = std::max(m, std::abs(x - eri(t[0], t[1], t[2], t[3])));
          } else {
            for (const auto& t : four_fold(p, q, r, s))
              m = std::max(m, std::abs(x - eri(t[0], t[1], t[2], t[3])));
          }
        }
  return m;
}

FcidumpData parse_fcidump(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Token> tokens;
  bool started = false, finished = false;
  while (!finished && std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    if (!started) {
      if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        throw ParseError("FCIDUMP must start with an &FCI namelist", lineno);
      }
      started = true;
      u = u.substr(pos + 4);
    }
    for (const char* end : {"&END", "$END"}) {
      const auto pos = u.find(end);
      if (pos != std::string::npos) {
        u = u.substr(0, pos);
        finished = true;
      }
    }
    const auto slash = u.find('/');
    if (slash != std::string::npos) {
      u = u.substr(0, slash);
      finished = true;
    }
    for (char& c : u)
      if (c == ',') c = ' ';
    // split "KEY=VALUE" into "KEY=" and "VALUE"
    std::string spaced;
    for (char c : u) {
      spaced += c;
      if (c == '=') spaced += ' ';
    }
    std::istringstream ss(spaced);
    std::string tok;
    while (ss >> tok) tokens.push_back({tok, lineno});
  }
  if (!started) throw ParseError("empty FCIDUMP", lineno);
  if (!finished) throw ParseError("unterminated &FCI namelist", lineno);

  std::map<std::string, std::vector<Token>> keys;
  std::map<std::string, std::size_t> key_line;
  std::string current;
  for (const Token& t : tokens) {
    if (t.text.back() == '=') {
      current = t.text.substr(0, t.text.size() - 1);
      if (current.empty()) throw ParseError("missing key before '='", t.line);
      keys[current];
      key_line[current] = t.line;
    } else if (current.empty()) {
      throw ParseError("value '" + t.text + "' without a key", t.line);
    } else {
      keys[current].push_back(t);
    }
  }
  auto scalar_key = [&](const std::string& k, bool required, long fallback) -> long {
    const auto it = keys.find(k);
    if (it == keys.end()) {
      if (required) throw ParseError("header lacks " + k, lineno);
      return fallback;
    }
    if (it->second.size() != 1) {
      throw ParseError(k + " needs exactly one value", key_line[k]);
    }
    return parse_int(it->second.front());
  };
  const long norb = scalar_key("NORB", true, 0);
  const long nelec = scalar_key("NELEC", true, 0);
  if (norb <= 0 || static_cast<std::size_t>(norb) > kMaxSpatialOrbitals) {
    throw ParseError("NORB out of range", key_line["NORB"]);
  }
  if (nelec < 0 || nelec > 2 * norb) {
    throw ParseError("NELEC exceeds 2*NORB", key_line["NELEC"]);
  }
  FcidumpData d(static_cast<std::size_t>(norb));
  d.nelec = static_cast<int>(nelec);
  d.ms2 = static_cast<int>(scalar_key("MS2", false, 0));
  d.isym = static_cast<int>(scalar_key("ISYM", false, 1));
  d.permutational_symmetry = static_cast<int>(scalar_key("PERMSYM", false, 8));
  if (d.permutational_symmetry != 8 && d.permutational_symmetry != 4) {
    throw ParseError("PERMSYM must be 4 or 8", key_line["PERMSYM"]);
  }
  if (std::abs(d.ms2) > d.nelec || (d.nelec + d.ms2) % 2 != 0) {
    throw ParseError("MS2 inconsistent with NELEC", key_line.count("MS2") ? key_line["MS2"] : lineno);
  }
  if (keys.count("ORBSYM")) {
    const auto& vals = keys["ORBSYM"];
    if (vals.size() != d.norb) {
      throw ParseError("ORBSYM lists " + std::to_string(vals.size()) +
                           " labels for " + std::to_string(d.norb) + " orbitals",
                       key_line["ORBSYM"]);
    }
    for (std::size_t i = 0; i < vals.size(); ++i) d.orbsym[i] = static_cast<int>(parse_int(vals[i]));
  }

  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == 'D' || c == 'd') c = 'E';
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double x;
    long i, j, k, l;
    if (!(ss >> x >> i >> j >> k >> l)) {
      throw ParseError("expected 'value i j k l'", lineno);
    }
    std::string rest;
    if (ss >> rest) throw ParseError("trailing text '" + rest + "'", lineno);
    for (long idx : {i, j, k, l}) {
      if (idx < 0 || idx > norb) {
        throw ParseError("orbital index " + std::to_string(idx) + " out of range", lineno);
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      d.core_energy = x;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      d.h(i - 1, j - 1) = x;
      d.h(j - 1, i - 1) = x;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      store_eri(d, i - 1, j - 1, k - 1, l - 1, x);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy records carry no Hamiltonian information
    } else {
      throw ParseError("unrecognized index pattern", lineno);
    }
  }
  return d;
}

FcidumpData read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open FCIDUMP '" + path + "'");
  return parse_fcidump(in);
}

void write_fcidump(const FcidumpData& d, std::ostream& out) {
  const std::size_t n = d.norb;
  out << " &FCI NORB=" << n << ",NELEC=" << d.nelec << ",MS2=" << d.ms2 << ",\n";
  out << "  ORBSYM=";
  for (std::size_t i = 0; i < n; ++i) out << d.orbsym[i] << ",";
  out << "\n  ISYM=" << d.isym << ",\n";
  if (d.permutational_symmetry != 8) {
    out << "  PERMSYM=" << d.permutational_symmetry << ",\n";
  }
  out << " &END\n";
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const std::array<std::size_t, 4> key{p, q, r, s};
          bool canonical = true;
          if (d.permutational_symmetry == 8) {
            for (const auto& t : eight_fold(p, q, r, s)) canonical = canonical && !(t < key);
          } else {
            for (const auto& t : four_fold(p, q, r, s)) canonical = canonical && !(t < key);
          }
          const double x = d.eri(p, q, r, s);
          if (canonical && x != 0.0) write_line(out, x, p + 1, q + 1, r + 1, s + 1);
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      if (d.h(p, q) != 0.0) write_line(out, d.h(p, q), p + 1, q + 1, 0, 0);
  write_line(out, d.core_energy, 0, 0, 0, 0);
}

void write_fcidump(const FcidumpData& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write FCIDUMP '" + path + "'");
  write_fcidump(d, out);
}

NormalOrderedOperator spatial_to_spinorbital(const FcidumpData& d) {
  const std::size_t m = d.norb, n = 2 * m;
  NormalOrderedOperator op(n);
  op.scalar() = d.core_energy;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (is_beta(p) == is_beta(q)) op.h(p, q) = d.h(spatial_of(p), spatial_of(q));
  auto& v = op.two_body();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double x = 0.0;
          if (is_beta(p) == is_beta(r) && is_beta(q) == is_beta(s))
            x += d.eri(spatial_of(p), spatial_of(r), spatial_of(q), spatial_of(s));
          if (is_beta(p) == is_beta(s) && is_beta(q) == is_beta(r))
            x -= d.eri(spatial_of(p), spatial_of(s), spatial_of(q), spatial_of(r));
          v[op.idx(p, q, r, s)] = x;
        }
  return op;
}

FcidumpData spinorbital_to_spatial(const NormalOrderedOperator& op, int nelec,
                                   int ms2, double tol) {
  if (!op.is_bare()) {
    throw IncompatibleOperator("FCIDUMP export expects a bare-vacuum operator");
  }
  if (op.n_spinorbitals() % 2 != 0) {
    throw NotSpatiallyRepresentable("odd spin-orbital count", 1.0);
  }
  const std::size_t m = op.n_spinorbitals() / 2;
  FcidumpData d(m);
  d.nelec = nelec;
  d.ms2 = ms2;
  d.core_energy = op.scalar();
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      d.h(p, q) = 0.5 * (op.h(2 * p, 2 * q) + op.h(2 * p + 1, 2 * q + 1));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s)
          d.eri(p, r, q, s) = 0.5 * (op.v(2 * p, 2 * q + 1, 2 * r, 2 * s + 1) +
                                     op.v(2 * p + 1, 2 * q, 2 * r + 1, 2 * s));
  double sym8 = 0.0;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s)
          for (const auto& t : eight_fold(p, q, r, s))
            sym8 = std::max(sym8, std::abs(d.eri(p, q, r, s) - d.eri(t[0], t[1], t[2], t[3])));
  d.permutational_symmetry = sym8 <= 1e-12 ? 8 : 4;

  const NormalOrderedOperator back = spatial_to_spinorbital(d);
  const double violation = back.max_abs_difference(op);
  if (violation > tol) {
    throw NotSpatiallyRepresentable("operator is not spin-free", violation);
  }
  return d;
}

void write_fcidump(const NormalOrderedOperator& op, int nelec, int ms2,
                   const std::string& path, double tol) {
  write_fcidump(spinorbital_to_spatial(op, nelec, ms2, tol), path);
}

}  // namespace dvqe
