#ifndef FERMIENT_IO_HPP
#define FERMIENT_IO_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fermient/fock.hpp"
#include "fermient/quartet.hpp"

namespace fermient {

/// Malformed file content (as opposed to a well-formed file describing an
/// invalid state, which surfaces as std::invalid_argument).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kStateFileHeader = "fermient-state 1";

/// Parsed contents of a state file. Exactly one of `pure` / `mixed` is set.
struct StateFile {
  int n = 0;
  Parity parity = Parity::mixed;
  std::optional<FockState> pure;
  std::optional<MixedState> mixed;
};

namespace detail {

inline Parity parse_parity(const std::string& word) {
  if (word == "even") return Parity::even;
  if (word == "odd") return Parity::odd;
  if (word == "mixed") return Parity::mixed;
  throw SchemaError("unknown parity label: " + word);
}

}  // namespace detail

/// Parses the versioned text format:
///
///   fermient-state 1
///   n <modes>
///   kind pure|mixed
///   parity even|odd|mixed
///   pure:  amp <bitmask> <re> <im>           (one line per nonzero amplitude)
///   mixed: dim <8|16>                        (8 = fixed-parity sector basis)
///          row <re> <im> ... (2*dim reals)   (dim rows, row-major)
///
/// Blank lines and lines starting with '#' are ignored. The decoded state is
/// validated against all module invariants before being returned.
inline StateFile parse_state(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kStateFileHeader)
    throw SchemaError("missing or unsupported header (expected 'fermient-state 1')");

  StateFile out;
  std::string kind;
  Eigen::Index dim = -1;
  Vec amp;
  Mat rho;
  Eigen::Index next_row = 0;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "n") {
      if (!(ls >> out.n) || out.n < 1 || out.n > kMaxModes)
        throw SchemaError("bad mode count");
    } else if (key == "kind") {
      if (!(ls >> kind) || (kind != "pure" && kind != "mixed"))
        throw SchemaError("kind must be pure or mixed");
    } else if (key == "parity") {
      std::string word;
      if (!(ls >> word)) throw SchemaError("missing parity label");
      out.parity = detail::parse_parity(word);
    } else if (key == "amp") {
      if (kind != "pure") throw SchemaError("amp line outside a pure state");
      if (out.n == 0) throw SchemaError("amp line before n");
      if (amp.size() == 0) amp = Vec::Zero(Eigen::Index{1} << out.n);
      std::uint64_t mask;
      double re, im;
      if (!(ls >> mask >> re >> im)) throw SchemaError("malformed amp line");
      if (mask >= static_cast<std::uint64_t>(amp.size()))
        throw SchemaError("amp bitmask out of range");
      amp[static_cast<Eigen::Index>(mask)] = Complex(re, im);
    } else if (key == "dim") {
      if (kind != "mixed") throw SchemaError("dim line outside a mixed state");
      if (out.n == 0) throw SchemaError("dim line before n");
      if (!(ls >> dim)) throw SchemaError("malformed dim line");
      const Eigen::Index full = Eigen::Index{1} << out.n;
      if (dim != full && !(out.n == 4 && dim == 8))
        throw SchemaError("dim must be 2^n, or 8 for an n=4 parity sector");
      rho = Mat::Zero(dim, dim);
    } else if (key == "row") {
      if (rho.size() == 0) throw SchemaError("row line before dim");
      if (next_row >= dim) throw SchemaError("too many matrix rows");
      for (Eigen::Index c = 0; c < dim; ++c) {
        double re, im;
        if (!(ls >> re >> im)) throw SchemaError("malformed matrix row");
        rho(next_row, c) = Complex(re, im);
      }
      ++next_row;
    } else {
      throw SchemaError("unknown directive: " + key);
    }
  }

  if (out.n == 0 || kind.empty()) throw SchemaError("incomplete file: n and kind required");
  if (kind == "pure") {
    if (amp.size() == 0) throw SchemaError("pure state without amplitudes");
    FockState s(out.n, std::move(amp));
    if (!is_normalized(s, 1e-9)) throw std::invalid_argument("state file: state not normalized");
    s = normalized(s);
    if (number_parity(s) != out.parity)
      throw std::invalid_argument("state file: declared parity does not match amplitudes");
    out.pure = std::move(s);
  } else {
    if (next_row != dim) throw SchemaError("matrix row count does not match dim");
    if (dim == 8) {
      if (out.parity == Parity::mixed)
        throw SchemaError("an 8-dim sector matrix needs parity even or odd");
      const Mat b = detail::sector_basis_matrix(out.parity);
      rho = b * rho * b.adjoint();
    }
    MixedState ms(out.n, std::move(rho));
    validate_mixed(ms);
    out.mixed = std::move(ms);
  }
  return out;
}

inline StateFile parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  return parse_state(in);
}

inline void write_state(std::ostream& os, const FockState& s) {
  os << kStateFileHeader << "\n"
     << "n " << s.n << "\n"
     << "kind pure\n"
     << "parity " << parity_name(number_parity(s)) << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index m = 0; m < s.dim(); ++m)
    if (std::abs(s.amp[m]) > 0)
      os << "amp " << m << " " << s.amp[m].real() << " " << s.amp[m].imag() << "\n";
}

inline void write_state(std::ostream& os, const MixedState& ms) {
  const Eigen::VectorXd p = parity_diagonal(ms.n);
  const double even_weight = 0.5 * (1.0 + (p.asDiagonal() * ms.rho).trace().real());
  Parity parity = Parity::mixed;
  if (even_weight > 1.0 - 1e-12)
    parity = Parity::even;
  else if (even_weight < 1e-12)
    parity = Parity::odd;
  os << kStateFileHeader << "\n"
     << "n " << ms.n << "\n"
     << "kind mixed\n"
     << "parity " << parity_name(parity) << "\n"
     << "dim " << ms.dim() << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index r = 0; r < ms.dim(); ++r) {
    os << "row";
    for (Eigen::Index c = 0; c < ms.dim(); ++c)
      os << " " << ms.rho(r, c).real() << " " << ms.rho(r, c).imag();
    os << "\n";
  }
}

template <typename State>
std::string state_to_string(const State& s) {
  std::ostringstream os;
  write_state(os, s);
  return os.str();
}

}  // namespace fermient

#endif  // FERMIENT_IO_HPP
