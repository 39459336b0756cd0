#ifndef FERMIENT_FOCK_HPP
#define FERMIENT_FOCK_HPP

#include <bit>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace fermient {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kSupportTol = 1e-12;
inline constexpr int kMaxModes = 12;

enum class Parity { even, odd, mixed };

inline const char* parity_name(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "mixed";
  }
}

/// Pure state on the 2^n-dimensional Fock space of n fermionic modes.
///
/// Bit k of a basis bitmask denotes occupation of mode k+1, and the basis
/// state for a bitmask is the ordered product c†_{j1}...c†_{jm}|0> with
/// j1 < ... < jm. All operator signs follow from this convention.
struct FockState {
  int n = 0;
  Vec amp;

  FockState() = default;
  FockState(int n_modes, Vec amplitudes) : n(n_modes), amp(std::move(amplitudes)) {
    if (n < 1 || n > kMaxModes)
      throw std::invalid_argument("FockState: mode count out of range");
    if (amp.size() != (Eigen::Index{1} << n))
      throw std::invalid_argument("FockState: amplitude vector has wrong length");
  }

  Eigen::Index dim() const { return amp.size(); }
  double norm() const { return amp.norm(); }
};

inline void check_mode(const FockState& s, int j) {
  if (j < 1 || j > s.n) throw std::out_of_range("mode index out of range");
}

inline FockState vacuum_state(int n) {
  Vec a = Vec::Zero(Eigen::Index{1} << n);
  a[0] = 1.0;
  return FockState(n, std::move(a));
}

/// Basis state c†_{j1}...c†_{jm}|0> for the occupied set given by `mask`.
inline FockState basis_state(int n, std::uint32_t mask) {
  if (mask >= (std::uint32_t{1} << n))
    throw std::invalid_argument("basis_state: bitmask out of range");
  Vec a = Vec::Zero(Eigen::Index{1} << n);
  a[mask] = 1.0;
  return FockState(n, std::move(a));
}

inline Complex inner(const FockState& a, const FockState& b) {
  if (a.n != b.n) throw std::invalid_argument("inner: mode counts differ");
  return a.amp.dot(b.amp);
}

inline FockState normalized(const FockState& s) {
  double nrm = s.norm();
  if (nrm < kSupportTol) throw std::invalid_argument("normalized: zero state");
  return FockState(s.n, s.amp / nrm);
}

inline bool is_normalized(const FockState& s, double tol = kNormTol) {
  return std::abs(s.amp.squaredNorm() - 1.0) <= tol;
}

// (-1)^{number of occupied modes below mode j} for the fixed ordering.
inline double jordan_wigner_sign(std::uint32_t mask, std::uint32_t bit) {
  return (std::popcount(mask & (bit - 1)) & 1) ? -1.0 : 1.0;
}

/// c†_j acting on `s`. Components where mode j is occupied map to zero.
inline FockState apply_creation(const FockState& s, int j) {
  check_mode(s, j);
  const std::uint32_t bit = std::uint32_t{1} << (j - 1);
  Vec out = Vec::Zero(s.dim());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(s.dim()); ++m) {
    if (m & bit) continue;
    const Complex a = s.amp[m];
    if (a == Complex{}) continue;
    out[m | bit] += jordan_wigner_sign(m, bit) * a;
  }
  return FockState(s.n, std::move(out));
}

/// c_j acting on `s` (adjoint of apply_creation, same sign convention).
inline FockState apply_annihilation(const FockState& s, int j) {
  check_mode(s, j);
  const std::uint32_t bit = std::uint32_t{1} << (j - 1);
  Vec out = Vec::Zero(s.dim());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(s.dim()); ++m) {
    if (!(m & bit)) continue;
    const Complex a = s.amp[m];
    if (a == Complex{}) continue;
    out[m & ~bit] += jordan_wigner_sign(m, bit) * a;
  }
  return FockState(s.n, std::move(out));
}

/// Classifies the state by the popcount parity of its supported bitmasks.
inline Parity number_parity(const FockState& s, double tol = kSupportTol) {
  bool has_even = false, has_odd = false;
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(s.dim()); ++m) {
    if (std::abs(s.amp[m]) < tol) continue;
    (std::popcount(m) & 1 ? has_odd : has_even) = true;
  }
  if (has_even && has_odd) return Parity::mixed;
  return has_odd ? Parity::odd : Parity::even;
}

inline bool has_definite_parity(const FockState& s) {
  return number_parity(s) != Parity::mixed;
}

/// p_j = <c†_j c_j> on a normalized state.
inline double occupation_probability(const FockState& s, int j) {
  check_mode(s, j);
  if (!is_normalized(s)) throw std::invalid_argument("occupation_probability: state not normalized");
  const std::uint32_t bit = std::uint32_t{1} << (j - 1);
  double p = 0.0;
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(s.dim()); ++m)
    if (m & bit) p += std::norm(s.amp[m]);
  return p;
}

struct ConditionalComponents {
  double p_occupied = 0.0;
  std::optional<FockState> occupied;
  double p_empty = 0.0;
  std::optional<FockState> empty;
};

/// Splits |Psi> = sqrt(p_j)|Psi_j> + sqrt(p_jbar)|Psi_jbar> by the occupation
/// of mode j. Degenerate projections (p = 0) come back as null components.
inline ConditionalComponents conditional_components(const FockState& s, int j) {
  check_mode(s, j);
  if (!is_normalized(s)) throw std::invalid_argument("conditional_components: state not normalized");
  const std::uint32_t bit = std::uint32_t{1} << (j - 1);
  Vec occ = Vec::Zero(s.dim()), emp = Vec::Zero(s.dim());
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(s.dim()); ++m)
    ((m & bit) ? occ[m] : emp[m]) = s.amp[m];
  ConditionalComponents out;
  out.p_occupied = occ.squaredNorm();
  out.p_empty = emp.squaredNorm();
  if (out.p_occupied > kSupportTol) out.occupied = FockState(s.n, occ / std::sqrt(out.p_occupied));
  if (out.p_empty > kSupportTol) out.empty = FockState(s.n, emp / std::sqrt(out.p_empty));
  return out;
}

/// Diagonal of the number-parity operator P = exp[i pi N] in the Fock basis.
inline Eigen::VectorXd parity_diagonal(int n) {
  Eigen::VectorXd d(Eigen::Index{1} << n);
  for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(d.size()); ++m)
    d[m] = (std::popcount(m) & 1) ? -1.0 : 1.0;
  return d;
}

/// Density matrix on the full 2^n-dimensional Fock space, required to be
/// Hermitian, unit trace, positive semidefinite and parity-commuting.
struct MixedState {
  int n = 0;
  Mat rho;

  MixedState() = default;
  MixedState(int n_modes, Mat density) : n(n_modes), rho(std::move(density)) {
    if (n < 1 || n > kMaxModes)
      throw std::invalid_argument("MixedState: mode count out of range");
    if (rho.rows() != (Eigen::Index{1} << n) || rho.cols() != rho.rows())
      throw std::invalid_argument("MixedState: matrix has wrong dimension");
  }

  Eigen::Index dim() const { return rho.rows(); }
};

inline constexpr double kMixedTol = 1e-10;

inline void validate_mixed(const MixedState& ms, double tol = kMixedTol) {
  if ((ms.rho - ms.rho.adjoint()).norm() > tol)
    throw std::invalid_argument("MixedState: not Hermitian");
  if (std::abs(ms.rho.trace().real() - 1.0) > tol || std::abs(ms.rho.trace().imag()) > tol)
    throw std::invalid_argument("MixedState: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(ms.rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("MixedState: not positive semidefinite");
  const Eigen::VectorXd p = parity_diagonal(ms.n);
  Mat comm = p.asDiagonal() * ms.rho - ms.rho * p.asDiagonal();
  if (comm.norm() > tol)
    throw std::invalid_argument("MixedState: does not commute with number parity");
}

inline MixedState pure_density(const FockState& s) {
  return MixedState(s.n, s.amp * s.amp.adjoint());
}

}  // namespace fermient

#endif  // FERMIENT_FOCK_HPP
