#ifndef FERMIENT_DENSITIES_HPP
#define FERMIENT_DENSITIES_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "fermient/bogoliubov_map.hpp"
#include "fermient/fock.hpp"
#include "fermient/linalg.hpp"

namespace fermient {

inline constexpr double kSpectrumTol = 1e-10;

/// Binary entropy h(p) = -p log2 p - (1-p) log2 (1-p), with the spectrum
/// clipped to [0,1] and 0 log 0 = 0.
inline double binary_entropy(double p) {
  p = std::clamp(p, 0.0, 1.0);
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

inline double shannon_term(double p) {  // -p log2 p on [0,1]
  p = std::clamp(p, 0.0, 1.0);
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

/// Concave f:[0,1]->R with f(0)=f(1)=0, applied eigenvalue-wise.
struct EntropyFunction {
  std::function<double(double)> f;

  explicit EntropyFunction(std::function<double(double)> fn) : f(std::move(fn)) {
    if (std::abs(f(0.0)) > 1e-12 || std::abs(f(1.0)) > 1e-12)
      throw std::invalid_argument("EntropyFunction: f(0)=f(1)=0 required");
  }

  static EntropyFunction von_neumann() {
    return EntropyFunction([](double p) { return shannon_term(p); });
  }
  static EntropyFunction quadratic() {
    return EntropyFunction([](double p) {
      p = std::clamp(p, 0.0, 1.0);
      return 2.0 * p * (1.0 - p);
    });
  }
};

enum class SpectrumVariant { diagonal, sp, qsp };

namespace detail {

inline void require_pure_input(const FockState& s) {
  if (!is_normalized(s)) throw std::invalid_argument("state not normalized");
  if (number_parity(s) == Parity::mixed)
    throw std::invalid_argument("state must have definite number parity");
}

}  // namespace detail

/// rho^sp_{ij} = <c†_j c_i>.
inline Mat sp_matrix(const FockState& s) {
  detail::require_pure_input(s);
  Mat rho(s.n, s.n);
  std::vector<FockState> lowered;
  lowered.reserve(s.n);
  for (int j = 1; j <= s.n; ++j) lowered.push_back(apply_annihilation(s, j));
  for (int j = 0; j < s.n; ++j)
    for (int i = 0; i < s.n; ++i)
      rho(i, j) = inner(lowered[j], lowered[i]);  // <c_j psi | c_i psi>
  return rho;
}

inline Mat sp_matrix(const MixedState& ms) {
  validate_mixed(ms);
  Mat rho(ms.n, ms.n);
  const Eigen::Index dim = ms.dim();
  for (int j = 1; j <= ms.n; ++j)
    for (int i = 1; i <= ms.n; ++i) {
      // tr(rho c†_j c_i) accumulated column by column
      Complex acc = 0;
      for (Eigen::Index col = 0; col < dim; ++col) {
        FockState e = basis_state(ms.n, static_cast<std::uint32_t>(col));
        FockState op = apply_creation(apply_annihilation(e, i), j);
        acc += (ms.rho.row(col) * op.amp)(0);
      }
      rho(i - 1, j - 1) = acc;
    }
  return rho;
}

/// kappa_{ij} = <c_j c_i>.
inline Mat pairing_tensor(const FockState& s) {
  detail::require_pure_input(s);
  Mat kappa(s.n, s.n);
  for (int i = 1; i <= s.n; ++i) {
    const FockState ci = apply_annihilation(s, i);
    for (int j = 1; j <= s.n; ++j)
      kappa(i - 1, j - 1) = inner(s, apply_annihilation(ci, j));
  }
  return kappa;
}

inline Mat pairing_tensor(const MixedState& ms) {
  validate_mixed(ms);
  Mat kappa(ms.n, ms.n);
  const Eigen::Index dim = ms.dim();
  for (int j = 1; j <= ms.n; ++j)
    for (int i = 1; i <= ms.n; ++i) {
      Complex acc = 0;
      for (Eigen::Index col = 0; col < dim; ++col) {
        FockState e = basis_state(ms.n, static_cast<std::uint32_t>(col));
        FockState op = apply_annihilation(apply_annihilation(e, i), j);
        acc += (ms.rho.row(col) * op.amp)(0);
      }
      kappa(i - 1, j - 1) = acc;
    }
  return kappa;
}

inline void check_sp_invariants(const Mat& rho, double tol = kSpectrumTol) {
  if (!is_hermitian(rho, tol)) throw std::invalid_argument("sp matrix not Hermitian");
  Eigen::VectorXd ev = eigenvalues_descending(rho);
  if (ev.maxCoeff() > 1.0 + tol || ev.minCoeff() < -tol)
    throw std::invalid_argument("sp matrix eigenvalues outside [0,1]");
}

inline void check_qsp_invariants(const Mat& q, double tol = kSpectrumTol) {
  const Eigen::Index n2 = q.rows();
  if (!is_hermitian(q, tol)) throw std::invalid_argument("qsp matrix not Hermitian");
  Eigen::VectorXd ev = eigenvalues_descending(q);
  if (ev.maxCoeff() > 1.0 + tol || ev.minCoeff() < -tol)
    throw std::invalid_argument("qsp matrix eigenvalues outside [0,1]");
  for (Eigen::Index k = 0; k < n2 / 2; ++k)
    if (std::abs(ev[k] + ev[n2 - 1 - k] - 1.0) > 1e-9)
      throw std::invalid_argument("qsp spectrum not closed under lambda -> 1-lambda");
}

inline Mat assemble_qsp(const Mat& rho_sp, const Mat& kappa) {
  const Eigen::Index n = rho_sp.rows();
  Mat q(2 * n, 2 * n);
  q.topLeftCorner(n, n) = rho_sp;
  q.topRightCorner(n, n) = kappa;
  q.bottomLeftCorner(n, n) = -kappa.conjugate();
  q.bottomRightCorner(n, n) = Mat::Identity(n, n) - rho_sp.conjugate();
  return q;
}

/// Extended 2n x 2n density matrix [[rho^sp, kappa], [-conj(kappa), 1-conj(rho^sp)]].
inline Mat qsp_matrix(const FockState& s) {
  Mat q = assemble_qsp(sp_matrix(s), pairing_tensor(s));
  check_qsp_invariants(q);
  return q;
}

inline Mat qsp_matrix_mixed(const MixedState& ms) {
  Mat q = assemble_qsp(sp_matrix(ms), pairing_tensor(ms));
  check_qsp_invariants(q);
  return q;
}

/// S_c = sum_j h(p_j) in the given quasiparticle basis (default: the
/// computational basis).
inline double entropy_sc(const FockState& s, const std::optional<BogoliubovMap>& basis = std::nullopt) {
  detail::require_pure_input(s);
  if (!basis) {
    double sum = 0.0;
    for (int j = 1; j <= s.n; ++j) sum += binary_entropy(occupation_probability(s, j));
    return sum;
  }
  require_valid(*basis);
  const Mat q = qsp_matrix(s);
  const Mat w = w_matrix(*basis);
  const Mat diag = w.adjoint() * q * w;
  double sum = 0.0;
  for (int nu = 0; nu < s.n; ++nu) sum += binary_entropy(diag(nu, nu).real());
  return sum;
}

inline double entropy_sp(const Mat& rho_sp) {
  check_sp_invariants(rho_sp);
  const Eigen::VectorXd ev = eigenvalues_descending(rho_sp);
  double sum = 0.0;
  for (double p : ev) sum += binary_entropy(p);
  return sum;
}

/// S^sp = tr h(rho^sp), the minimum of S_c over all sp bases.
inline double entropy_sp(const FockState& s) { return entropy_sp(sp_matrix(s)); }

/// Paired eigenvalues f_nu of a qsp matrix, one per mode, taken as the
/// smaller of each (lambda, 1-lambda) pair and sorted descending.
inline Eigen::VectorXd qsp_pair_spectrum(const Mat& q) {
  check_qsp_invariants(q);
  const Eigen::Index n = q.rows() / 2;
  const Eigen::VectorXd ev = eigenvalues_descending(q);
  Eigen::VectorXd f(n);
  for (Eigen::Index k = 0; k < n; ++k) f[k] = std::min(ev[k], ev[2 * n - 1 - k]);
  std::sort(f.data(), f.data() + n, std::greater<>());
  return f;
}

inline double entropy_qsp(const Mat& q) {
  const Eigen::VectorXd f = qsp_pair_spectrum(q);
  double sum = 0.0;
  for (double x : f) sum += binary_entropy(x);
  return sum;
}

/// S^qsp = -tr' rho^qsp log2 rho^qsp over the n paired eigenvalues, the
/// minimum of S_c over all quasiparticle bases.
inline double entropy_qsp(const FockState& s) { return entropy_qsp(qsp_matrix(s)); }

/// Quadratic (linear) entropy 4 tr[rho^sp (1 - rho^sp) - kappa† kappa],
/// cross-checked against 4 sum_nu f_nu (1 - f_nu).
inline double entropy_quadratic(const Mat& rho_sp, const Mat& kappa) {
  const Eigen::Index n = rho_sp.rows();
  const double by_trace =
      4.0 * (rho_sp * (Mat::Identity(n, n) - rho_sp) - kappa.adjoint() * kappa).trace().real();
  const Eigen::VectorXd f = qsp_pair_spectrum(assemble_qsp(rho_sp, kappa));
  double by_eigs = 0.0;
  for (double x : f) by_eigs += 4.0 * x * (1.0 - x);
  if (std::abs(by_trace - by_eigs) > 1e-10)
    throw std::runtime_error("entropy_quadratic: trace and eigenvalue formulas disagree");
  return by_trace;
}

inline double entropy_quadratic(const FockState& s) {
  return entropy_quadratic(sp_matrix(s), pairing_tensor(s));
}

inline double entropy_quadratic(const MixedState& ms) {
  return entropy_quadratic(sp_matrix(ms), pairing_tensor(ms));
}

/// S_f of the extended diagonal, extended sp, or qsp spectrum (all three live
/// on the 2n-dimensional extended space, so the chain
/// S_f(diagonal) >= S_f(sp) >= S_f(qsp) holds).
inline double entropy_generalized(const FockState& s, const EntropyFunction& fn,
                                  SpectrumVariant variant) {
  const Mat rho = sp_matrix(s);
  double sum = 0.0;
  switch (variant) {
    case SpectrumVariant::diagonal:
      for (int j = 0; j < s.n; ++j) {
        const double p = rho(j, j).real();
        sum += fn.f(p) + fn.f(1.0 - p);
      }
      return sum;
    case SpectrumVariant::sp: {
      const Eigen::VectorXd ev = eigenvalues_descending(rho);
      for (double p : ev) sum += fn.f(p) + fn.f(1.0 - p);
      return sum;
    }
    case SpectrumVariant::qsp: {
      const Eigen::VectorXd ev = eigenvalues_descending(qsp_matrix(s));
      for (double p : ev) sum += fn.f(p);
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

struct MajorizationChain {
  bool holds = false;
  Eigen::VectorXd diagonal_prefix;  // extended diagonal spectrum
  Eigen::VectorXd sp_prefix;        // extended sp spectrum
  Eigen::VectorXd qsp_prefix;       // qsp spectrum
};

/// Verifies rho~^sp_d < rho~^sp < rho^qsp (majorization) via prefix sums of
/// decreasingly sorted eigenvalues.
inline MajorizationChain majorization_chain(const FockState& s, double slack = 1e-10) {
  const Mat rho = sp_matrix(s);
  const Mat q = qsp_matrix(s);
  Eigen::VectorXd diag_spec(2 * s.n), sp_spec(2 * s.n);
  const Eigen::VectorXd ev = eigenvalues_descending(rho);
  for (int j = 0; j < s.n; ++j) {
    diag_spec[j] = rho(j, j).real();
    diag_spec[s.n + j] = 1.0 - rho(j, j).real();
    sp_spec[j] = ev[j];
    sp_spec[s.n + j] = 1.0 - ev[j];
  }
  const Eigen::VectorXd qsp_spec = eigenvalues_descending(q);
  MajorizationChain out;
  out.diagonal_prefix = prefix_sums_descending(diag_spec);
  out.sp_prefix = prefix_sums_descending(sp_spec);
  out.qsp_prefix = prefix_sums_descending(qsp_spec);
  out.holds = majorizes(sp_spec, diag_spec, slack) && majorizes(qsp_spec, sp_spec, slack);
  return out;
}

}  // namespace fermient

#endif  // FERMIENT_DENSITIES_HPP
