#ifndef FERMIENT_QUARTET_HPP
#define FERMIENT_QUARTET_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermient/bogoliubov.hpp"
#include "fermient/densities.hpp"
#include "fermient/fock.hpp"
#include "fermient/linalg.hpp"
#include "fermient/optimize.hpp"

namespace fermient {

/// Coefficient pair (alpha, beta) of an n = 4 definite-parity pure state.
///
/// Odd parity:  |Psi> = sum_i alpha_i c†_i|0> + conj(beta_i) c_i|0bar>.
/// Even parity: |Psi> = alpha_1|0> - conj(beta_1)|0bar>
///              + sum_{j>=2} alpha_j c†_j c†_1|0> + conj(beta_j) c_1 c_j|0bar>.
/// The even-sector sign on the |0bar> term lives entirely in from_fock /
/// to_fock; everything downstream is parity-agnostic.
struct QuartetState {
  Parity parity = Parity::odd;
  Eigen::Vector4cd alpha = Eigen::Vector4cd::Zero();
  Eigen::Vector4cd beta = Eigen::Vector4cd::Zero();
};

namespace detail {

inline FockState scaled(FockState s, Complex c) {
  s.amp *= c;
  return s;
}

/// The eight basis states carrying the (alpha_1..alpha_4, conj(beta_1)..conj(beta_4))
/// coefficients, built directly from the fermionic operators.
inline std::vector<FockState> quartet_basis(Parity parity) {
  if (parity == Parity::mixed) throw std::invalid_argument("quartet_basis: definite parity required");
  const FockState vac = vacuum_state(4);
  const FockState full = basis_state(4, 0b1111);
  std::vector<FockState> b;
  b.reserve(8);
  if (parity == Parity::odd) {
    for (int i = 1; i <= 4; ++i) b.push_back(apply_creation(vac, i));        // c†_i|0>
    for (int i = 1; i <= 4; ++i) b.push_back(apply_annihilation(full, i));   // c_i|0bar>
  } else {
    b.push_back(vac);                                                        // |0>
    for (int j = 2; j <= 4; ++j)
      b.push_back(apply_creation(apply_creation(vac, 1), j));                // c†_j c†_1|0>
    b.push_back(scaled(full, -1.0));                                         // -|0bar>
    for (int j = 2; j <= 4; ++j)
      b.push_back(apply_annihilation(apply_annihilation(full, j), 1));       // c_1 c_j|0bar>
  }
  return b;
}

inline void require_quartet_input(const FockState& s) {
  if (s.n != 4) throw std::invalid_argument("quartet: n = 4 required");
  require_pure_input(s);
}

}  // namespace detail

inline QuartetState from_fock(const FockState& s) {
  detail::require_quartet_input(s);
  const Parity parity = number_parity(s);
  const auto basis = detail::quartet_basis(parity);
  QuartetState q;
  q.parity = parity;
  Vec reconstructed = Vec::Zero(16);
  for (int k = 0; k < 8; ++k) {
    const Complex c = inner(basis[static_cast<std::size_t>(k)], s);
    reconstructed += c * basis[static_cast<std::size_t>(k)].amp;
    if (k < 4)
      q.alpha[k] = c;
    else
      q.beta[k - 4] = std::conj(c);
  }
  if ((reconstructed - s.amp).norm() > 1e-10)
    throw std::invalid_argument("from_fock: state outside the quartet basis span");
  return q;
}

inline FockState to_fock(const QuartetState& q) {
  const auto basis = detail::quartet_basis(q.parity);
  Vec amp = Vec::Zero(16);
  for (int k = 0; k < 4; ++k) {
    amp += q.alpha[k] * basis[static_cast<std::size_t>(k)].amp;
    amp += std::conj(q.beta[k]) * basis[static_cast<std::size_t>(k + 4)].amp;
  }
  return FockState(4, std::move(amp));
}

/// Pure-state fermionic concurrence C = 2 |beta† alpha|.
inline double pure_concurrence(const QuartetState& q) {
  return 2.0 * std::abs(q.beta.dot(q.alpha));
}

inline double pure_concurrence(const FockState& s) { return pure_concurrence(from_fock(s)); }

/// (f+, f-) = (1 ± sqrt(1 - C^2)) / 2, the four-fold degenerate eigenvalues
/// of rho^qsp.
inline std::pair<double, double> qsp_eigenvalues_analytic(const QuartetState& q) {
  const double c = std::min(1.0, pure_concurrence(q));
  const double root = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {(1.0 + root) / 2.0, (1.0 - root) / 2.0};
}

/// S^qsp = 4 h(f+).
inline double entropy_qsp_analytic(const QuartetState& q) {
  return 4.0 * binary_entropy(qsp_eigenvalues_analytic(q).first);
}

/// Dual state |Psi~> = T |Psi>*, with conjugation in the computational Fock
/// basis and T the block swap of the (alpha, beta) coefficient groups.
/// Satisfies |<Psi~|Psi>| = C(|Psi>).
inline FockState dual_state(const FockState& s) {
  // The special basis is real in the computational basis, so conjugation
  // followed by the block swap T reduces to exchanging alpha and beta.
  QuartetState q = from_fock(s);
  std::swap(q.alpha, q.beta);
  return to_fock(q);
}

// ---------------------------------------------------------------------------
// normal form

struct NormalForm {
  double alpha = 0.0;     // real, >= 0
  Complex beta = 0.0;     // |alpha|^2 = f+, |beta|^2 = f-
  BogoliubovMap map;      // quasiparticle basis realizing the two-term form
};

namespace detail {

/// Quasiparticle creator a†_nu applied to a state.
inline FockState apply_quasiparticle_creator(const BogoliubovMap& m, int nu, const FockState& s) {
  Vec out = Vec::Zero(s.dim());
  for (int j = 1; j <= s.n; ++j) {
    const Complex u = m.U(j - 1, nu - 1);
    const Complex v = std::conj(m.V(j - 1, nu - 1));
    if (u != Complex{}) out += u * apply_creation(s, j).amp;
    if (v != Complex{}) out += v * apply_annihilation(s, j).amp;
  }
  return FockState(s.n, std::move(out));
}

/// Vacuum of the quasiparticle operators found as the null space of the
/// stacked a_nu actions; works whether or not det U vanishes.
inline FockState quasiparticle_vacuum_nullspace(const BogoliubovMap& m) {
  require_valid(m);
  const int n = m.n();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat stack(n * dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const FockState e = basis_state(n, static_cast<std::uint32_t>(col));
    for (int nu = 1; nu <= n; ++nu)
      stack.block((nu - 1) * dim, col, dim, 1) = apply_quasiparticle_annihilator(m, nu, e).amp;
  }
  Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeThinV);
  const Eigen::Index last = svd.matrixV().cols() - 1;
  if (svd.singularValues()[last] > 1e-8)
    throw std::runtime_error("quasiparticle vacuum: no null vector found");
  return canonical_phase(FockState(n, svd.matrixV().col(last)));
}

/// All 2^n quasiparticle Fock basis states a†_{j1}...a†_{jm}|0_a>, j ascending.
inline std::vector<FockState> quasiparticle_fock_basis(const BogoliubovMap& m) {
  const int n = m.n();
  const FockState vac = quasiparticle_vacuum_nullspace(m);
  std::vector<FockState> basis(std::size_t{1} << n, vac);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    FockState s = vac;
    for (int j = n; j >= 1; --j)
      if (mask & (std::uint32_t{1} << (j - 1))) s = apply_quasiparticle_creator(m, j, s);
    basis[mask] = s;
  }
  return basis;
}

/// State re-expressed in the quasiparticle Fock basis of `m`.
inline FockState state_in_quasiparticle_basis(const FockState& s, const BogoliubovMap& m) {
  const auto basis = quasiparticle_fock_basis(m);
  Vec amp(s.dim());
  for (Eigen::Index k = 0; k < s.dim(); ++k) amp[k] = inner(basis[static_cast<std::size_t>(k)], s);
  return FockState(s.n, std::move(amp));
}

/// Map composed with a particle-hole swap on the given a-modes.
inline BogoliubovMap swap_modes_particle_hole(const BogoliubovMap& m, const std::vector<int>& modes) {
  const int n = m.n();
  Mat s = Mat::Identity(2 * n, 2 * n);
  for (int j : modes) {
    s(j - 1, j - 1) = 0;
    s(n + j - 1, n + j - 1) = 0;
    s(j - 1, n + j - 1) = 1;
    s(n + j - 1, j - 1) = 1;
  }
  return map_from_w(w_matrix(m) * s);
}

/// Map composed with an sp rotation R of the a-modes (b = R† a).
inline BogoliubovMap rotate_modes(const BogoliubovMap& m, const Mat& R) {
  const int n = m.n();
  Mat blk = Mat::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = R;
  blk.bottomRightCorner(n, n) = R.conjugate();
  return map_from_w(w_matrix(m) * blk);
}

}  // namespace detail

/// Reduces an n = 4 state to its two-term normal form
/// (odd: alpha a†_1|0_a> + conj(beta) a_1|0bar_a>; even: alpha|0_a> - conj(beta)|0bar_a>)
/// with alpha real >= 0 and |alpha| >= |beta|.
inline NormalForm normal_form(const FockState& state) {
  detail::require_quartet_input(state);
  const double c_value = pure_concurrence(state);
  BogoliubovMap map = diagonalize_qsp(qsp_matrix(state)).map;

  QuartetState qa;
  for (int attempt = 0; attempt < 6; ++attempt) {
    qa = from_fock(detail::state_in_quasiparticle_basis(state, map));
    Eigen::Vector4d weight = (qa.alpha.cwiseAbs2() + qa.beta.cwiseAbs2()).real();
    int m = 0;
    weight.maxCoeff(&m);

    if (c_value > 1.0 - 1e-9 && weight[m] < 1.0 - 1e-9) {
      // degenerate case: any Bogoliubov basis diagonalizes; pick e_1 along alpha
      Eigen::Vector4cd a = qa.alpha.normalized();
      Eigen::HouseholderQR<Mat> qr{Mat(a)};
      Mat R = qr.householderQ();
      // make column 1 exactly the alpha direction (QR fixes it up to phase)
      R.col(0) *= (R.col(0).adjoint() * a)(0);
      map = detail::rotate_modes(map, R);
      continue;
    }
    if (m != 0) {
      if (qa.parity == Parity::odd) {
        Mat perm = Mat::Identity(4, 4);
        perm.col(0).swap(perm.col(m));
        map = detail::rotate_modes(map, perm);
      } else {
        map = detail::swap_modes_particle_hole(map, {1, m + 1});
      }
      continue;
    }
    if (std::abs(qa.alpha[0]) < std::abs(qa.beta[0]) - 1e-12) {
      map = detail::swap_modes_particle_hole(map, {1, 2, 3, 4});
      continue;
    }
    break;
  }

  const double off = std::sqrt(std::max(
      0.0, 1.0 - std::norm(qa.alpha[0]) - std::norm(qa.beta[0])));
  if (off > 1e-7) throw std::runtime_error("normal_form: reduction did not converge");

  NormalForm nf;
  nf.map = map;
  const Complex a0 = qa.alpha[0];
  const Complex b0 = qa.beta[0];
  if (std::abs(a0) > 1e-12) {
    const Complex phase = std::abs(a0) / a0;
    nf.alpha = std::abs(a0);
    nf.beta = std::conj(std::conj(b0) * phase);  // rotate the state's global phase
  } else {
    nf.alpha = 0.0;
    nf.beta = b0;
  }
  return nf;
}

// ---------------------------------------------------------------------------
// mixed states

struct ConcurrenceReport {
  Eigen::VectorXd d;       // descending, one per retained eigenvector
  double concurrence = 0;  // max(d1 - sum_{k>=2} d_k, 0)
  bool separable = true;
  std::optional<std::vector<std::pair<double, QuartetState>>> decomposition;
};

inline constexpr double kRankTol = 1e-10;

namespace detail {

struct SpectralData {
  Parity parity = Parity::odd;
  std::vector<double> lambda;          // descending, > kRankTol
  std::vector<QuartetState> eigenstates;
  Mat coeff;                           // 8 x r, column k = (alpha_k; conj(beta_k))
  Mat cmat;                            // r x r complex symmetric concurrence matrix
  TakagiFactorization tf;              // cmat = V diag(d) V^T
};

inline Mat sector_basis_matrix(Parity parity) {
  const auto basis = quartet_basis(parity);
  Mat b(16, 8);
  for (int k = 0; k < 8; ++k) b.col(k) = basis[static_cast<std::size_t>(k)].amp;
  return b;
}

inline SpectralData spectral_data(const MixedState& ms) {
  if (ms.n != 4) throw std::invalid_argument("quartet mixed state: n = 4 required");
  validate_mixed(ms);
  const Eigen::VectorXd pdiag = parity_diagonal(4);
  const double p_even = 0.5 * (ms.rho.trace().real() + (pdiag.asDiagonal() * ms.rho).trace().real());
  const double p_odd = 1.0 - p_even;
  if (p_even > 1e-10 && p_odd > 1e-10)
    throw std::invalid_argument("mixed parity sectors: use parity_split first");

  SpectralData sd;
  sd.parity = p_odd > p_even ? Parity::odd : Parity::even;
  Eigen::SelfAdjointEigenSolver<Mat> es(ms.rho);
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()[k];
    if (lam <= kRankTol) continue;
    FockState psi(4, es.eigenvectors().col(k));
    // scrub numerical leakage into the opposite sector
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      const bool odd = std::popcount(mask) & 1;
      if (odd != (sd.parity == Parity::odd)) psi.amp[mask] = 0.0;
    }
    sd.lambda.push_back(lam);
    sd.eigenstates.push_back(from_fock(normalized(psi)));
  }
  const auto r = static_cast<Eigen::Index>(sd.lambda.size());
  if (r == 0) throw std::invalid_argument("mixed state has no support");

  sd.coeff.resize(8, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    sd.coeff.col(k).head(4) = sd.eigenstates[static_cast<std::size_t>(k)].alpha;
    sd.coeff.col(k).tail(4) = sd.eigenstates[static_cast<std::size_t>(k)].beta.conjugate();
  }

  sd.cmat.resize(r, r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index l = 0; l < r; ++l) {
      const auto& qk = sd.eigenstates[static_cast<std::size_t>(k)];
      const auto& ql = sd.eigenstates[static_cast<std::size_t>(l)];
      sd.cmat(k, l) = std::sqrt(sd.lambda[static_cast<std::size_t>(k)] *
                                sd.lambda[static_cast<std::size_t>(l)]) *
                      (ql.beta.dot(qk.alpha) + qk.beta.dot(ql.alpha));
    }
  if ((sd.cmat - sd.cmat.transpose()).norm() > 1e-9)
    throw std::runtime_error("concurrence matrix not complex symmetric");
  sd.tf = takagi(sd.cmat);
  return sd;
}

/// d_k recomputed from R = sqrt(rho^{1/2} T rho* T rho^{1/2}) in the special
/// 8-dim sector basis where T = [[0, I], [I, 0]].
inline Eigen::VectorXd r_matrix_spectrum(const MixedState& ms, Parity parity) {
  const Mat b = sector_basis_matrix(parity);
  const Mat rho8 = b.adjoint() * ms.rho * b;
  Mat t = Mat::Zero(8, 8);
  t.topRightCorner(4, 4) = Mat::Identity(4, 4);
  t.bottomLeftCorner(4, 4) = Mat::Identity(4, 4);
  const Mat sq = hermitian_sqrt(rho8);
  const Mat r = hermitian_sqrt(sq * t * rho8.conjugate() * t * sq);
  return eigenvalues_descending(r);
}

}  // namespace detail

/// Closed-form mixed-state concurrence C(rho) = max(d_1 - sum_{k>=2} d_k, 0),
/// with the d_k computed both from the Takagi values of the concurrence
/// matrix and from the R-matrix; the two must agree.
inline ConcurrenceReport mixed_concurrence(const MixedState& ms) {
  const auto sd = detail::spectral_data(ms);
  ConcurrenceReport rep;
  rep.d = sd.tf.d;
  const double tail = rep.d.size() > 1 ? rep.d.tail(rep.d.size() - 1).sum() : 0.0;
  rep.concurrence = std::max(rep.d[0] - tail, 0.0);
  rep.separable = rep.concurrence <= 0.0;

  const Eigen::VectorXd dr = detail::r_matrix_spectrum(ms, sd.parity);
  for (Eigen::Index k = 0; k < rep.d.size(); ++k)
    if (std::abs(rep.d[k] - dr[k]) > 1e-8)
      throw std::runtime_error("mixed_concurrence: Takagi and R-matrix spectra disagree");
  for (Eigen::Index k = rep.d.size(); k < dr.size(); ++k)
    if (std::abs(dr[k]) > 1e-8)
      throw std::runtime_error("mixed_concurrence: R-matrix has extra nonzero singular values");
  return rep;
}

namespace detail {

// mu sign columns: rows of e^{i mu pi} for r' = 2, 4 (Sylvester) and the
// explicit 8-row pattern for 5 <= r <= 8.
inline Eigen::MatrixXd sign_pattern(int rprime) {
  if (rprime == 2) {
    Eigen::MatrixXd s(2, 2);
    s << 1, 1, 1, -1;
    return s;
  }
  if (rprime == 4) {
    Eigen::MatrixXd s(4, 4);
    s << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
    return s;
  }
  Eigen::MatrixXd s(8, 8);
  const int cols[7][8] = {{0, 0, 0, 0, 1, 1, 1, 1}, {0, 0, 1, 1, 0, 0, 1, 1},
                          {0, 0, 1, 1, 1, 1, 0, 0}, {0, 1, 0, 1, 0, 1, 0, 1},
                          {0, 1, 0, 1, 1, 0, 1, 0}, {0, 1, 1, 0, 0, 1, 1, 0},
                          {0, 1, 1, 0, 1, 0, 0, 1}};
  for (int j = 0; j < 8; ++j) {
    s(j, 0) = 1.0;
    for (int k = 1; k < 8; ++k) s(j, k) = cols[k - 1][j] ? -1.0 : 1.0;
  }
  return s;
}

/// Deterministic polygon closure: phases theta_k (k >= 2) with
/// d_1 + sum_{k>=2} d_k e^{i theta_k} = 0, valid when d_1 <= sum_{k>=2} d_k.
/// Sides are split into two chains forming a triangle with d_1.
inline std::vector<double> closure_phases(const Eigen::VectorXd& d) {
  const auto r = d.size();
  std::vector<double> theta(static_cast<std::size_t>(r), 0.0);
  if (r < 2 || d[0] <= 1e-14) return theta;
  double bsum = 0.0;
  const double total = d.tail(r - 1).sum();
  Eigen::Index split = 1;  // sides 1..split-1 -> chain B (none yet)
  while (split < r && (total - 2.0 * bsum) > d[0] + 1e-15) {
    bsum += d[split];
    ++split;
  }
  const double csum = total - bsum;
  double phi_b = std::numbers::pi, phi_c = std::numbers::pi;
  if (bsum > 1e-14) {
    const double cosb =
        std::clamp((csum * csum - d[0] * d[0] - bsum * bsum) / (2.0 * d[0] * bsum), -1.0, 1.0);
    phi_b = std::acos(cosb);
    const Complex rest = -d[0] - bsum * std::polar(1.0, phi_b);
    phi_c = csum > 1e-14 ? std::arg(rest) : 0.0;
  }
  for (Eigen::Index k = 1; k < r; ++k)
    theta[static_cast<std::size_t>(k)] = (k < split) ? phi_b : phi_c;
  return theta;
}

struct Component {
  double weight;
  QuartetState state;
};

inline std::vector<std::pair<double, QuartetState>> components_from_mixing(const SpectralData& sd,
                                                                           const Mat& U) {
  std::vector<std::pair<double, QuartetState>> out;
  const Eigen::Index r = sd.coeff.cols();
  Eigen::VectorXd sqlam(r);
  for (Eigen::Index k = 0; k < r; ++k) sqlam[k] = std::sqrt(sd.lambda[static_cast<std::size_t>(k)]);
  for (Eigen::Index j = 0; j < U.rows(); ++j) {
    Eigen::Vector<Complex, 8> a = Eigen::Vector<Complex, 8>::Zero();
    for (Eigen::Index k = 0; k < r; ++k) a += U(j, k) * sqlam[k] * sd.coeff.col(k);
    const double p = a.squaredNorm();
    if (p < 1e-14) continue;
    QuartetState q;
    q.parity = sd.parity;
    q.alpha = a.head(4) / std::sqrt(p);
    q.beta = a.tail(4).conjugate() / std::sqrt(p);
    out.emplace_back(p, q);
  }
  return out;
}

}  // namespace detail

/// Optimal (concurrence-minimizing) decomposition of rho. Separable states
/// decompose into r' in {2,4,8} zero-concurrence states; entangled states
/// into components that all share the concurrence C(rho).
inline std::vector<std::pair<double, QuartetState>> optimal_decomposition(const MixedState& ms) {
  const auto sd = detail::spectral_data(ms);
  const auto r = static_cast<int>(sd.lambda.size());
  if (r == 1) return {{1.0, sd.eigenstates[0]}};

  const Eigen::VectorXd& d = sd.tf.d;
  const double tail = d.tail(d.size() - 1).sum();
  const double c_rho = std::max(d[0] - tail, 0.0);
  const bool separable = d[0] <= tail;
  const int rprime = r <= 2 ? 2 : (r <= 4 ? 4 : 8);

  // phases on the Takagi-diagonal side: closure for separable states,
  // theta_k = pi (i.e. theta_k/2 = pi/2) for entangled ones
  std::vector<double> theta(static_cast<std::size_t>(r), std::numbers::pi);
  if (separable) theta = detail::closure_phases(d);
  theta[0] = 0.0;

  const Eigen::MatrixXd signs = detail::sign_pattern(rprime);
  Mat s = Mat::Zero(rprime, r);
  for (int j = 0; j < rprime; ++j)
    for (int k = 0; k < r; ++k)
      s(j, k) = signs(j, k) * std::polar(1.0 / std::sqrt(double(rprime)),
                                         theta[static_cast<std::size_t>(k)] / 2.0);
  Mat mixing = s * sd.tf.V.adjoint();

  if (!separable) {
    // equalize per-component concurrence across the decomposition; the
    // average is already pinned at the convex-roof minimum
    const Mat cm = sd.cmat;
    Mat lam = Mat::Zero(r, r);
    for (int k = 0; k < r; ++k) lam(k, k) = sd.lambda[static_cast<std::size_t>(k)];
    auto objective = [&](const Mat& u) {
      const Mat z = u * cm * u.transpose();
      const Mat p = u * lam * u.adjoint();
      double err = 0.0;
      for (Eigen::Index j = 0; j < u.rows(); ++j) {
        const double pj = p(j, j).real();
        err += std::pow(std::abs(z(j, j)) - c_rho * pj, 2);
      }
      return err;
    };
    pairwise_rotation_descent(mixing, objective, 400, 8, 1e-18);
  }

  auto components = detail::components_from_mixing(sd, mixing);

  // verification: reconstruction and per-component concurrence
  Mat recon = Mat::Zero(16, 16);
  for (const auto& [w, q] : components) {
    const Vec v = to_fock(q).amp;
    recon += w * (v * v.adjoint());
  }
  if ((recon - ms.rho).norm() > 1e-8)
    throw std::runtime_error("optimal_decomposition: reconstruction failed");
  for (const auto& [w, q] : components)
    if (std::abs(pure_concurrence(q) - c_rho) > 1e-6)
      throw std::runtime_error("optimal_decomposition: component concurrence off target");
  return components;
}

/// E^qsp(rho) = 4 h((1 + sqrt(1 - C^2)) / 2); reduces to S^qsp on pure states.
inline double formation_entanglement(const MixedState& ms) {
  const double c = mixed_concurrence(ms).concurrence;
  return 4.0 * binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

struct ParitySplit {
  double p_plus = 0.0;   // even-sector weight
  std::optional<MixedState> rho_plus;
  double p_minus = 0.0;  // odd-sector weight
  std::optional<MixedState> rho_minus;
};

/// Splits a parity-commuting density matrix into its even and odd parts
/// rho_± = (1 ± P) rho / (2 p_±).
inline ParitySplit parity_split(const MixedState& ms) {
  validate_mixed(ms);
  const Eigen::VectorXd p = parity_diagonal(ms.n);
  Mat proj_plus = Mat::Zero(ms.dim(), ms.dim());
  for (Eigen::Index k = 0; k < ms.dim(); ++k) proj_plus(k, k) = (1.0 + p[k]) / 2.0;
  const Mat proj_minus = Mat::Identity(ms.dim(), ms.dim()) - proj_plus;
  ParitySplit out;
  out.p_plus = (proj_plus * ms.rho).trace().real();
  out.p_minus = (proj_minus * ms.rho).trace().real();
  if (out.p_plus > kRankTol)
    out.rho_plus = MixedState(ms.n, proj_plus * ms.rho * proj_plus / out.p_plus);
  if (out.p_minus > kRankTol)
    out.rho_minus = MixedState(ms.n, proj_minus * ms.rho * proj_minus / out.p_minus);
  return out;
}

/// E^qsp of a general parity-commuting state: p_+ E(rho_+) + p_- E(rho_-).
inline double formation_entanglement_split(const MixedState& ms) {
  const ParitySplit split = parity_split(ms);
  double e = 0.0;
  if (split.rho_plus) e += split.p_plus * formation_entanglement(*split.rho_plus);
  if (split.rho_minus) e += split.p_minus * formation_entanglement(*split.rho_minus);
  return e;
}

}  // namespace fermient

#endif  // FERMIENT_QUARTET_HPP
