#ifndef FERMIENT_BOGOLIUBOV_HPP
#define FERMIENT_BOGOLIUBOV_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fermient/bogoliubov_map.hpp"
#include "fermient/densities.hpp"
#include "fermient/fock.hpp"
#include "fermient/linalg.hpp"

namespace fermient {

/// Generalized one-body operator
///   O = sum o11_{ij} c†_i c_j + 1/2 (o20_{ij} c_i c_j + o02_{ij} c†_i c†_j)
///       - 1/2 tr o11,
/// with o11 Hermitian, o20 antisymmetric and o02 = -conj(o20), so that the
/// assembled 2n x 2n matrix [[o11, o02], [o20, -o11^T]] is Hermitian.
struct QuadraticOperator {
  Mat o11;
  Mat o20;

  int n() const { return static_cast<int>(o11.rows()); }
};

inline Mat cal_o(const QuadraticOperator& op) {
  const int n = op.n();
  Mat o(2 * n, 2 * n);
  o.topLeftCorner(n, n) = op.o11;
  o.topRightCorner(n, n) = -op.o20.conjugate();
  o.bottomLeftCorner(n, n) = op.o20;
  o.bottomRightCorner(n, n) = -op.o11.transpose();
  return o;
}

inline void require_hermitian_quadratic(const QuadraticOperator& op, double tol = 1e-10) {
  if (!is_hermitian(op.o11, tol) || !is_antisymmetric(op.o20, tol))
    throw std::invalid_argument("QuadraticOperator: o11 must be Hermitian, o20 antisymmetric");
}

/// Fock-space action of a quadratic operator on a state.
inline FockState apply_quadratic(const QuadraticOperator& op, const FockState& s) {
  const int n = s.n;
  if (op.n() != n) throw std::invalid_argument("apply_quadratic: dimension mismatch");
  Vec out = Vec::Zero(s.dim());
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (op.o11(i - 1, j - 1) != Complex{})
        out += op.o11(i - 1, j - 1) * apply_creation(apply_annihilation(s, j), i).amp;
      if (op.o20(i - 1, j - 1) != Complex{})
        out += 0.5 * op.o20(i - 1, j - 1) * apply_annihilation(apply_annihilation(s, j), i).amp;
      const Complex o02 = -std::conj(op.o20(i - 1, j - 1));
      if (o02 != Complex{})
        out += 0.5 * o02 * apply_creation(apply_creation(s, j), i).amp;
    }
  out -= 0.5 * op.o11.trace() * s.amp;
  return FockState(s.n, std::move(out));
}

/// Dense 2^n x 2^n matrix of the quadratic operator.
inline Mat quadratic_fock_matrix(const QuadraticOperator& op, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    m.col(col) = apply_quadratic(op, basis_state(n, static_cast<std::uint32_t>(col))).amp;
  return m;
}

/// <O> computed both as a Fock-space matrix element and as
/// 1/2 tr' rho^qsp calO; the two must agree to 1e-10.
inline Complex quadratic_expectation(const FockState& s, const QuadraticOperator& op) {
  detail::require_pure_input(s);
  const Complex fock_value = inner(s, apply_quadratic(op, s));
  const Complex trace_value = 0.5 * (qsp_matrix(s) * cal_o(op)).trace();
  if (std::abs(fock_value - trace_value) > 1e-10)
    throw std::runtime_error("quadratic_expectation: Fock and trace routes disagree");
  return trace_value;
}

inline Complex quadratic_expectation(const MixedState& ms, const QuadraticOperator& op) {
  const Complex fock_value = (ms.rho * quadratic_fock_matrix(op, ms.n)).trace();
  const Complex trace_value = 0.5 * (qsp_matrix_mixed(ms) * cal_o(op)).trace();
  if (std::abs(fock_value - trace_value) > 1e-10)
    throw std::runtime_error("quadratic_expectation: Fock and trace routes disagree");
  return trace_value;
}

/// |Psi> -> exp[-i angle O] |Psi| via the exact Fock-space matrix exponential.
/// Preserves norm and number parity.
inline FockState apply_to_state(const FockState& s, const QuadraticOperator& op, double angle) {
  require_hermitian_quadratic(op);
  if (angle == 0.0) return s;
  const Mat gen = Complex(0.0, -angle) * quadratic_fock_matrix(op, s.n);
  return FockState(s.n, gen.exp() * s.amp);
}

/// Quasiparticle annihilator a_nu = sum_j conj(U_{j nu}) c_j + V_{j nu} c†_j
/// applied to a state.
inline FockState apply_quasiparticle_annihilator(const BogoliubovMap& m, int nu, const FockState& s) {
  if (m.n() != s.n) throw std::invalid_argument("dimension mismatch");
  if (nu < 1 || nu > s.n) throw std::out_of_range("quasiparticle index out of range");
  Vec out = Vec::Zero(s.dim());
  for (int j = 1; j <= s.n; ++j) {
    const Complex u = std::conj(m.U(j - 1, nu - 1));
    const Complex v = m.V(j - 1, nu - 1);
    if (u != Complex{}) out += u * apply_annihilation(s, j).amp;
    if (v != Complex{}) out += v * apply_creation(s, j).amp;
  }
  return FockState(s.n, std::move(out));
}

/// Largest residual norm of a_nu |s> over all nu.
inline double annihilation_residual(const BogoliubovMap& m, const FockState& s) {
  double worst = 0.0;
  for (int nu = 1; nu <= s.n; ++nu)
    worst = std::max(worst, apply_quasiparticle_annihilator(m, nu, s).norm());
  return worst;
}

/// Fixes the overall phase so the largest-magnitude amplitude is real positive.
inline FockState canonical_phase(const FockState& s) {
  Eigen::Index imax = 0;
  s.amp.cwiseAbs().maxCoeff(&imax);
  const Complex a = s.amp[imax];
  if (std::abs(a) < kSupportTol) return s;
  return FockState(s.n, s.amp * (std::abs(a) / a));
}

/// Quasiparticle vacuum gamma exp(1/2 sum T_ij c†_i c†_j)|0> (Thouless form).
/// For the convention a_nu = sum_j conj(U_{j nu}) c_j + V_{j nu} c†_j the
/// antisymmetric pairing matrix solving a_nu|0_a> = 0 is T = V conj(U)^{-1}.
/// Requires |det U| > 1e-10.
inline FockState thouless_vacuum(const BogoliubovMap& m) {
  require_valid(m);
  const int n = m.n();
  Eigen::FullPivLU<Mat> lu(Mat(m.U.adjoint()));
  if (std::abs(lu.determinant()) <= 1e-10)
    throw std::invalid_argument(
        "thouless_vacuum: det U ~ 0; apply a particle-hole map to some modes first");
  const Mat T = lu.solve(m.V.transpose()).transpose();  // V conj(U)^{-1}
  if (!is_antisymmetric(T, 1e-8 * std::max(1.0, T.norm())))
    throw std::runtime_error("thouless_vacuum: T = -U^{-1}V not antisymmetric");

  // pair-creation operator 1/2 sum T_ij c†_i c†_j applied as a power series
  // (terminates after n/2 applications)
  auto apply_pair = [&](const FockState& s) {
    Vec out = Vec::Zero(s.dim());
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (T(i - 1, j - 1) != Complex{})
          out += 0.5 * T(i - 1, j - 1) * apply_creation(apply_creation(s, j), i).amp;
    return FockState(s.n, std::move(out));
  };

  FockState term = vacuum_state(n);
  Vec total = term.amp;
  double factorial = 1.0;
  for (int k = 1; k <= n / 2; ++k) {
    term = apply_pair(term);
    factorial *= k;
    total += term.amp / factorial;
  }
  FockState vac = canonical_phase(normalized(FockState(n, std::move(total))));
  const double residual = annihilation_residual(m, vac);
  if (residual > 1e-9)
    throw std::runtime_error("thouless_vacuum: constructed state is not annihilated by all a_nu");
  return vac;
}

struct QspDiagonalization {
  BogoliubovMap map;
  Eigen::VectorXd f;  // one per mode, f_nu <= 1/2, sorted descending
};

namespace detail {

// Antiunitary particle-hole conjugation v -> S conj(v) with S the block swap;
// maps eigenvectors of lambda to eigenvectors of 1-lambda.
inline Vec ph_conjugate(const Vec& v) {
  const Eigen::Index n = v.size() / 2;
  Vec out(2 * n);
  out.head(n) = v.tail(n).conjugate();
  out.tail(n) = v.head(n).conjugate();
  return out;
}

}  // namespace detail

/// Structured eigendecomposition of a qsp matrix: returns a canonical map with
/// W† rho^qsp W = diag(f, 1-f). Eigenvectors of paired eigenvalues are related
/// by the antiunitary block-swap conjugation; the lambda = 1/2 subspace is
/// split by Gram-Schmidt over conjugation-fixed vectors.
inline QspDiagonalization diagonalize_qsp(const Mat& q) {
  check_qsp_invariants(q);
  const Eigen::Index n = q.rows() / 2;
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  const Eigen::VectorXd lam = es.eigenvalues();  // ascending

  const double half_tol = 1e-9;
  std::vector<Eigen::Index> lower;  // eigenvalues < 1/2
  std::vector<Eigen::Index> half;   // eigenvalues ~ 1/2
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    if (lam[k] < 0.5 - half_tol)
      lower.push_back(k);
    else if (lam[k] <= 0.5 + half_tol)
      half.push_back(k);
  }

  std::vector<std::pair<double, Vec>> modes;  // (f_nu, w_nu)
  for (Eigen::Index k : lower) modes.emplace_back(lam[k], es.eigenvectors().col(k));

  if (half.size() % 2 != 0) throw std::runtime_error("diagonalize_qsp: odd 1/2-eigenspace");
  if (!half.empty()) {
    // real structure of the antiunitary conjugation within the 1/2 eigenspace
    std::vector<Vec> real_basis;
    for (Eigen::Index k : half) {
      for (const Vec& cand : {Vec(es.eigenvectors().col(k)),
                              Vec(Complex(0, 1) * es.eigenvectors().col(k))}) {
        Vec r = cand + detail::ph_conjugate(cand);
        for (const Vec& b : real_basis) r -= b * b.dot(r);
        if (r.norm() > 1e-6) real_basis.push_back(r / r.norm());
        if (real_basis.size() == half.size()) break;
      }
      if (real_basis.size() == half.size()) break;
    }
    if (real_basis.size() != half.size())
      throw std::runtime_error("diagonalize_qsp: failed to split 1/2-eigenspace");
    for (std::size_t i = 0; i + 1 < real_basis.size(); i += 2)
      modes.emplace_back(0.5, (real_basis[i] + Complex(0, 1) * real_basis[i + 1]) / std::sqrt(2.0));
  }

  if (static_cast<Eigen::Index>(modes.size()) != n)
    throw std::runtime_error("diagonalize_qsp: wrong mode count");
  std::sort(modes.begin(), modes.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  Mat w(2 * n, 2 * n);
  Eigen::VectorXd f(n);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    f[nu] = modes[static_cast<std::size_t>(nu)].first;
    w.col(nu) = modes[static_cast<std::size_t>(nu)].second;
    w.col(n + nu) = detail::ph_conjugate(modes[static_cast<std::size_t>(nu)].second);
  }

  BogoliubovMap map = map_from_w(w);
  // prefer det U != 0 where the pairing leaves a choice (f = 1/2 pairs):
  // first orient each 1/2 mode toward its larger U column, then greedily
  // improve the determinant
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    if (std::abs(f[nu] - 0.5) > half_tol) continue;
    if (map.U.col(nu).norm() >= map.V.col(nu).norm()) continue;
    Mat w2 = w_matrix(map);
    w2.col(nu).swap(w2.col(n + nu));
    map = map_from_w(w2);
  }
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    if (std::abs(f[nu] - 0.5) > half_tol) continue;
    if (std::abs(Eigen::FullPivLU<Mat>(map.U).determinant()) > 1e-8) break;
    Mat w2 = w_matrix(map);
    w2.col(nu).swap(w2.col(n + nu));
    BogoliubovMap swapped = map_from_w(w2);
    if (std::abs(Eigen::FullPivLU<Mat>(swapped.U).determinant()) >
        std::abs(Eigen::FullPivLU<Mat>(map.U).determinant()))
      map = swapped;
  }

  const Mat check = w_matrix(map).adjoint() * q * w_matrix(map);
  Mat target = Mat::Zero(2 * n, 2 * n);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    target(nu, nu) = f[nu];
    target(n + nu, n + nu) = 1.0 - f[nu];
  }
  if ((check - target).norm() > 1e-9)
    throw std::runtime_error("diagonalize_qsp: block-diagonal form not reached");
  return {std::move(map), std::move(f)};
}

/// Particle-hole transformation c_j <-> c†_j on a subset of modes, realized by
/// the unitaries B_j = c_j + c†_j applied in ascending mode order. Preserves
/// the rho^qsp spectrum.
inline FockState particle_hole(const FockState& s, std::vector<int> modes) {
  std::sort(modes.begin(), modes.end());
  FockState out = s;
  for (int j : modes) {
    check_mode(s, j);
    out = FockState(out.n, apply_annihilation(out, j).amp + apply_creation(out, j).amp);
  }
  return out;
}

/// Many-body action of a Bogoliubov map: extracts the Hermitian generator
/// from the principal matrix log of W and applies its exponential in Fock
/// space. Requires W to have no eigenvalue at -1.
inline FockState apply_map(const FockState& s, const BogoliubovMap& m) {
  require_valid(m);
  const Mat w = w_matrix(m);
  const Mat gen = Complex(0, 1) * Mat(w.log());
  if (!is_hermitian(gen, 1e-8))
    throw std::invalid_argument("apply_map: W outside the principal-log domain");
  const int n = m.n();
  QuadraticOperator op{gen.topLeftCorner(n, n), gen.bottomLeftCorner(n, n)};
  // symmetrize away roundoff so the structure checks pass
  op.o11 = (op.o11 + op.o11.adjoint()) / 2.0;
  op.o20 = (op.o20 - op.o20.transpose()) / 2.0;
  return apply_to_state(s, op, 1.0);
}

}  // namespace fermient

#endif  // FERMIENT_BOGOLIUBOV_HPP
