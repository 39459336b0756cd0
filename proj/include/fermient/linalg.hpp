#ifndef FERMIENT_LINALG_HPP
#define FERMIENT_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fermient/fock.hpp"

namespace fermient {

inline bool is_hermitian(const Mat& m, double tol = 1e-10) {
  return (m - m.adjoint()).norm() <= tol;
}

inline bool is_antisymmetric(const Mat& m, double tol = 1e-10) {
  return (m + m.transpose()).norm() <= tol;
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
inline Eigen::VectorXd eigenvalues_descending(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

/// Principal square root of a Hermitian PSD matrix; small negative
/// eigenvalues from roundoff are clamped to zero.
inline Mat hermitian_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {

// Joint diagonalization of two commuting real symmetric matrices.
// Returns orthogonal E such that both E^T X E and E^T Y E are diagonal.
inline Eigen::MatrixXd joint_diagonalize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                         double group_tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
  Eigen::MatrixXd E = es.eigenvectors();
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::Index i = 0;
  while (i < lam.size()) {
    Eigen::Index j = i + 1;
    while (j < lam.size() && lam[j] - lam[i] <= group_tol) ++j;
    if (j - i > 1) {
      Eigen::MatrixXd block = E.middleCols(i, j - i);
      Eigen::MatrixXd Yb = block.transpose() * Y * block;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb((Yb + Yb.transpose()) / 2.0);
      E.middleCols(i, j - i) = block * esb.eigenvectors();
    }
    i = j;
  }
  return E;
}

}  // namespace detail

struct TakagiFactorization {
  Mat V;               // unitary
  Eigen::VectorXd d;   // nonnegative, descending
};

/// Takagi factorization C = V diag(d) V^T of a complex symmetric matrix,
/// via the eigendecomposition of C C† = C C̄. Degenerate singular values are
/// handled blockwise through a real joint diagonalization.
inline TakagiFactorization takagi(const Mat& C, double group_tol = 1e-8) {
  const Eigen::Index m = C.rows();
  if (C.cols() != m) throw std::invalid_argument("takagi: matrix not square");
  if ((C - C.transpose()).norm() > 1e-8 * std::max(1.0, C.norm()))
    throw std::invalid_argument("takagi: matrix not complex symmetric");

  Eigen::SelfAdjointEigenSolver<Mat> es(C * C.adjoint());
  // descending order
  Eigen::VectorXd d(m);
  Mat W(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    d[k] = std::sqrt(std::max(0.0, es.eigenvalues()[m - 1 - k]));
    W.col(k) = es.eigenvectors().col(m - 1 - k);
  }

  Mat V(m, m);
  const double gtol = group_tol * std::max(1.0, d.size() ? d[0] : 1.0);
  Eigen::Index i = 0;
  while (i < m) {
    Eigen::Index j = i + 1;
    while (j < m && d[i] - d[j] <= gtol) ++j;
    const Eigen::Index b = j - i;
    if (d[i] <= gtol) {
      // kernel block: C conj(w) = 0 already
      V.middleCols(i, b) = W.middleCols(i, b);
    } else {
      Mat Wb = W.middleCols(i, b);
      Mat M = Wb.adjoint() * C * Wb.conjugate();  // d * (symmetric unitary)
      M = (M + M.transpose()) / 2.0;
      Eigen::MatrixXd E = detail::joint_diagonalize(M.real(), M.imag());
      Vec phase_half(b);
      for (Eigen::Index c = 0; c < b; ++c) {
        const double x = (E.col(c).transpose() * M.real() * E.col(c))(0);
        const double y = (E.col(c).transpose() * M.imag() * E.col(c))(0);
        phase_half[c] = std::polar(1.0, std::atan2(y, x) / 2.0);
      }
      V.middleCols(i, b) = Wb * (E.cast<Complex>() * phase_half.asDiagonal());
    }
    i = j;
  }
  return {std::move(V), std::move(d)};
}

/// Majorization x ≺ y on equal-trace spectra: prefix sums of the decreasing
/// rearrangements satisfy sum(x,1..j) <= sum(y,1..j) within `slack`.
inline bool majorizes(const Eigen::VectorXd& y, const Eigen::VectorXd& x, double slack = 1e-10) {
  std::vector<double> xs(x.data(), x.data() + x.size());
  std::vector<double> ys(y.data(), y.data() + y.size());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double sx = 0, sy = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sx += xs[j];
    sy += ys[j];
    if (sx > sy + slack) return false;
  }
  return true;
}

inline Eigen::VectorXd prefix_sums_descending(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  Eigen::VectorXd out(v.size());
  double acc = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    acc += s[static_cast<std::size_t>(j)];
    out[j] = acc;
  }
  return out;
}

}  // namespace fermient

#endif  // FERMIENT_LINALG_HPP
