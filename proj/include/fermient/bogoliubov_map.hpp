#ifndef FERMIENT_BOGOLIUBOV_MAP_HPP
#define FERMIENT_BOGOLIUBOV_MAP_HPP

#include <stdexcept>

#include <Eigen/Dense>

#include "fermient/fock.hpp"

namespace fermient {

inline constexpr double kCanonicalTol = 1e-10;

/// Canonical quasiparticle transformation a_nu = sum_j conj(U_{j nu}) c_j +
/// V_{j nu} c†_j. Valid iff the 2n x 2n matrix W = [[U,V],[conj(V),conj(U)]]
/// is unitary, i.e. U U† + V V† = I and U V^T + V U^T = 0.
struct BogoliubovMap {
  Mat U;
  Mat V;

  int n() const { return static_cast<int>(U.rows()); }
};

inline BogoliubovMap identity_map(int n) {
  return {Mat::Identity(n, n), Mat::Zero(n, n)};
}

/// Full particle-hole map: c_j -> c†_j on every mode.
inline BogoliubovMap particle_hole_map(int n) {
  return {Mat::Zero(n, n), Mat::Identity(n, n)};
}

inline Mat w_matrix(const BogoliubovMap& m) {
  const int n = m.n();
  Mat w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = m.U;
  w.topRightCorner(n, n) = m.V;
  w.bottomLeftCorner(n, n) = m.V.conjugate();
  w.bottomRightCorner(n, n) = m.U.conjugate();
  return w;
}

inline BogoliubovMap map_from_w(const Mat& w) {
  const Eigen::Index n2 = w.rows();
  if (n2 % 2 != 0 || w.cols() != n2) throw std::invalid_argument("map_from_w: bad dimension");
  const Eigen::Index n = n2 / 2;
  if ((w.bottomLeftCorner(n, n) - w.topRightCorner(n, n).conjugate()).norm() > 1e-8 ||
      (w.bottomRightCorner(n, n) - w.topLeftCorner(n, n).conjugate()).norm() > 1e-8)
    throw std::invalid_argument("map_from_w: matrix lacks Bogoliubov block structure");
  return {w.topLeftCorner(n, n), w.topRightCorner(n, n)};
}

inline bool validate(const BogoliubovMap& m, double tol = kCanonicalTol) {
  const int n = m.n();
  if (m.V.rows() != n || m.U.cols() != n || m.V.cols() != n) return false;
  const Mat one = Mat::Identity(n, n);
  return (m.U * m.U.adjoint() + m.V * m.V.adjoint() - one).norm() <= tol &&
         (m.U * m.V.transpose() + m.V * m.U.transpose()).norm() <= tol;
}

inline void require_valid(const BogoliubovMap& m, double tol = kCanonicalTol) {
  if (!validate(m, tol)) throw std::invalid_argument("BogoliubovMap: not canonical");
}

/// Composition by W-matrix multiplication: compose(outer, inner) acts like
/// applying `inner` first and then `outer`.
inline BogoliubovMap compose(const BogoliubovMap& outer, const BogoliubovMap& inner) {
  return map_from_w(w_matrix(outer) * w_matrix(inner));
}

}  // namespace fermient

#endif  // FERMIENT_BOGOLIUBOV_MAP_HPP
