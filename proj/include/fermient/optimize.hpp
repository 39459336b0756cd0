#ifndef FERMIENT_OPTIMIZE_HPP
#define FERMIENT_OPTIMIZE_HPP

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "fermient/fock.hpp"

namespace fermient {

/// Derivative-free 1-D minimization on [a, b].
inline double golden_section(const std::function<double(double)>& f, double a, double b,
                             int iters = 40) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

namespace detail {

// In-place complex Givens rotation on rows (p, q) of U.
inline void rotate_rows(Mat& U, Eigen::Index p, Eigen::Index q, double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  const Eigen::RowVectorXcd rp = U.row(p), rq = U.row(q);
  U.row(p) = c * rp + s * e * rq;
  U.row(q) = -s * std::conj(e) * rp + c * rq;
}

}  // namespace detail

/// Cyclic coordinate descent over pairwise complex rotations of the rows of
/// U, minimizing `objective`. Left-multiplication by unitaries preserves
/// orthonormal columns, so U stays admissible throughout.
inline double pairwise_rotation_descent(Mat& U, const std::function<double(const Mat&)>& objective,
                                        int sweeps, int phi_samples = 8, double stop_value = -1e300) {
  using std::numbers::pi;
  double best = objective(U);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double sweep_start = best;
    for (Eigen::Index p = 0; p < U.rows(); ++p)
      for (Eigen::Index q = p + 1; q < U.rows(); ++q) {
        double best_theta = 0, best_phi = 0, best_val = best;
        auto eval = [&](double theta, double phi) {
          Mat trial = U;
          detail::rotate_rows(trial, p, q, theta, phi);
          return objective(trial);
        };
        for (int ip = 0; ip < phi_samples; ++ip) {
          const double phi = 2.0 * pi * ip / phi_samples;
          const double theta =
              golden_section([&](double t) { return eval(t, phi); }, -pi / 2, pi / 2);
          const double val = eval(theta, phi);
          if (val < best_val) {
            best_val = val;
            best_theta = theta;
            best_phi = phi;
          }
        }
        // alternate 1-D refinements to sharpen past the phi grid resolution
        for (int round = 0; round < 3 && best_val < best; ++round) {
          const double span = 2.0 * pi / phi_samples / (round + 1);
          best_phi = golden_section([&](double f) { return eval(best_theta, f); },
                                    best_phi - span, best_phi + span);
          best_theta = golden_section([&](double t) { return eval(t, best_phi); },
                                      best_theta - 0.2 / (round + 1), best_theta + 0.2 / (round + 1));
          best_val = eval(best_theta, best_phi);
        }
        if (best_val < best) {
          detail::rotate_rows(U, p, q, best_theta, best_phi);
          best = best_val;
        }
      }
    if (best <= stop_value) break;
    if (sweep_start - best < 1e-17 * (1.0 + std::abs(sweep_start))) break;  // converged
  }
  return best;
}

}  // namespace fermient

#endif  // FERMIENT_OPTIMIZE_HPP
