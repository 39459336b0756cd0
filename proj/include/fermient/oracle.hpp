#ifndef FERMIENT_ORACLE_HPP
#define FERMIENT_ORACLE_HPP

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fermient/bogoliubov.hpp"
#include "fermient/densities.hpp"
#include "fermient/fock.hpp"
#include "fermient/optimize.hpp"
#include "fermient/quartet.hpp"

namespace fermient {

struct SearchBudget {
  int samples = 5000;
  int refine_steps = 300;
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
};

using Rng = std::mt19937_64;

inline int worker_count() {
  if (const char* env = std::getenv("FERMI_ENT_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  return 1;
}

namespace detail {

// per-sample seed stream: sample i always sees the same seed regardless of
// the total budget, so enlarging the budget can only improve the result
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// Runs `samples` independent trials of `trial(i)` across the worker pool and
/// returns the smallest value.
template <typename Trial>
double parallel_min(int samples, Trial&& trial) {
  const int workers = std::min(worker_count(), std::max(samples, 1));
  if (workers <= 1) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) best = std::min(best, trial(i));
    return best;
  }
  std::vector<double> results(static_cast<std::size_t>(workers),
                              std::numeric_limits<double>::infinity());
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      double best = std::numeric_limits<double>::infinity();
      for (int i = w; i < samples; i += workers) best = std::min(best, trial(i));
      results[static_cast<std::size_t>(w)] = best;
    });
  for (auto& t : pool) t.join();
  double best = std::numeric_limits<double>::infinity();
  for (double r : results) best = std::min(best, r);
  return best;
}

}  // namespace detail

/// Haar-distributed unitary: QR of a complex Gaussian with the R diagonal
/// phases absorbed into Q.
inline Mat random_unitary(int n, Rng& rng) {
  Mat a = detail::gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Mat random_hermitian(int n, Rng& rng) {
  Mat a = detail::gaussian_matrix(n, n, rng);
  return (a + a.adjoint()) / 2.0;
}

inline QuadraticOperator random_quadratic_operator(int n, Rng& rng) {
  QuadraticOperator op;
  op.o11 = random_hermitian(n, rng);
  Mat a = detail::gaussian_matrix(n, n, rng);
  op.o20 = (a - a.transpose()) / 2.0;
  return op;
}

/// Canonical map W = exp(-i calO) of a random Hermitian quadratic generator.
inline BogoliubovMap random_bogoliubov(int n, Rng& rng, double scale = 1.0) {
  const Mat gen = Complex(0, -scale) * cal_o(random_quadratic_operator(n, rng));
  return map_from_w(gen.exp());
}

inline FockState random_pure_state(int n, Parity parity, Rng& rng) {
  std::normal_distribution<double> g;
  Vec amp = Vec::Zero(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k < amp.size(); ++k) {
    const bool odd = std::popcount(static_cast<unsigned>(k)) & 1;
    if (parity == Parity::mixed || odd == (parity == Parity::odd))
      amp[k] = Complex(g(rng), g(rng));
  }
  return normalized(FockState(n, std::move(amp)));
}

/// Random rank-r parity-commuting mixed state supported on one parity sector.
inline MixedState random_mixed_state(int n, Parity parity, int rank, Rng& rng) {
  Mat rho = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(static_cast<std::size_t>(rank));
  double total = 0.0;
  for (double& x : w) total += (x = u(rng));
  for (int k = 0; k < rank; ++k) {
    const Vec v = random_pure_state(n, parity, rng).amp;
    rho += (w[static_cast<std::size_t>(k)] / total) * (v * v.adjoint());
  }
  return MixedState(n, std::move(rho));
}

/// min over sp bases of sum_j h((U† rho^sp U)_{jj}), by Haar sampling followed
/// by pairwise Givens descent from the best start. Converges to S^sp = tr h(rho^sp).
inline double min_entropy_over_sp_bases(const Mat& rho_sp, const SearchBudget& budget) {
  check_sp_invariants(rho_sp);
  const int n = static_cast<int>(rho_sp.rows());
  auto objective = [&](const Mat& u) {
    const Mat d = u.adjoint() * rho_sp * u;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += binary_entropy(d(j, j).real());
    return sum;
  };

  Mat best_u = Mat::Identity(n, n);
  double best = objective(best_u);
  std::mutex guard;
  detail::parallel_min(budget.samples, [&](int i) {
    Rng rng(detail::sample_seed(budget.seed, static_cast<std::uint64_t>(i)));
    Mat u = random_unitary(n, rng);
    const double val = objective(u);
    std::lock_guard<std::mutex> lock(guard);
    if (val < best) {
      best = val;
      best_u = u;
    }
    return val;
  });

  // rows of U† are rotated, i.e. columns of U mixed: still a basis search
  Mat u = best_u.adjoint();
  auto row_objective = [&](const Mat& udag) { return objective(udag.adjoint()); };
  return pairwise_rotation_descent(u, row_objective, std::max(1, budget.refine_steps / n));
}

/// min over quasiparticle bases of sum_nu h((W† rho^qsp W)_{nu nu}), by
/// sampling random canonical W plus generator line searches. Converges to S^qsp.
inline double min_entropy_over_qsp_bases(const Mat& q, const SearchBudget& budget) {
  check_qsp_invariants(q);
  const int n = static_cast<int>(q.rows()) / 2;
  auto objective = [&](const Mat& w) {
    const Mat d = w.adjoint() * q * w;
    double sum = 0.0;
    for (int nu = 0; nu < n; ++nu) sum += binary_entropy(d(nu, nu).real());
    return sum;
  };

  Mat best_w = Mat::Identity(2 * n, 2 * n);
  double best = objective(best_w);
  std::mutex guard;
  detail::parallel_min(budget.samples, [&](int i) {
    Rng rng(detail::sample_seed(budget.seed, static_cast<std::uint64_t>(i)));
    const Mat w = w_matrix(random_bogoliubov(n, rng));
    const double val = objective(w);
    std::lock_guard<std::mutex> lock(guard);
    if (val < best) {
      best = val;
      best_w = w;
    }
    return val;
  });

  // structure-preserving refinement: line searches along random quadratic
  // generator directions
  Rng rng(detail::sample_seed(budget.seed, 0x5eedULL << 32));
  Mat w = best_w;
  for (int step = 0; step < budget.refine_steps; ++step) {
    const Mat dir = Complex(0, -1) * cal_o(random_quadratic_operator(n, rng));
    auto f = [&](double t) { return objective(w * Mat((t * dir).exp())); };
    const double t0 = golden_section(f, -0.4, 0.4, 30);
    if (f(t0) < best - 1e-15) {
      w = w * Mat((t0 * dir).exp());
      best = objective(w);
    }
  }
  return best;
}

/// Brute-force convex-roof estimate of the mixed concurrence: minimizes the
/// decomposition-averaged pure concurrence over sampled orthonormal-column
/// mixing matrices, then polishes with pairwise rotations.
inline double convex_roof_search(const MixedState& ms, const SearchBudget& budget) {
  const auto sd = detail::spectral_data(ms);
  const Eigen::Index r = sd.cmat.rows();
  const int rprime = static_cast<int>(std::min<Eigen::Index>(2 * r, 8));
  auto average = [&](const Mat& u) {
    const Mat z = u * sd.cmat * u.transpose();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < u.rows(); ++j) sum += std::abs(z(j, j));
    return sum;
  };

  Mat best_u = Mat::Identity(rprime, r);
  double best = average(best_u);
  std::mutex guard;
  detail::parallel_min(budget.samples, [&](int i) {
    Rng rng(detail::sample_seed(budget.seed, static_cast<std::uint64_t>(i)));
    Mat g = detail::gaussian_matrix(rprime, r, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    const Mat u = Mat(qr.householderQ()).leftCols(r);
    const double val = average(u);
    std::lock_guard<std::mutex> lock(guard);
    if (val < best) {
      best = val;
      best_u = u;
    }
    return val;
  });

  Mat u = best_u;
  return pairwise_rotation_descent(u, average, std::max(1, budget.refine_steps / rprime));
}

/// One factor of an operator word: c†_mode if dagger, else c_mode.
struct OperatorFactor {
  bool dagger = false;
  int mode = 1;
};

/// <s| word |s> with the word applied right to left, each factor acting by the
/// exact Fock-space rules.
inline Complex expectation_oracle(const FockState& s, const std::vector<OperatorFactor>& word) {
  detail::require_pure_input(s);
  FockState acc = s;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    acc = it->dagger ? apply_creation(acc, it->mode) : apply_annihilation(acc, it->mode);
  return inner(s, acc);
}

inline Complex expectation_oracle(const MixedState& ms, const std::vector<OperatorFactor>& word) {
  validate_mixed(ms);
  Complex acc = 0;
  for (Eigen::Index col = 0; col < ms.dim(); ++col) {
    FockState e = basis_state(ms.n, static_cast<std::uint32_t>(col));
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      e = it->dagger ? apply_creation(e, it->mode) : apply_annihilation(e, it->mode);
    acc += (ms.rho.row(col) * e.amp)(0);
  }
  return acc;
}

}  // namespace fermient

#endif  // FERMIENT_ORACLE_HPP
