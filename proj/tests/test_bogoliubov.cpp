#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fermient/bogoliubov.hpp"
#include "fermient/oracle.hpp"

using namespace fermient;

namespace {

Mat annihilator_matrix(const BogoliubovMap& m, int nu) {
  const Eigen::Index dim = Eigen::Index{1} << m.n();
  Mat a(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    a.col(col) =
        apply_quasiparticle_annihilator(m, nu, basis_state(m.n(), static_cast<std::uint32_t>(col)))
            .amp;
  return a;
}

}  // namespace

TEST_CASE("map validation") {
  CHECK(validate(identity_map(3)));
  CHECK(validate(particle_hole_map(3)));
  CHECK_FALSE(validate({Mat::Identity(3, 3), Mat::Identity(3, 3)}));
  CHECK_THROWS_AS(require_valid({Mat::Identity(3, 3), Mat::Identity(3, 3)}),
                  std::invalid_argument);
}

TEST_CASE("composition multiplies W matrices") {
  Rng rng(1);
  const BogoliubovMap m1 = random_bogoliubov(3, rng);
  const BogoliubovMap m2 = random_bogoliubov(3, rng);
  const BogoliubovMap c = compose(m2, m1);
  CHECK((w_matrix(c) - w_matrix(m2) * w_matrix(m1)).norm() < 1e-12);
  CHECK(validate(c));
}

TEST_CASE("quasiparticle operators satisfy canonical anticommutation, n <= 5") {
  Rng rng(2);
  for (int n = 2; n <= 5; ++n) {
    const BogoliubovMap m = random_bogoliubov(n, rng);
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Mat id = Mat::Identity(dim, dim);
    std::vector<Mat> a;
    for (int nu = 1; nu <= n; ++nu) a.push_back(annihilator_matrix(m, nu));
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Mat ac = a[i] * a[j].adjoint() + a[j].adjoint() * a[i];
        worst = std::max(worst, (ac - (i == j ? id : Mat(Mat::Zero(dim, dim)))).norm());
        worst = std::max(worst, (a[i] * a[j] + a[j] * a[i]).norm());
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("quadratic expectation values") {
  // O = N - n/2 on |0>
  QuadraticOperator number{Mat::Identity(4, 4), Mat::Zero(4, 4)};
  CHECK(quadratic_expectation(vacuum_state(4), number).real() == doctest::Approx(-2.0));

  QuadraticOperator n1{Mat::Zero(4, 4), Mat::Zero(4, 4)};
  n1.o11(0, 0) = 1.0;
  CHECK(quadratic_expectation(basis_state(4, 0b0001), n1).real() == doctest::Approx(0.5));

  // random Hermitian O on a random state: the Fock oracle equality is
  // enforced inside quadratic_expectation
  Rng rng(3);
  const FockState s = random_pure_state(4, Parity::even, rng);
  const QuadraticOperator op = random_quadratic_operator(4, rng);
  CHECK_NOTHROW(quadratic_expectation(s, op));
  CHECK_NOTHROW(quadratic_expectation(pure_density(s), op));
}

TEST_CASE("apply_to_state") {
  Rng rng(4);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  const QuadraticOperator op = random_quadratic_operator(4, rng);

  CHECK((apply_to_state(s, op, 0.0).amp - s.amp).norm() == doctest::Approx(0.0));

  const double angle = 0.37;
  const FockState out = apply_to_state(s, op, angle);
  CHECK(out.norm() == doctest::Approx(1.0));
  CHECK(number_parity(out) == Parity::odd);

  // rho^qsp transforms as W rho^qsp W† with W = exp(-i angle calO)
  const Mat w = Mat(Mat(Complex(0, -angle) * cal_o(op)).exp());
  CHECK((qsp_matrix(out) - w * qsp_matrix(s) * w.adjoint()).norm() < 1e-8);
}

TEST_CASE("thouless vacuum") {
  // V = 0 reduces to the bare vacuum
  const FockState trivial = thouless_vacuum(identity_map(4));
  CHECK((trivial.amp - vacuum_state(4).amp).norm() < 1e-12);

  // generic map: annihilation and rho^sp = VV†
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const BogoliubovMap m = random_bogoliubov(4, rng, 0.6);
    const FockState vac = thouless_vacuum(m);
    CHECK(annihilation_residual(m, vac) < 1e-9);
    CHECK((sp_matrix(vac) - m.V * m.V.adjoint()).norm() < 1e-9);
    CHECK(entropy_qsp(vac) < 1e-9);
  }

  CHECK_THROWS_AS(thouless_vacuum(particle_hole_map(4)), std::invalid_argument);
}

TEST_CASE("thouless vacuum of a BCS block") {
  // modes 3,4 paired: a_3 = u c_3 - v c†_4, a_4 = u c_4 + v c†_3
  const double u = 0.6, v = 0.8;
  Mat U = Mat::Identity(4, 4), V = Mat::Zero(4, 4);
  U(2, 2) = U(3, 3) = u;
  V(3, 2) = -v;
  V(2, 3) = v;
  const BogoliubovMap m{U, V};
  require_valid(m);
  const FockState vac = thouless_vacuum(m);
  CHECK(annihilation_residual(m, vac) < 1e-12);
  // two-component form u|0> + (phase) v c†_3 c†_4|0>
  CHECK(std::abs(std::abs(vac.amp[0b0000]) - u) < 1e-12);
  CHECK(std::abs(std::abs(vac.amp[0b1100]) - v) < 1e-12);
  CHECK(std::abs(vac.amp.cwiseAbs().sum() - (u + v)) < 1e-12);
}

TEST_CASE("diagonalize_qsp") {
  // already diagonal input
  Mat rho_sp = Mat::Zero(4, 4);
  rho_sp.diagonal() << 0.9, 0.7, 0.2, 0.0;
  const Mat q = assemble_qsp(rho_sp, Mat::Zero(4, 4));
  const QspDiagonalization d = diagonalize_qsp(q);
  Eigen::VectorXd expect(4);
  expect << 0.3, 0.2, 0.1, 0.0;
  CHECK((d.f - expect).norm() < 1e-10);

  // I/2: every basis works, f all 1/2, det U kept nonzero
  const QspDiagonalization half = diagonalize_qsp(Mat(Mat::Identity(8, 8) / 2.0));
  CHECK((half.f - Eigen::VectorXd::Constant(4, 0.5)).norm() < 1e-10);
  CHECK(std::abs(Eigen::FullPivLU<Mat>(half.map.U).determinant()) > 1e-8);

  // random pure n=4 state: four-fold degenerate spectrum
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const FockState s = random_pure_state(4, t % 2 ? Parity::odd : Parity::even, rng);
    const QspDiagonalization ds = diagonalize_qsp(qsp_matrix(s));
    const double spread = (ds.f.maxCoeff() - ds.f.minCoeff());
    CHECK(spread < 1e-9);
    // <a†_nu a_mu> = delta f_nu and <a_mu a_nu> = 0 in the new basis
    const Mat diag = w_matrix(ds.map).adjoint() * qsp_matrix(s) * w_matrix(ds.map);
    CHECK((diag.topRightCorner(4, 4)).norm() < 1e-9);
    double entropy_from_f = 0.0;
    for (double f : ds.f) entropy_from_f += binary_entropy(f);
    CHECK(entropy_from_f == doctest::Approx(entropy_qsp(s)).epsilon(1e-10));
  }
}

TEST_CASE("particle_hole") {
  Rng rng(7);
  const FockState s = random_pure_state(4, Parity::even, rng);
  CHECK((particle_hole(s, {}).amp - s.amp).norm() == doctest::Approx(0.0));

  // subset {1} swaps the odd and even two-term families
  const FockState flipped = particle_hole(basis_state(4, 0b0001), {1});
  CHECK((flipped.amp - vacuum_state(4).amp).norm() < 1e-12);

  const FockState ph = particle_hole(s, {1, 3});
  CHECK(entropy_qsp(ph) == doctest::Approx(entropy_qsp(s)).epsilon(1e-10));
  const Eigen::VectorXd before = eigenvalues_descending(qsp_matrix(s));
  const Eigen::VectorXd after = eigenvalues_descending(qsp_matrix(ph));
  CHECK((before - after).norm() < 1e-10);
}

TEST_CASE("apply_map matches sequential application") {
  Rng rng(8);
  for (int t = 0; t < 5; ++t) {
    const FockState s = random_pure_state(4, t % 2 ? Parity::odd : Parity::even, rng);
    const BogoliubovMap m1 = random_bogoliubov(4, rng, 0.5);
    const BogoliubovMap m2 = random_bogoliubov(4, rng, 0.5);
    const FockState seq = apply_map(apply_map(s, m1), m2);
    const FockState once = apply_map(s, compose(m2, m1));
    CHECK((qsp_matrix(seq) - qsp_matrix(once)).norm() < 1e-8);
  }
}

TEST_CASE("apply_map moves rho^qsp covariantly") {
  Rng rng(9);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  const BogoliubovMap m = random_bogoliubov(4, rng, 0.6);
  const Mat w = w_matrix(m);
  CHECK((qsp_matrix(apply_map(s, m)) - w * qsp_matrix(s) * w.adjoint()).norm() < 1e-8);
}
