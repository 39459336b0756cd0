#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fermient/bogoliubov.hpp"
#include "fermient/densities.hpp"
#include "fermient/oracle.hpp"

using namespace fermient;

namespace {

FockState maximally_entangled_odd() {
  Vec amp = Vec::Zero(16);
  amp[0b0001] = 1 / std::sqrt(2.0);  // c†_1|0>
  amp[0b1110] = 1 / std::sqrt(2.0);  // c_1|0bar>
  return FockState(4, amp);
}

}  // namespace

TEST_CASE("sp matrix of a Slater determinant") {
  const FockState s = basis_state(4, 0b0011);  // c†_1 c†_2|0> up to order sign
  const Mat rho = sp_matrix(s);
  Mat expect = Mat::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 1.0;
  CHECK((rho - expect).norm() == doctest::Approx(0.0));
}

TEST_CASE("sp matrix of the maximally entangled state is I/2") {
  const Mat rho = sp_matrix(maximally_entangled_odd());
  CHECK((rho - Mat::Identity(4, 4) / 2.0).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sp matrix of a two-term odd state matches the expectation oracle") {
  // alpha = (a,0,0,0) on c†_1|0>, beta = (0,b,0,0) on c_2|0bar>
  const double a = 0.6, b = 0.8;
  Vec amp = Vec::Zero(16);
  amp[0b0001] = a;
  amp[0b1101] = -b;  // c_2|0bar> = -c†_1c†_3c†_4|0>
  const FockState s(4, amp);
  const Mat rho = sp_matrix(s);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const Complex direct = expectation_oracle(s, {{true, j}, {false, i}});
      CHECK(std::abs(rho(i - 1, j - 1) - direct) < 1e-12);
    }
  // analytic form alpha alpha† - beta beta† + |beta|^2 I
  Eigen::Vector4cd va{a, 0, 0, 0}, vb{0, b, 0, 0};
  const Mat analytic = va * va.adjoint() - vb * vb.adjoint() + b * b * Mat::Identity(4, 4);
  CHECK((rho - analytic).norm() < 1e-12);
}

TEST_CASE("pairing tensor vanishes for fixed particle number") {
  Rng rng(5);
  Vec amp = Vec::Zero(16);
  std::normal_distribution<double> g;
  for (std::uint32_t m = 0; m < 16; ++m)
    if (std::popcount(m) == 2) amp[m] = Complex(g(rng), g(rng));
  const FockState s = normalized(FockState(4, amp));
  CHECK(pairing_tensor(s).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pairing_tensor(maximally_entangled_odd()).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pairing tensor of a quasiparticle vacuum matches the oracle") {
  Rng rng(9);
  const BogoliubovMap m = random_bogoliubov(4, rng, 0.7);
  const FockState vac = thouless_vacuum(m);
  const Mat kappa = pairing_tensor(vac);
  CHECK(kappa.norm() > 1e-3);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const Complex direct = expectation_oracle(vac, {{false, j}, {false, i}});
      CHECK(std::abs(kappa(i - 1, j - 1) - direct) < 1e-12);
    }
  CHECK((kappa + kappa.transpose()).norm() < 1e-10);
}

TEST_CASE("qsp matrix structure") {
  // Slater determinant: projector spectrum
  const Mat q_slater = qsp_matrix(basis_state(4, 0b0101));
  const Eigen::VectorXd ev = eigenvalues_descending(q_slater);
  for (double lambda : ev) CHECK(std::min(lambda, 1.0 - lambda) < 1e-12);

  // maximally entangled: I/2
  const Mat q_me = qsp_matrix(maximally_entangled_odd());
  CHECK((q_me - Mat::Identity(8, 8) / 2.0).norm() < 1e-12);

  // random state: spectrum closed under lambda -> 1 - lambda (checked inside)
  Rng rng(3);
  CHECK_NOTHROW(qsp_matrix(random_pure_state(4, Parity::even, rng)));
}

TEST_CASE("entropy_sc") {
  CHECK(entropy_sc(basis_state(4, 0b0011)) == doctest::Approx(0.0));
  CHECK(entropy_sc(maximally_entangled_odd()) == doctest::Approx(4.0));

  // single level at p = 1/2
  Vec amp = Vec::Zero(4);
  amp[0b00] = amp[0b10] = 1 / std::sqrt(2.0);
  CHECK(number_parity(FockState(2, amp)) == Parity::mixed);  // parity-mixing rejected
  CHECK_THROWS_AS(entropy_sc(FockState(2, amp)), std::invalid_argument);
  Vec amp2 = Vec::Zero(4);
  amp2[0b01] = amp2[0b10] = 1 / std::sqrt(2.0);
  CHECK(entropy_sc(FockState(2, amp2)) == doctest::Approx(2.0));  // h(1/2) per mode
}

TEST_CASE("entropy_sc in a rotated quasiparticle basis") {
  Rng rng(17);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  const QspDiagonalization diag = diagonalize_qsp(qsp_matrix(s));
  CHECK(entropy_sc(s, diag.map) == doctest::Approx(entropy_qsp(s)).epsilon(1e-10));
  CHECK(entropy_sc(s, identity_map(4)) == doctest::Approx(entropy_sc(s)));
}

TEST_CASE("entropy_sp") {
  CHECK(entropy_sp(basis_state(4, 0b1010)) == doctest::Approx(0.0));
  CHECK(entropy_sp(Mat(Mat::Identity(4, 4) / 2.0)) == doctest::Approx(4.0));

  Rng rng(23);
  const BogoliubovMap m = random_bogoliubov(4, rng, 0.6);
  const FockState vac = thouless_vacuum(m);
  Eigen::JacobiSVD<Mat> svd(m.V);
  double expected = 0.0;
  for (double sigma : svd.singularValues()) expected += binary_entropy(sigma * sigma);
  CHECK(entropy_sp(vac) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("entropy_qsp") {
  Rng rng(29);
  const BogoliubovMap m = random_bogoliubov(4, rng, 0.8);
  CHECK(entropy_qsp(thouless_vacuum(m)) == doctest::Approx(0.0));
  CHECK(entropy_qsp(maximally_entangled_odd()) == doctest::Approx(4.0));

  // C = 0.6 state: alpha = (0.8,0,0,0) aligned with beta = (0.6,0,0,0) gives
  // 2|beta† alpha| = 2*0.48 = 0.96; instead use alpha=(a,0,0,0), beta=(b,0,0,0)
  // with 2ab = 0.6: a^2+b^2 = 1, ab = 0.3
  const double a = std::sqrt((1 + std::sqrt(1 - 0.36)) / 2);
  const double b = 0.3 / a;
  Vec amp = Vec::Zero(16);
  amp[0b0001] = a;
  amp[0b1110] = b;
  const FockState s(4, amp);
  CHECK(entropy_qsp(s) == doctest::Approx(4 * binary_entropy(0.9)).epsilon(1e-12));
}

TEST_CASE("entropy_quadratic") {
  CHECK(entropy_quadratic(basis_state(4, 0b0111)) == doctest::Approx(0.0));
  CHECK(entropy_quadratic(maximally_entangled_odd()) == doctest::Approx(4.0));
}

TEST_CASE("entropy_generalized variants and ordering") {
  Rng rng(31);
  const EntropyFunction h = EntropyFunction::von_neumann();
  const EntropyFunction quad = EntropyFunction::quadratic();
  for (int t = 0; t < 25; ++t) {
    const FockState s = random_pure_state(4, t % 2 ? Parity::odd : Parity::even, rng);
    const double d = entropy_generalized(s, h, SpectrumVariant::diagonal);
    const double sp = entropy_generalized(s, h, SpectrumVariant::sp);
    const double qsp = entropy_generalized(s, h, SpectrumVariant::qsp);
    CHECK(d >= sp - 1e-9);
    CHECK(sp >= qsp - 1e-9);
    CHECK(sp == doctest::Approx(entropy_sp(s)).epsilon(1e-10));
    CHECK(entropy_generalized(s, quad, SpectrumVariant::qsp) ==
          doctest::Approx(entropy_quadratic(s)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(EntropyFunction([](double p) { return p; }), std::invalid_argument);
}

TEST_CASE("majorization chain") {
  const MajorizationChain slater = majorization_chain(basis_state(4, 0b0011));
  CHECK(slater.holds);
  CHECK((slater.diagonal_prefix - slater.qsp_prefix).norm() < 1e-12);

  const MajorizationChain me = majorization_chain(maximally_entangled_odd());
  CHECK(me.holds);
  CHECK(me.qsp_prefix[0] == doctest::Approx(0.5));

  Rng rng(37);
  CHECK(majorization_chain(random_pure_state(4, Parity::even, rng)).holds);
}

TEST_CASE("entropy inequality chain on 1000 random states") {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 3;
    const FockState s = random_pure_state(n, t % 2 ? Parity::odd : Parity::even, rng);
    const double sc = entropy_sc(s), sp = entropy_sp(s), qsp = entropy_qsp(s);
    REQUIRE(sc >= sp - 1e-9);
    REQUIRE(sp >= qsp - 1e-9);
  }
}

TEST_CASE("entropy invariance under one-body and Bogoliubov transformations") {
  Rng rng(43);
  for (int t = 0; t < 15; ++t) {
    const FockState s = random_pure_state(4, t % 2 ? Parity::odd : Parity::even, rng);
    // one-body rotation preserves S^sp
    QuadraticOperator one_body{random_hermitian(4, rng), Mat::Zero(4, 4)};
    const FockState rotated = apply_to_state(s, one_body, 0.7);
    CHECK(entropy_sp(rotated) == doctest::Approx(entropy_sp(s)).epsilon(1e-8));
    // full Bogoliubov preserves S^qsp
    const FockState mapped = apply_map(s, random_bogoliubov(4, rng, 0.6));
    CHECK(entropy_qsp(mapped) == doctest::Approx(entropy_qsp(s)).epsilon(1e-8));
  }
}

TEST_CASE("mixed-state reductions agree with pure-state ones") {
  Rng rng(47);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  const MixedState ms = pure_density(s);
  CHECK((sp_matrix(ms) - sp_matrix(s)).norm() < 1e-10);
  CHECK((pairing_tensor(ms) - pairing_tensor(s)).norm() < 1e-10);
  CHECK((qsp_matrix_mixed(ms) - qsp_matrix(s)).norm() < 1e-10);
  CHECK(entropy_quadratic(ms) == doctest::Approx(entropy_quadratic(s)).epsilon(1e-10));
}
