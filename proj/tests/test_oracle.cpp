#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fermient/oracle.hpp"

using namespace fermient;

TEST_CASE("random generators are well formed") {
  Rng rng(1);
  const Mat u = random_unitary(4, rng);
  CHECK((u * u.adjoint() - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK(is_hermitian(random_hermitian(4, rng)));
  const QuadraticOperator op = random_quadratic_operator(4, rng);
  CHECK_NOTHROW(require_hermitian_quadratic(op));
  CHECK(validate(random_bogoliubov(4, rng)));
  CHECK(is_normalized(random_pure_state(4, Parity::odd, rng)));
  CHECK_NOTHROW(validate_mixed(random_mixed_state(4, Parity::even, 3, rng)));
}

TEST_CASE("sp-basis entropy minimization") {
  SearchBudget budget;
  budget.samples = 1500;
  budget.refine_steps = 200;
  budget.seed = 2;

  // Slater determinant: minimum is zero
  CHECK(min_entropy_over_sp_bases(sp_matrix(basis_state(3, 0b011)), budget) ==
        doctest::Approx(0.0).epsilon(1e-6));

  // random n=3 state: matches tr h(rho^sp)
  Rng rng(3);
  const FockState s = random_pure_state(3, Parity::odd, rng);
  const Mat rho = sp_matrix(s);
  const double oracle = min_entropy_over_sp_bases(rho, budget);
  const double analytic = entropy_sp(rho);
  CHECK(oracle >= analytic - 1e-9);
  CHECK(oracle - analytic < 1e-4);

  // maximally entangled: flat at 4 in every basis
  Vec amp = Vec::Zero(16);
  amp[0b0001] = amp[0b1110] = 1 / std::sqrt(2.0);
  CHECK(min_entropy_over_sp_bases(sp_matrix(FockState(4, amp)), budget) == doctest::Approx(4.0));
}

TEST_CASE("qsp-basis entropy minimization") {
  SearchBudget budget;
  budget.samples = 1500;
  budget.refine_steps = 200;
  budget.seed = 4;

  CHECK(min_entropy_over_qsp_bases(qsp_matrix(basis_state(4, 0b0101)), budget) ==
        doctest::Approx(0.0).epsilon(1e-6));

  Rng rng(5);
  const FockState s = random_pure_state(4, Parity::even, rng);
  const double oracle = min_entropy_over_qsp_bases(qsp_matrix(s), budget);
  const double analytic = entropy_qsp(s);
  CHECK(oracle >= analytic - 1e-9);
  CHECK(oracle - analytic < 1e-4);

  const BogoliubovMap m = random_bogoliubov(4, rng, 0.6);
  CHECK(min_entropy_over_qsp_bases(qsp_matrix(thouless_vacuum(m)), budget) ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("convex roof search") {
  SearchBudget budget;
  budget.seed = 6;

  Rng rng(7);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  CHECK(convex_roof_search(pure_density(s), budget) ==
        doctest::Approx(pure_concurrence(s)).epsilon(1e-9));

  for (int t = 0; t < 3; ++t) {
    const MixedState ms = random_mixed_state(4, t % 2 ? Parity::odd : Parity::even, 2 + t, rng);
    const double analytic = mixed_concurrence(ms).concurrence;
    const double oracle = convex_roof_search(ms, budget);
    CHECK(oracle >= analytic - 1e-8);
    CHECK(oracle - analytic < budget.tolerance);
  }
}

TEST_CASE("budget monotonicity with a shared seed stream") {
  Rng rng(8);
  const FockState s = random_pure_state(4, Parity::odd, rng);
  const Mat q = qsp_matrix(s);
  double prev = 1e300;
  for (int samples : {50, 200, 800}) {
    SearchBudget budget;
    budget.samples = samples;
    budget.refine_steps = 0;
    budget.seed = 9;
    const double val = min_entropy_over_qsp_bases(q, budget);
    CHECK(val <= prev + 1e-15);
    prev = val;
  }
}

TEST_CASE("reproducibility for a fixed seed") {
  Rng rng(10);
  const MixedState ms = random_mixed_state(4, Parity::even, 3, rng);
  SearchBudget budget;
  budget.samples = 400;
  budget.refine_steps = 40;
  budget.seed = 11;
  const double a = convex_roof_search(ms, budget);
  const double b = convex_roof_search(ms, budget);
  CHECK(a == b);
}

TEST_CASE("expectation oracle") {
  CHECK(expectation_oracle(vacuum_state(2), {{false, 1}, {true, 1}}) == Complex(1.0));
  CHECK(expectation_oracle(basis_state(2, 0b01), {{true, 1}, {false, 1}}) == Complex(1.0));
  CHECK(expectation_oracle(vacuum_state(2), {{true, 1}, {false, 1}}) == Complex(0.0));

  // kappa entries of a Thouless vacuum match the pairing tensor
  Rng rng(12);
  const BogoliubovMap m = random_bogoliubov(4, rng, 0.7);
  const FockState vac = thouless_vacuum(m);
  const Mat kappa = pairing_tensor(vac);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      CHECK(std::abs(expectation_oracle(vac, {{false, j}, {false, i}}) - kappa(i - 1, j - 1)) <
            1e-12);

  // mixed-state overload agrees with a pure density
  const FockState s = random_pure_state(3, Parity::odd, rng);
  const std::vector<OperatorFactor> word{{true, 2}, {false, 1}};
  CHECK(std::abs(expectation_oracle(pure_density(s), word) - expectation_oracle(s, word)) < 1e-12);
}
