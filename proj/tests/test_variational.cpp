#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdiv/random.hpp"
#include "qdiv/variational.hpp"

using namespace qdiv;

namespace {

FdState diag_state(double a, double b) {
  RealVector v(2);
  v << a, b;
  return FdState::from_diagonal(v);
}

const FdState kRho = diag_state(0.5, 0.5);
const FdState kSigma = diag_state(1.0 / 3.0, 2.0 / 3.0);

HermMatrix diag2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return HermMatrix::diagonal(v);
}

}  // namespace

TEST_CASE("objective at the identity telescopes to the sigma weight") {
  Rng rng(3);
  const auto pair = random_full_pair(3, rng);
  const HermMatrix id = HermMatrix::identity(3);
  // alpha > 1: alpha * 1 - (alpha-1) * tr sigma.
  CHECK(variational_objective(pair.rho, pair.sigma, 2.0, id) ==
        doctest::Approx(2.0 - pair.sigma.weight()).epsilon(1e-10));
  // alpha = 3/4: (3/4) + (1/4) * tr sigma.
  CHECK(variational_objective(pair.rho, pair.sigma, 0.75, id) ==
        doctest::Approx(0.75 + 0.25 * pair.sigma.weight()).epsilon(1e-10));
}

TEST_CASE("scalar oracle pins the commuting optimizer") {
  // For diagonal pairs the alpha = 2 objective is 2 sum p x - sum q x^2,
  // maximized at x = p/q with value sum p^2/q = 9/8.
  const HermMatrix x_opt = diag2(1.5, 0.75);
  CHECK(variational_objective(kRho, kSigma, 2.0, x_opt) ==
        doctest::Approx(1.125).epsilon(1e-12));
  // The alpha-scaled candidate 2(p/q) is feasible but strictly suboptimal.
  const HermMatrix x_scaled = diag2(3.0, 1.5);
  const double at_scaled = variational_objective(kRho, kSigma, 2.0, x_scaled);
  CHECK(at_scaled == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_scaled < 1.125);
}

TEST_CASE("closed form: rho = sigma gives the support projection and value 1") {
  Rng rng(5);
  const FdState rho = FdState::from_density(random_density(3, 3, rng));
  const auto res = closed_form_optimizer(rho, rho, 2.0);
  CHECK(res.value.value() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((res.optimizer.entries() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("closed form matches the scalar oracle on the commuting pair") {
  const auto res = closed_form_optimizer(kRho, kSigma, 2.0);
  CHECK(res.value.value() == doctest::Approx(1.125).epsilon(1e-10));
}

TEST_CASE("closed form matches the rank-one oracle on the noncommuting pair") {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  const FdState rho = FdState::from_density(HermMatrix(m));
  const auto res = closed_form_optimizer(rho, kSigma, 2.0);
  CHECK(res.value.value() == doctest::Approx(2.18566).epsilon(1e-5));
  CHECK(res.value.value() ==
        doctest::Approx(sandwiched_q(rho, kSigma, 2.0).value()).epsilon(1e-10));
}

TEST_CASE("closed form rejects support violations for alpha > 1") {
  CHECK_THROWS_AS(closed_form_optimizer(diag_state(1, 0), diag_state(0, 1), 2.0),
                  SupportViolationError);
}

TEST_CASE("closed form equals Q over random pairs and alphas") {
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 5);
    const auto pair = random_full_pair(d, rng);
    for (double alpha : {0.5, 0.75, 1.5, 2.0, 3.0}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      const auto res = closed_form_optimizer(pair.rho, pair.sigma, alpha);
      CHECK(std::abs(res.value.value() - q) <= 1e-8 * q);
    }
  }
}

TEST_CASE("closed form equals Q on equal-deficient-support pairs") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const auto pair = random_equal_support_pair(4, 3, rng);
    for (double alpha : {0.5, 0.75, 1.5, 2.0, 3.0}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      const auto res = closed_form_optimizer(pair.rho, pair.sigma, alpha);
      CHECK(std::abs(res.value.value() - q) <= 1e-8 * q);
    }
  }
}

TEST_CASE("closed form is exact on strictly nested supports for alpha > 1, one-sided below 1") {
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const auto pair = random_nested_support_pair(4, 2, 3, rng);
    for (double alpha : {1.5, 2.0, 3.0}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      const auto res = closed_form_optimizer(pair.rho, pair.sigma, alpha);
      CHECK(std::abs(res.value.value() - q) <= 1e-8 * q);
    }
    // The infimum escapes to the boundary when A is singular inside supp sigma;
    // the regularized point still brackets Q from above.
    for (double alpha : {0.5, 0.75}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      const auto res = closed_form_optimizer(pair.rho, pair.sigma, alpha);
      CHECK(res.value.value() >= q - 1e-9);
    }
  }
}

TEST_CASE("feasible points never beat the variational bound") {
  Rng rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const auto pair = random_full_pair(3, rng);
    const HermMatrix x = random_psd(3, 3, rng);
    const HermMatrix x_pd(x.entries() + 0.05 * Matrix::Identity(3, 3));
    for (double alpha : {1.5, 2.0, 3.0}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      CHECK(variational_objective(pair.rho, pair.sigma, alpha, x) <= q + 1e-9);
    }
    for (double alpha : {0.5, 0.75}) {
      const double q = sandwiched_q(pair.rho, pair.sigma, alpha).value();
      CHECK(variational_objective(pair.rho, pair.sigma, alpha, x_pd) >= q - 1e-9);
    }
  }
}

TEST_CASE("objective enforces positive definiteness for alpha < 1") {
  Rng rng(19);
  const auto pair = random_full_pair(2, rng);
  const HermMatrix singular = diag2(1.0, 0.0);
  CHECK_THROWS_AS(variational_objective(pair.rho, pair.sigma, 0.5, singular),
                  NotPositiveDefiniteError);
}

TEST_CASE("iterative solver reaches the closed form") {
  const auto run = [](const FdState& rho, const FdState& sigma, double alpha, double tol) {
    const auto res = iterative_solve(rho, sigma, alpha, 4000, 1);
    CHECK(res.converged);
    const double q = sandwiched_q(rho, sigma, alpha).value();
    CHECK(std::abs(res.value.value() - q) <= tol * std::max(q, 1.0));
    // One-sided bound: iterates are always feasible.
    if (alpha > 1.0)
      CHECK(res.value.value() <= q + 1e-6);
    else
      CHECK(res.value.value() >= q - 1e-6);
  };
  Rng rng(23);
  const auto qubit = random_full_pair(2, rng);
  run(qubit.rho, qubit.rho, 2.0, 1e-6);
  run(kRho, kSigma, 2.0, 1e-6);
  const auto qutrit = random_full_pair(3, rng);
  run(qutrit.rho, qutrit.sigma, 1.5, 1e-5);
}
