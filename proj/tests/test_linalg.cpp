#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <thread>

#include "qdiv/linalg.hpp"
#include "qdiv/random.hpp"

using namespace qdiv;

namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

RealVector vec2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("eig of a diagonal matrix sorts ascending") {
  const HermMatrix a = HermMatrix::diagonal(vec2(2.0, 1.0));
  const auto& s = eig_hermitian(a);
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0));
  // Permutation columns up to phase fixing.
  CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.eigenvectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig of Pauli X") {
  const HermMatrix x(m2(0, 1, 1, 0));
  const auto& s = eig_hermitian(x);
  CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(1.0));
  const double isq = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(isq));
  CHECK(std::abs(s.eigenvectors(0, 1)) == doctest::Approx(isq));
}

TEST_CASE("eig reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix g = random_ginibre(6, 6, rng);
    const HermMatrix a((g + g.adjoint()) / 2.0);
    const auto& s = a.spectral();
    const Matrix back =
        s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    const double scale = std::max(a.entries().cwiseAbs().maxCoeff(), 1.0);
    CHECK((back - a.entries()).cwiseAbs().maxCoeff() < 1e-10 * scale);
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors -
           Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index i = 1; i < 6; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m = m2(0, 1, 2, 0);
  CHECK_THROWS_AS(HermMatrix{m}, NonHermitianError);
}

TEST_CASE("fn_on_support: square root of diag(4,1)") {
  const HermMatrix a = HermMatrix::diagonal(vec2(4.0, 1.0));
  const HermMatrix r = fn_on_support(a, [](double t) { return std::sqrt(t); });
  CHECK(r.entries()(0, 0).real() == doctest::Approx(2.0));
  CHECK(r.entries()(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("fn_on_support: pseudo-inverse convention on diag(2,0)") {
  const HermMatrix a = HermMatrix::diagonal(vec2(2.0, 0.0));
  const HermMatrix r = fn_on_support(a, [](double t) { return 1.0 / t; });
  CHECK(r.entries()(0, 0).real() == doctest::Approx(0.5));
  CHECK(r.entries()(1, 1).real() == doctest::Approx(0.0));
}

TEST_CASE("fn_on_support: square against direct product") {
  const HermMatrix a(m2(2, 1, 1, 2));
  const HermMatrix r = fn_on_support(a, [](double t) { return t * t; });
  const Matrix expect = a.entries() * a.entries();
  CHECK((r.entries() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fn_on_support rejects negative spectrum") {
  const HermMatrix a = HermMatrix::diagonal(vec2(1.0, -0.5));
  CHECK_THROWS_AS(fn_on_support(a, [](double t) { return t; }), NegativeSpectrumError);
}

TEST_CASE("support projection drops tiny eigenvalues") {
  RealVector v(3);
  v << 1.0, 0.0, 1e-18;
  const Projection p = support_projection(HermMatrix::diagonal(v));
  CHECK(p.rank() == 1);
  CHECK(p.entries()(0, 0).real() == doctest::Approx(1.0));
  CHECK(p.entries()(1, 1).real() == doctest::Approx(0.0));
  CHECK(p.entries()(2, 2).real() == doctest::Approx(0.0));
}

TEST_CASE("support projection of the identity") {
  const Projection p = support_projection(HermMatrix::identity(4));
  CHECK(p.rank() == 4);
  CHECK((p.entries() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("support projection of a random rank-3 PSD matrix") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const HermMatrix a = random_psd(6, 3, rng);
    const Projection p = support_projection(a);
    CHECK(p.rank() == 3);
    // Commutes with a.
    CHECK(commutator_norm(p.matrix(), a) < 1e-10 * std::max(a.operator_norm(), 1.0));
  }
}

TEST_CASE("loewner order basics") {
  const HermMatrix a = HermMatrix::diagonal(vec2(1.0, 0.0));
  const HermMatrix b = HermMatrix::diagonal(vec2(1.0, 1.0));
  CHECK(loewner_leq(a, a));
  CHECK(loewner_leq(a, b));
  CHECK_FALSE(loewner_leq(b, a, 1e-12));
}

TEST_CASE("loewner: pure plus state under 2.25 sigma but not 2.24 sigma") {
  const HermMatrix plus(m2(0.5, 0.5, 0.5, 0.5));
  const HermMatrix sigma = HermMatrix::diagonal(vec2(2.0 / 3.0, 1.0 / 3.0));
  CHECK(loewner_leq(plus, HermMatrix(2.25 * sigma.entries()), 1e-12));
  CHECK_FALSE(loewner_leq(plus, HermMatrix(2.24 * sigma.entries()), 1e-12));
}

TEST_CASE("loewner is reflexive and transitive on random PSD triples") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const HermMatrix a = random_psd(4, 4, rng);
    const HermMatrix b(a.entries() + random_psd(4, 4, rng).entries());
    const HermMatrix c(b.entries() + random_psd(4, 4, rng).entries());
    CHECK(loewner_leq(a, a));
    CHECK(loewner_leq(a, b));
    CHECK(loewner_leq(b, c));
    CHECK(loewner_leq(a, c, 2e-10));
  }
}

TEST_CASE("tensor products") {
  const HermMatrix i2 = HermMatrix::identity(2);
  CHECK((tensor(i2, i2).entries() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  const HermMatrix a = HermMatrix::diagonal(vec2(2.0, 3.0));
  const HermMatrix b = HermMatrix::diagonal(vec2(5.0, 7.0));
  const HermMatrix t = tensor(a, b);
  CHECK(t.entries()(0, 0).real() == doctest::Approx(10.0));
  CHECK(t.entries()(1, 1).real() == doctest::Approx(14.0));
  CHECK(t.entries()(2, 2).real() == doctest::Approx(15.0));
  CHECK(t.entries()(3, 3).real() == doctest::Approx(21.0));
}

TEST_CASE("trace is multiplicative under tensor") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const HermMatrix a = random_psd(3, 3, rng);
    const HermMatrix b = random_psd(3, 3, rng);
    CHECK(tensor(a, b).trace() == doctest::Approx(a.trace() * b.trace()).epsilon(1e-12));
  }
}

TEST_CASE("direct sum assembles blocks") {
  const HermMatrix a = HermMatrix::diagonal(vec2(1.0, 2.0));
  RealVector v(1);
  v << 3.0;
  const HermMatrix s = direct_sum({a, HermMatrix::diagonal(v)});
  CHECK(s.dim() == 3);
  CHECK(s.entries()(2, 2).real() == doctest::Approx(3.0));
  CHECK(s.trace() == doctest::Approx(6.0));
}

TEST_CASE("functional calculus composes") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const HermMatrix a = random_psd(5, 5, rng);
    const auto g = [](double t) { return t + 0.5; };  // positive on the spectrum
    const auto f = [](double t) { return std::log(t); };
    const HermMatrix lhs = fn_on_support(a, [&](double t) { return f(g(t)); });
    const HermMatrix rhs = fn_on_support(fn_on_support(a, g), f);
    CHECK((lhs.entries() - rhs.entries()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("pseudo-inverse times value reproduces the support projection") {
  Rng rng(37);
  for (int rep = 0; rep < 10; ++rep) {
    const HermMatrix a = random_psd(5, 3, rng);
    const HermMatrix ai = fn_on_support(a, [](double t) { return 1.0 / t; });
    const Matrix prod = a.entries() * ai.entries();
    const Projection s = support_projection(a);
    CHECK((prod - s.entries()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("projection invariants are enforced") {
  CHECK_THROWS_AS(Projection(HermMatrix::diagonal(vec2(0.5, 1.0))), NotProjectionError);
}

TEST_CASE("copies share the one-time spectral cache") {
  Rng rng(41);
  const Matrix g = random_ginibre(8, 8, rng);
  const HermMatrix a((g + g.adjoint()) / 2.0);
  const HermMatrix copy = a;  // shares the cache cell
  std::vector<std::thread> pool;
  std::array<const Spectral*, 8> seen{};
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] { seen[static_cast<size_t>(t)] = &copy.spectral(); });
  for (auto& th : pool) th.join();
  for (const auto* s : seen) CHECK(s == &a.spectral());
}
