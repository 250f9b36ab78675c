#include "qdiv/measured.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdiv/algebra.hpp"
#include "qdiv/random.hpp"

namespace qdiv {

namespace {

// Binary outcome divergence of a test.
ExtReal binary_value(const FdState& rho, const FdState& sigma, const HermMatrix& t,
                     double alpha) {
  const double p1 = std::clamp(rho.apply(t), 0.0, rho.weight());
  const double q1 = std::clamp(sigma.apply(t), 0.0, sigma.weight());
  const double p[2] = {p1, rho.weight() - p1};
  const double q[2] = {q1, sigma.weight() - q1};
  return classical_renyi_d(std::span<const double>(p, 2), std::span<const double>(q, 2),
                           alpha);
}

HermMatrix sigmoid_of(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector mapped(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i)
    mapped(i) = 1.0 / (1.0 + std::exp(-es.eigenvalues()(i)));
  Matrix t = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
  return HermMatrix((t + t.adjoint()) / 2.0);
}

Matrix logit_of(const HermMatrix& t) {
  const auto& s = t.spectral();
  RealVector mapped(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    const double x = std::clamp(s.eigenvalues(i), 1e-6, 1.0 - 1e-6);
    mapped(i) = std::log(x / (1.0 - x));
  }
  Matrix h = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
  return (h + h.adjoint()) / 2.0;
}

double projective_value(const FdState& rho, const FdState& sigma, const Matrix& basis,
                        double alpha) {
  const HermMatrix hr = rho.dense();
  const HermMatrix hs = sigma.dense();
  std::vector<double> p, q;
  p.reserve(static_cast<size_t>(basis.cols()));
  q.reserve(static_cast<size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const auto v = basis.col(j);
    p.push_back(std::max((v.adjoint() * hr.entries() * v)(0, 0).real(), 0.0));
    q.push_back(std::max((v.adjoint() * hs.entries() * v)(0, 0).real(), 0.0));
  }
  return classical_renyi_d(p, q, alpha).as_double();
}

Matrix random_hermitian_direction(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix k(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) k(i, j) = Complex(g(rng), g(rng));
  return (k + k.adjoint()) / 2.0;
}

Matrix unitary_exp(const Matrix& k, double step) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(Complex(0.0, step * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Random-direction hill climbing over the measurement basis U.
double refine_basis(const FdState& rho, const FdState& sigma, double alpha, Matrix& basis,
                    double start_value, int steps, Rng& rng) {
  double best = start_value;
  double step = 0.2;
  const Eigen::Index d = basis.rows();
  for (int it = 0; it < steps; ++it) {
    const Matrix k = random_hermitian_direction(d, rng);
    const Matrix cand = basis * unitary_exp(k, step);
    const double val = projective_value(rho, sigma, cand, alpha);
    if (val > best && std::isfinite(val)) {
      best = val;
      basis = cand;
      step = std::min(step * 1.5, 1.0);
    } else {
      step *= 0.7;
      if (step < 1e-8) break;
    }
  }
  return best;
}

// Common eigenbasis of sigma and the sigma-pinched rho; for commuting pairs
// this is a joint eigenbasis and the measurement is exactly optimal.
Matrix pinched_joint_basis(const FdState& rho, const FdState& sigma) {
  const HermMatrix hs = sigma.dense();
  const auto [pinched, v] = pinch(rho, sigma);
  (void)v;
  const HermMatrix probe(hs.entries() + 0.5877370676 * pinched.dense().entries());
  return probe.spectral().eigenvectors;
}

}  // namespace

Povm::Povm(std::vector<HermMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidPovmError("Povm: no elements");
  const Eigen::Index d = elements_.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& m : elements_) {
    if (m.dim() != d) throw InvalidPovmError("Povm: mixed dimensions");
    if (m.min_eigenvalue() < -1e-10)
      throw InvalidPovmError("Povm: element has negative eigenvalue " +
                             std::to_string(m.min_eigenvalue()));
    sum += m.entries();
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidPovmError("Povm: elements do not sum to the identity");
}

Povm Povm::projective(const Matrix& basis) {
  if (!is_unitary(basis)) throw InvalidPovmError("Povm::projective: basis not unitary");
  std::vector<HermMatrix> elems;
  elems.reserve(static_cast<size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Matrix p = basis.col(j) * basis.col(j).adjoint();
    elems.emplace_back(Matrix((p + p.adjoint()) / 2.0));
  }
  return Povm(std::move(elems));
}

ExtReal measured_renyi_for_povm(const FdState& rho, const FdState& sigma, const Povm& povm,
                                double alpha) {
  check_sandwiched_alpha(alpha);
  if (povm.dim() != rho.total_dim())
    throw DimMismatchError("measured_renyi_for_povm: dimension mismatch");
  std::vector<double> p, q;
  p.reserve(povm.size());
  q.reserve(povm.size());
  for (const auto& m : povm.elements()) {
    p.push_back(std::max(rho.apply(m), 0.0));
    q.push_back(std::max(sigma.apply(m), 0.0));
  }
  return classical_renyi_d(p, q, alpha);
}

std::pair<ExtReal, TestOperator> test_measured_opt(const FdState& rho, const FdState& sigma,
                                                   double alpha, std::uint64_t seed) {
  check_sandwiched_alpha(alpha);
  if (!rho.same_algebra(sigma))
    throw DimMismatchError("test_measured_opt: different algebras");

  const ExtReal dm = dmax(rho, sigma);
  const double lambda_top = dm.is_finite() ? std::exp(std::min(dm.value(), 600.0)) + 1.0 : 1e6;

  HermMatrix best_t = HermMatrix::zero(rho.total_dim());
  double best = -std::numeric_limits<double>::infinity();
  // Neyman-Pearson scan: lambda = 0 plus a geometric sweep up to just past e^Dmax.
  std::vector<double> grid{0.0};
  for (int i = 0; i <= 60; ++i)
    grid.push_back(lambda_top * std::pow(10.0, -6.0 * (1.0 - i / 60.0)));
  for (double lambda : grid) {
    const auto [test, err] = neyman_pearson(rho, sigma, lambda);
    const double val = binary_value(rho, sigma, *test.matrix, alpha).as_double();
    if (val > best && std::isfinite(val)) {
      best = val;
      best_t = *test.matrix;
    }
  }

  // Local refinement through T = sigmoid(H).
  Rng rng(seed);
  Matrix h = logit_of(best_t);
  double step = 0.3;
  for (int it = 0; it < 120; ++it) {
    const Matrix dir = random_hermitian_direction(h.rows(), rng);
    const Matrix cand = h + step * dir / std::max(dir.norm(), 1e-12);
    const HermMatrix t = sigmoid_of(cand);
    const double val = binary_value(rho, sigma, t, alpha).as_double();
    if (val > best && std::isfinite(val)) {
      best = val;
      best_t = t;
      h = cand;
      step = std::min(step * 1.5, 2.0);
    } else {
      step *= 0.7;
      if (step < 1e-9) break;
    }
  }
  TestOperator out;
  out.matrix = best_t;
  return {ExtReal::finite(best), std::move(out)};
}

std::pair<ExtReal, Povm> measured_opt(const FdState& rho, const FdState& sigma, double alpha,
                                      std::uint64_t seed, const MeasuredOptions& options) {
  check_sandwiched_alpha(alpha);
  if (!rho.same_algebra(sigma)) throw DimMismatchError("measured_opt: different algebras");
  const Eigen::Index d = rho.total_dim();
  Rng rng(seed);

  Matrix best_basis = pinched_joint_basis(rho, sigma);
  double best = projective_value(rho, sigma, best_basis, alpha);

  // Swap-role candidate and the eigenbasis of the best two-outcome test; the
  // latter dominates the binary value by outcome refinement, which pins the
  // ordering test-measured <= measured.
  {
    const Matrix swap_basis = pinched_joint_basis(sigma, rho);
    const double val = projective_value(rho, sigma, swap_basis, alpha);
    if (val > best) {
      best = val;
      best_basis = swap_basis;
    }
    const auto [tval, test] = test_measured_opt(rho, sigma, alpha, seed);
    const Matrix tbasis = test.matrix->spectral().eigenvectors;
    const double val2 = projective_value(rho, sigma, tbasis, alpha);
    if (val2 > best) {
      best = val2;
      best_basis = tbasis;
    }
  }

  for (int restart = 0; restart < options.restarts; ++restart) {
    Matrix basis = restart == 0 ? best_basis : random_unitary(d, rng);
    double val = projective_value(rho, sigma, basis, alpha);
    val = refine_basis(rho, sigma, alpha, basis, val, options.refine_steps, rng);
    if (val > best) {
      best = val;
      best_basis = basis;
    }
  }
  return {ExtReal::finite(best), Povm::projective(best_basis)};
}

std::vector<double> regularized_estimate(const FdState& rho, const FdState& sigma,
                                         double alpha, int n_max) {
  check_sandwiched_alpha(alpha);
  if (!rho.same_algebra(sigma))
    throw DimMismatchError("regularized_estimate: different algebras");
  if (n_max < 1) throw ValidationError("regularized_estimate: n_max must be >= 1");
  if (std::pow(static_cast<double>(rho.total_dim()), n_max) > 4096.0)
    throw TooLargeError("regularized_estimate: dimension exceeds the 2^12 guard");

  std::vector<double> out;
  out.reserve(static_cast<size_t>(n_max));
  Rng rng(12345);
  // The n-fold power of the best level-1 basis is itself a measurement, so the
  // per-copy values inherit superadditivity and the gap to D* cannot grow.
  Matrix best_single(0, 0);
  for (int n = 1; n <= n_max; ++n) {
    const FdState rho_n = tensor_power_state(rho, n);
    const FdState sigma_n = tensor_power_state(sigma, n);
    Matrix basis = pinched_joint_basis(rho_n, sigma_n);
    double val = projective_value(rho_n, sigma_n, basis, alpha);
    if (n > 1) {
      Matrix product = best_single;
      for (int i = 1; i < n; ++i) product = kronecker(product, best_single);
      const double pval = projective_value(rho_n, sigma_n, product, alpha);
      if (pval > val) {
        val = pval;
        basis = product;
      }
    }
    if (rho_n.total_dim() <= 256)
      val = refine_basis(rho_n, sigma_n, alpha, basis, val, 40, rng);
    if (n == 1) best_single = basis;
    out.push_back(val / static_cast<double>(n));
  }
  return out;
}

}  // namespace qdiv
