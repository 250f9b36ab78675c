#include "qdiv/variational.hpp"

#include <cmath>

#include "qdiv/random.hpp"

namespace qdiv {

namespace {

constexpr double kPosDefTol = 1e-10;
constexpr double kRegEps = 1e-10;

double trace_power(const HermMatrix& a, double exponent) {
  const auto& lam = a.spectral().eigenvalues;
  const double cutoff = kSupportTol * std::max(lam.size() ? lam(lam.size() - 1) : 0.0, 1.0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cutoff) acc += std::pow(lam(i), exponent);
  return acc;
}

HermMatrix sandwich(const HermMatrix& outer, const HermMatrix& mid) {
  Matrix m = outer.entries() * mid.entries() * outer.entries();
  return HermMatrix((m + m.adjoint()) / 2.0);
}

}  // namespace

double variational_objective(const FdState& rho, const FdState& sigma, double alpha,
                             const HermMatrix& x) {
  check_sandwiched_alpha(alpha);
  if (x.dim() != rho.total_dim())
    throw DimMismatchError("variational_objective: x has wrong dimension");
  const HermMatrix h_sigma = sigma.dense();
  if (alpha > 1.0) {
    if (x.min_eigenvalue() < -kPosDefTol)
      throw NegativeSpectrumError("variational_objective: x not PSD");
    const HermMatrix sig_q = pow_on_support(h_sigma, (alpha - 1.0) / (2.0 * alpha));
    const double tr = trace_power(sandwich(sig_q, x), alpha / (alpha - 1.0));
    return alpha * rho.apply(x) - (alpha - 1.0) * tr;
  }
  if (x.min_eigenvalue() <= kPosDefTol)
    throw NotPositiveDefiniteError("variational_objective: x must be positive definite");
  const HermMatrix x_inv = fn_on_support(x, [](double t) { return 1.0 / t; });
  const HermMatrix sig_p = pow_on_support(h_sigma, (1.0 - alpha) / (2.0 * alpha));
  const double tr = trace_power(sandwich(sig_p, x_inv), alpha / (1.0 - alpha));
  return alpha * rho.apply(x) + (1.0 - alpha) * tr;
}

VariationalResult closed_form_optimizer(const FdState& rho, const FdState& sigma,
                                        double alpha) {
  check_sandwiched_alpha(alpha);
  if (!rho.same_algebra(sigma))
    throw DimMismatchError("closed_form_optimizer: different algebras");
  if (alpha > 1.0 && !support_dominated(rho, sigma))
    throw SupportViolationError("closed_form_optimizer: s(rho) <= s(sigma) required for alpha > 1");

  const HermMatrix h_rho = rho.dense();
  const HermMatrix h_sigma = sigma.dense();
  const HermMatrix sig_p = pow_on_support(h_sigma, (1.0 - alpha) / (2.0 * alpha));
  const HermMatrix a = sandwich(sig_p, h_rho);

  HermMatrix mid = HermMatrix::zero(a.dim());
  if (alpha > 1.0) {
    mid = pow_on_support(a, alpha - 1.0);
  } else {
    // Negative power: regularize A's spectrum eigenvalue by eigenvalue, so
    // directions where A vanishes inside the support of sigma get the large
    // value eps^(alpha-1) instead of blowing up. The infimum is approached
    // from above there.
    const auto& sa = a.spectral();
    RealVector mapped(sa.eigenvalues.size());
    for (Eigen::Index i = 0; i < sa.eigenvalues.size(); ++i)
      mapped(i) = std::pow(std::max(sa.eigenvalues(i), 0.0) + kRegEps, alpha - 1.0);
    Matrix m = sa.eigenvectors * mapped.asDiagonal() * sa.eigenvectors.adjoint();
    mid = HermMatrix((m + m.adjoint()) / 2.0);
  }
  HermMatrix x_star = sandwich(sig_p, mid);
  if (alpha < 1.0) {
    // Complete off the support of sigma; rho does not charge that corner when
    // s(rho) <= s(sigma), and the sigma-sandwich kills it, so the objective is
    // unchanged while x stays positive definite.
    const Projection supp = support_projection(h_sigma);
    x_star = HermMatrix(x_star.entries() + Matrix::Identity(x_star.dim(), x_star.dim()) -
                        supp.entries());
  }
  VariationalResult res{ExtReal::finite(variational_objective(rho, sigma, alpha, x_star)),
                        x_star, 0, true};
  return res;
}

VariationalResult iterative_solve(const FdState& rho, const FdState& sigma, double alpha,
                                  int max_iters, std::uint64_t seed) {
  check_sandwiched_alpha(alpha);
  const Eigen::Index d = rho.total_dim();
  const int sign = alpha > 1.0 ? 1 : -1;  // ascend for alpha > 1, descend below

  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  // x = exp(H) keeps iterates positive definite without projection.
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      const Complex z = i == j ? Complex(0.05 * g(rng), 0.0)
                               : Complex(0.05 * g(rng), 0.05 * g(rng));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }

  const auto value_at = [&](const Matrix& hm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
    Matrix x = es.eigenvectors() *
               es.eigenvalues().array().exp().matrix().asDiagonal() *
               es.eigenvectors().adjoint();
    return variational_objective(rho, sigma, alpha, HermMatrix((x + x.adjoint()) / 2.0));
  };

  double fval = value_at(h);
  const double fd_h = 1e-5;
  const auto finish = [&](int iters, bool converged) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix x = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
               es.eigenvectors().adjoint();
    VariationalResult res{ExtReal::finite(fval), HermMatrix((x + x.adjoint()) / 2.0), iters,
                          converged};
    return res;
  };
  const auto gradient_at = [&](const Matrix& hm0) {
    // Central finite differences on the d^2 real coordinates of H.
    Matrix grad = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        Matrix hp = hm0, hm = hm0;
        hp(i, j) += fd_h;
        hp(j, i) = std::conj(hp(i, j));
        hm(i, j) -= fd_h;
        hm(j, i) = std::conj(hm(i, j));
        const double dre = (value_at(hp) - value_at(hm)) / (2.0 * fd_h);
        if (i == j) {
          grad(i, i) = dre;
          continue;
        }
        hp = hm0;
        hm = hm0;
        hp(i, j) += Complex(0.0, fd_h);
        hp(j, i) = std::conj(hp(i, j));
        hm(i, j) -= Complex(0.0, fd_h);
        hm(j, i) = std::conj(hm(i, j));
        const double dim_ = (value_at(hp) - value_at(hm)) / (2.0 * fd_h);
        grad(i, j) = Complex(dre, dim_);
        grad(j, i) = std::conj(grad(i, j));
      }
    }
    return grad;
  };

  Matrix grad = gradient_at(h);
  Matrix h_prev = h, grad_prev = grad;
  double step = 0.1 / std::max(grad.norm(), 1.0);
  for (int iter = 0; iter < max_iters; ++iter) {
    const double gnorm = grad.norm();
    if (gnorm < 1e-12) return finish(iter + 1, true);
    if (iter > 0) {
      // Barzilai-Borwein spectral step, curvature-scaled.
      const Matrix dh = h - h_prev;
      const Matrix dg = grad - grad_prev;
      const double den = dg.squaredNorm();
      const double num = std::abs((dh.adjoint() * dg).trace().real());
      if (den > 1e-300 && num > 0) step = std::clamp(num / den, 1e-12, 1e4);
    }
    bool moved = false;
    double improvement = 0.0;
    double t = step;
    for (int tries = 0; tries < 60 && !moved; ++tries) {
      const Matrix cand = h + (sign * t) * grad;
      const double fcand = value_at(cand);
      if (sign * (fcand - fval) > 0) {
        improvement = std::abs(fcand - fval);
        h_prev = h;
        grad_prev = grad;
        h = cand;
        fval = fcand;
        grad = gradient_at(h);
        moved = true;
      } else {
        t *= 0.5;
        if (t < 1e-14) break;
      }
    }
    if (!moved) return finish(iter + 1, true);  // no ascent direction left
    if (improvement < 1e-10) return finish(iter + 1, true);
  }
  throw NotConvergedError("iterative_solve: objective still moving after " +
                              std::to_string(max_iters) + " iterations",
                          fval);
}

}  // namespace qdiv
