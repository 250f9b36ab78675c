#include "qdiv/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qdiv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(xs)) tolerating -inf entries; -inf for the empty/all-(-inf) sum.
double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

void require_same_algebra(const FdState& a, const FdState& b, const char* where) {
  if (!a.same_algebra(b)) throw DimMismatchError(std::string(where) + ": different algebras");
}

// Positive spectrum of sigma^p rho sigma^p (p = (1-alpha)/(2 alpha)) for one block,
// as log-eigenvalues. Pseudo-powers on the support of sigma.
std::vector<double> sandwiched_log_spectrum(const HermMatrix& rho, const HermMatrix& sigma,
                                            double alpha) {
  const double p = (1.0 - alpha) / (2.0 * alpha);
  const HermMatrix sig_p = pow_on_support(sigma, p);
  Matrix inner = sig_p.entries() * rho.entries() * sig_p.entries();
  const HermMatrix a((inner + inner.adjoint()) / 2.0);
  const auto& lam = a.spectral().eigenvalues;
  const double cutoff = kSupportTol * std::max(lam.size() ? lam(lam.size() - 1) : 0.0, 1.0);
  std::vector<double> logs;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cutoff) logs.push_back(std::log(lam(i)));
  return logs;
}

}  // namespace

void check_sandwiched_alpha(double alpha) {
  if (!(alpha >= 0.5) || alpha == 1.0)
    throw BadAlphaError("alpha must lie in [1/2, inf) \\ {1}, got " + std::to_string(alpha));
}

void check_standard_alpha(double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0)
    throw BadAlphaError("alpha must lie in [0, inf) \\ {1}, got " + std::to_string(alpha));
}

ExtReal log_sandwiched_q(const FdState& rho, const FdState& sigma, double alpha) {
  check_sandwiched_alpha(alpha);
  require_same_algebra(rho, sigma, "sandwiched_q");
  if (alpha > 1.0 && !support_dominated(rho, sigma)) return ExtReal::pos_inf();
  std::vector<double> terms;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    for (double l : sandwiched_log_spectrum(rho.block(k), sigma.block(k), alpha))
      terms.push_back(alpha * l);
  }
  const double lq = log_sum_exp(terms);
  return lq == kNegInf ? ExtReal::neg_inf() : ExtReal::finite(lq);
}

ExtReal sandwiched_q(const FdState& rho, const FdState& sigma, double alpha) {
  return log_sandwiched_q(rho, sigma, alpha).exp();
}

ExtReal sandwiched_d(const FdState& rho, const FdState& sigma, double alpha) {
  return renyi_from_log_q(log_sandwiched_q(rho, sigma, alpha), alpha);
}

ExtReal log_standard_q(const FdState& rho, const FdState& sigma, double alpha) {
  check_standard_alpha(alpha);
  require_same_algebra(rho, sigma, "standard_q");
  if (alpha > 1.0 && !support_dominated(rho, sigma)) return ExtReal::pos_inf();
  double q = 0.0;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const HermMatrix ra = pow_on_support(rho.block(k), alpha);
    const HermMatrix sb = pow_on_support(sigma.block(k), 1.0 - alpha);
    q += (ra.entries() * sb.entries()).trace().real();
  }
  if (q <= 0.0) return ExtReal::neg_inf();
  return ExtReal::finite(std::log(q));
}

ExtReal standard_q(const FdState& rho, const FdState& sigma, double alpha) {
  return log_standard_q(rho, sigma, alpha).exp();
}

ExtReal standard_d(const FdState& rho, const FdState& sigma, double alpha) {
  return renyi_from_log_q(log_standard_q(rho, sigma, alpha), alpha);
}

ExtReal relative_entropy(const FdState& rho, const FdState& sigma) {
  require_same_algebra(rho, sigma, "relative_entropy");
  if (!support_dominated(rho, sigma)) return ExtReal::pos_inf();
  double d = 0.0;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const auto& lam = rho.block(k).spectral().eigenvalues;
    const double cutoff =
        kSupportTol * std::max(lam.size() ? lam(lam.size() - 1) : 0.0, 1.0);
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      if (lam(i) > cutoff) d += lam(i) * std::log(lam(i));
    const HermMatrix log_sigma =
        fn_on_support(sigma.block(k), [](double t) { return std::log(t); });
    d -= (rho.block(k).entries() * log_sigma.entries()).trace().real();
  }
  return ExtReal::finite(d);
}

ExtReal dmax(const FdState& rho, const FdState& sigma) {
  require_same_algebra(rho, sigma, "dmax");
  if (!support_dominated(rho, sigma)) return ExtReal::pos_inf();
  double top = 0.0;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const HermMatrix inv_sqrt = pow_on_support(sigma.block(k), -0.5);
    Matrix x = inv_sqrt.entries() * rho.block(k).entries() * inv_sqrt.entries();
    top = std::max(top, HermMatrix((x + x.adjoint()) / 2.0).max_eigenvalue());
  }
  return ExtReal::log_of(std::max(top, 0.0));
}

double fidelity(const FdState& rho, const FdState& sigma) {
  require_same_algebra(rho, sigma, "fidelity");
  double f = 0.0;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const HermMatrix sqrt_sigma = pow_on_support(sigma.block(k), 0.5);
    Matrix inner = sqrt_sigma.entries() * rho.block(k).entries() * sqrt_sigma.entries();
    const HermMatrix sandwiched((inner + inner.adjoint()) / 2.0);
    const auto& lam = sandwiched.spectral().eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      if (lam(i) > 0) f += std::sqrt(lam(i));
  }
  return f;
}

ExtReal classical_log_q(std::span<const double> p, std::span<const double> q, double alpha) {
  if (p.size() != q.size()) throw DimMismatchError("classical_log_q: size mismatch");
  std::vector<double> terms;
  for (size_t i = 0; i < p.size(); ++i) {
    const bool p_zero = p[i] <= 0.0;
    const bool q_zero = q[i] <= 0.0;
    if (p_zero) continue;  // 0^alpha * x^(1-alpha) = 0 for alpha > 0
    if (q_zero) {
      if (alpha > 1.0) return ExtReal::pos_inf();
      continue;  // alpha < 1: p^alpha * 0^(1-alpha) = 0
    }
    terms.push_back(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  }
  const double lq = log_sum_exp(terms);
  return lq == kNegInf ? ExtReal::neg_inf() : ExtReal::finite(lq);
}

ExtReal classical_renyi_d(std::span<const double> p, std::span<const double> q, double alpha) {
  return renyi_from_log_q(classical_log_q(p, q, alpha), alpha);
}

}  // namespace qdiv
