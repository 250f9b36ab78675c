#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdiv/divergences.hpp"

namespace qdiv {

// Two-outcome test 0 <= T <= 1. Quantum tests carry the operator; the
// classical fast path records the likelihood-ratio threshold rank and the
// randomization weight on the boundary item instead of materializing a
// d^n-dimensional matrix.
struct TestOperator {
  std::optional<HermMatrix> matrix;
  std::optional<std::int64_t> threshold_index;
  std::optional<double> gamma;
};

struct ErrorPair {
  double type1 = 0.0;  // rho(1 - T)
  double type2 = 0.0;  // sigma(T)
};

// Optimal test at Lagrange multiplier lambda: the spectral projection of
// {rho - lambda sigma > 0}.
std::pair<TestOperator, ErrorPair> neyman_pearson(const FdState& rho, const FdState& sigma,
                                                  double lambda);

// Auto dispatches commuting inputs to the type-class path and pure-state rho
// to the rank-one secular path; QuantumDense forces the dense eigensolver path.
enum class TestingPath { Auto, Classical, Quantum, QuantumDense };

// nth minimal type I error at type II budget e^{-nr}, achieved by a randomized
// Neyman-Pearson test. log_success = log rho_n(T) is exact even when the
// success probability underflows, which the strong-converse sequence needs.
struct MinType1Result {
  double alpha_star = 0.0;   // minimal type I error probability
  double log_success = 0.0;  // log rho_n(T)
  double log_type2 = 0.0;    // log sigma_n(T), -inf when T = 0
  TestOperator test;
};

MinType1Result min_type1(const FdState& rho, const FdState& sigma, int n, double r,
                         TestingPath path = TestingPath::Auto);

// -(1/n) log(1 - alpha*_{e^{-nr}}) per n; converges to the Hoeffding
// anti-divergence H*_r.
std::vector<double> sce_sequence(const FdState& rho, const FdState& sigma, double r,
                                 std::span<const int> n_list,
                                 TestingPath path = TestingPath::Auto);

// psi~(u) = (1-u) log Q*_{1/(1-u)} for u in (0,1), extended by continuity to
// psi~(0) = log rho(1) and psi~(1) = D_max.
ExtReal psi_tilde(const FdState& rho, const FdState& sigma, double u);

// H*_r = sup_{u in (0,1)} { u r - psi~(u) }, computed by golden-section search
// on the concave objective with the endpoint limits included. -inf iff
// psi~ = +inf on all of (0,1); in finite dimensions that happens exactly when
// s(rho) <= s(sigma) fails (pairs with finite relative entropy but infinite
// Renyi tails need infinite-dimensional algebras).
ExtReal hoeffding_anti_divergence(const FdState& rho, const FdState& sigma, double r);

// Generalized kappa-cutoff rate C_kappa = D*_{1/(1-kappa)}.
ExtReal cutoff_rate(const FdState& rho, const FdState& sigma, double kappa);

// Characterization of D = D_max (the degenerate case): the three testable
// conditions of the equivalence, the constant gamma with rho = gamma sigma s(rho),
// and the closed form H*_r = (r - D)_+ spot-checked on an r-grid.
struct DegenerateReport {
  bool applicable = false;  // s(rho) <= s(sigma)
  bool is_degenerate = false;
  bool cond_b = false;  // D == D_max
  bool cond_c = false;  // [rho, sigma] = 0 and rho sigma^{-1} = gamma s(rho)
  bool cond_d = false;  // [s(rho), sigma] = 0 and rho = gamma sigma s(rho)
  std::optional<double> gamma;
  bool closed_form_verified = false;
};

DegenerateReport degenerate_check(const FdState& rho, const FdState& sigma);

// psi*(alpha) = log Q*_alpha sampled on a grid resolving both the alpha -> 1
// and the alpha -> inf regimes.
struct PsiCurve {
  std::vector<double> alphas;
  std::vector<ExtReal> psi_values;
  double finite_up_to = 0.0;
};

PsiCurve compute_psi_curve(const FdState& rho, const FdState& sigma, double alpha_max = 64.0);

}  // namespace qdiv
