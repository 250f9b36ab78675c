#pragma once

#include <cstdint>

#include "qdiv/divergences.hpp"

namespace qdiv {

struct VariationalResult {
  ExtReal value;
  HermMatrix optimizer;
  int iterations = 0;
  bool converged = false;
};

// The variational objective whose sup (alpha > 1) / inf (alpha < 1) over
// positive x equals Q*_alpha:
//   alpha > 1:  alpha rho(x) - (alpha-1) tr(sigma^((alpha-1)/2alpha) x sigma^((alpha-1)/2alpha))^(alpha/(alpha-1))
//   alpha < 1:  alpha rho(x) + (1-alpha) tr(sigma^((1-alpha)/2alpha) x^{-1} sigma^((1-alpha)/2alpha))^(alpha/(1-alpha))
// x must be PSD for alpha > 1 and positive definite (min eigenvalue > 1e-10)
// for alpha < 1.
double variational_objective(const FdState& rho, const FdState& sigma, double alpha,
                             const HermMatrix& x);

// Optimizer x* = sigma^((1-alpha)/2alpha) A^(alpha-1) sigma^((1-alpha)/2alpha) with
// A = sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha); plugging it in telescopes
// both terms to tr A^alpha. For alpha < 1 the negative power of A is regularized
// by adding eps = 1e-10 to the eigenvalues, and the result is completed off the
// support of sigma to stay positive definite.
VariationalResult closed_form_optimizer(const FdState& rho, const FdState& sigma,
                                        double alpha);

// Independent check of the variational formulas: ascent (alpha > 1) / descent
// (alpha < 1) over the parametrization x = exp(H), H Hermitian, with central
// finite-difference gradients and an adaptive step. Throws NotConverged (carrying
// the best value) if the objective is still moving after max_iters steps.
VariationalResult iterative_solve(const FdState& rho, const FdState& sigma, double alpha,
                                  int max_iters = 4000, std::uint64_t seed = 0);

}  // namespace qdiv
