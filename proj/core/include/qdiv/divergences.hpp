#pragma once

#include <span>

#include "qdiv/extreal.hpp"
#include "qdiv/state.hpp"

namespace qdiv {

// Admissible alpha for the sandwiched family: [1/2, inf) \ {1}.
void check_sandwiched_alpha(double alpha);
// Admissible alpha for the standard family: [0, inf) \ {1}.
void check_standard_alpha(double alpha);

// log of Q*_alpha(rho||sigma) = log tr(sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha,
// powers as pseudo-calculus on the support of sigma. For alpha > 1 the support
// condition s(rho) <= s(sigma) is checked first; +inf on violation. Kept in the
// log domain so large alpha does not overflow.
ExtReal log_sandwiched_q(const FdState& rho, const FdState& sigma, double alpha);
ExtReal sandwiched_q(const FdState& rho, const FdState& sigma, double alpha);
ExtReal sandwiched_d(const FdState& rho, const FdState& sigma, double alpha);

// Standard (Petz-type) family: log tr(rho^alpha sigma^(1-alpha)).
ExtReal log_standard_q(const FdState& rho, const FdState& sigma, double alpha);
ExtReal standard_q(const FdState& rho, const FdState& sigma, double alpha);
ExtReal standard_d(const FdState& rho, const FdState& sigma, double alpha);

// Umegaki relative entropy tr rho (log rho - log sigma), +inf when
// s(rho) <= s(sigma) fails.
ExtReal relative_entropy(const FdState& rho, const FdState& sigma);

// Max-relative entropy: log of the largest eigenvalue of
// sigma^(-1/2) rho sigma^(-1/2) on the support of sigma.
ExtReal dmax(const FdState& rho, const FdState& sigma);

// tr(sigma^(1/2) rho sigma^(1/2))^(1/2); equals exp(-D*_{1/2}/2) for states.
double fidelity(const FdState& rho, const FdState& sigma);

// Classical Renyi log-Q for discrete mass vectors with the usual support
// conventions (alpha > 1: +inf when p charges outside q's support).
ExtReal classical_log_q(std::span<const double> p, std::span<const double> q, double alpha);
ExtReal classical_renyi_d(std::span<const double> p, std::span<const double> q, double alpha);

}  // namespace qdiv
