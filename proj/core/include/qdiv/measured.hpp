#pragma once

#include <cstdint>
#include <vector>

#include "qdiv/hypothesis.hpp"

namespace qdiv {

// Finite POVM: PSD elements summing to the identity within 1e-10.
class Povm {
 public:
  explicit Povm(std::vector<HermMatrix> elements);

  const std::vector<HermMatrix>& elements() const { return elements_; }
  size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().dim(); }

  // Rank-one projective measurement onto the columns of a unitary.
  static Povm projective(const Matrix& basis);

 private:
  std::vector<HermMatrix> elements_;
};

// Classical Renyi divergence of the outcome distributions M(rho), M(sigma).
ExtReal measured_renyi_for_povm(const FdState& rho, const FdState& sigma, const Povm& povm,
                                double alpha);

// Heuristic supremum of the two-outcome classical Renyi divergence over tests
// 0 <= T <= 1: Neyman-Pearson scan over a lambda grid followed by local
// refinement in a Hermitian-logit parametrization T = (1 + exp(-H))^{-1}.
std::pair<ExtReal, TestOperator> test_measured_opt(const FdState& rho, const FdState& sigma,
                                                   double alpha, std::uint64_t seed = 0);

// Heuristic supremum over measurements, restricted to rank-one projective
// POVMs with seeded restarts; candidates include the joint refinement of the
// sigma eigenbasis and the best two-outcome test, so the value is never below
// the test-measured one.
struct MeasuredOptions {
  int restarts = 16;
  int refine_steps = 60;
};
std::pair<ExtReal, Povm> measured_opt(const FdState& rho, const FdState& sigma, double alpha,
                                      std::uint64_t seed = 0,
                                      const MeasuredOptions& options = {});

// (1/n) measured value on the n-fold tensor powers for n = 1..n_max, using the
// sigma^(x)n eigenbasis refined inside degenerate eigenspaces; approaches
// D*_alpha from below.
std::vector<double> regularized_estimate(const FdState& rho, const FdState& sigma,
                                         double alpha, int n_max);

}  // namespace qdiv
