#pragma once

#include <vector>

#include "qdiv/linalg.hpp"

namespace qdiv {

// Positive linear functional on a direct-sum matrix algebra M_{d_1} + ... + M_{d_m},
// represented by one PSD density block per summand. The weight is the total trace;
// a state has weight 1. Divergences accept arbitrary positive functionals and
// leave normalization to callers.
class FdState {
 public:
  explicit FdState(std::vector<HermMatrix> blocks, double psd_tol = kSupportTol);

  static FdState from_density(const HermMatrix& density, double psd_tol = kSupportTol);
  static FdState from_diagonal(const RealVector& probabilities);

  const std::vector<HermMatrix>& blocks() const { return blocks_; }
  const HermMatrix& block(size_t k) const { return blocks_[k]; }
  size_t block_count() const { return blocks_.size(); }

  std::vector<Eigen::Index> block_dims() const;
  Eigen::Index total_dim() const;

  double weight() const { return weight_; }
  bool is_state(double tol = 1e-10) const { return std::abs(weight_ - 1.0) <= tol; }

  // Density as one block-diagonal matrix on the enveloping M_d.
  HermMatrix dense() const;

  // Functional applied to a dense observable on the enveloping algebra.
  double apply(const HermMatrix& x) const;

  FdState scaled(double factor) const;

  bool same_algebra(const FdState& other) const;

 private:
  std::vector<HermMatrix> blocks_;
  double weight_;
};

bool commutes(const FdState& a, const FdState& b, double rel_tol = 1e-10);

// Blockwise support containment s(rho) <= s(sigma), checked via the Loewner
// order on the support projections.
bool support_dominated(const FdState& rho, const FdState& sigma, double tol = 1e-10);

}  // namespace qdiv
