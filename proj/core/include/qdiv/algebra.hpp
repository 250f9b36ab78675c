#pragma once

#include <utility>
#include <vector>

#include "qdiv/divergences.hpp"

namespace qdiv {

// Unital *-subalgebra of M_d: a basis change U and a pattern of
// (block_dim m_k, multiplicity n_k) pairs with sum m_k * n_k = d. The algebra
// is U (+_k M_{m_k} (x) 1_{n_k}) U^dagger.
class Subalgebra {
 public:
  Subalgebra(Matrix basis_change, std::vector<std::pair<int, int>> pattern);

  static Subalgebra full(Eigen::Index dim);
  static Subalgebra scalars(Eigen::Index dim);                 // C * 1
  static Subalgebra diagonal(Eigen::Index dim);                // diagonal matrices
  static Subalgebra diagonal(Eigen::Index dim, const Matrix& basis_change);

  Eigen::Index ambient_dim() const { return basis_change_.rows(); }
  const Matrix& basis_change() const { return basis_change_; }
  const std::vector<std::pair<int, int>>& pattern() const { return pattern_; }

 private:
  Matrix basis_change_;
  std::vector<std::pair<int, int>> pattern_;
};

// Increasing sequence of subalgebras; containment of consecutive links is
// validated via E_i o E_{i+1} = E_i on the matrix-unit basis.
class SubalgebraChain {
 public:
  explicit SubalgebraChain(std::vector<Subalgebra> links, double tol = 1e-9);

  const std::vector<Subalgebra>& links() const { return links_; }
  Eigen::Index ambient_dim() const { return links_.front().ambient_dim(); }

 private:
  std::vector<Subalgebra> links_;
};

// Trace-preserving conditional expectation onto the subalgebra: unital,
// positive, idempotent and Tr-self-adjoint.
HermMatrix conditional_expectation(const HermMatrix& x, const Subalgebra& n);

// Restriction rho|_N as a state of the block algebra +_k M_{m_k}; block k is
// the partial trace of the k-th block of U^dagger h_rho U over the multiplicity
// factor, so blockwise divergences of restricted pairs equal ambient divergences
// of the conditional-expectation images.
FdState restrict_state(const FdState& rho, const Subalgebra& n);

// Restriction realized inside M_d as the conditional-expectation image.
FdState restrict_state_dense(const FdState& rho, const Subalgebra& n);

// rho restricted to e M e (+) C(1 - e): the compressed block on the range of e
// plus the scalar rho(1 - e).
FdState corner_restrict(const FdState& rho, const Projection& e);

// Pinching of rho by the spectral projections of sigma; eigenvalues of sigma
// grouped at relative gap 1e-10. Returns the pinched state and the number of
// distinct eigenvalues v (the pinching-inequality constant).
std::pair<FdState, int> pinch(const FdState& rho, const FdState& sigma);

// n-fold tensor power; guarded at total_dim^n <= 2^14.
FdState tensor_power_state(const FdState& rho, int n);

// D*_alpha along the chain; nondecreasing, and equal to the ambient value at a
// final full-algebra link.
std::vector<ExtReal> martingale_sequence(const FdState& rho, const FdState& sigma,
                                         const SubalgebraChain& chain, double alpha);

}  // namespace qdiv
