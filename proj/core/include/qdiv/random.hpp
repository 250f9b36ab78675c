#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qdiv/state.hpp"

namespace qdiv {

using Rng = std::mt19937_64;

// Haar-ish random unitary: QR of a Ginibre matrix with the R-diagonal phases
// absorbed into Q.
Matrix random_unitary(Eigen::Index dim, Rng& rng);

// Ginibre matrix with iid standard complex Gaussian entries.
Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Random rank-r density matrix (trace 1) on M_d, full rank when rank == dim.
HermMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng);

// Random PSD matrix of the given rank, trace of order 1 but not normalized.
HermMatrix random_psd(Eigen::Index dim, Eigen::Index rank, Rng& rng);

// Random state pair with prescribed support pattern. "equal" draws both
// supports equal to a common rank-r subspace; "nested" draws s(rho) strictly
// inside s(sigma).
struct StatePair {
  FdState rho;
  FdState sigma;
};
StatePair random_full_pair(Eigen::Index dim, Rng& rng);
StatePair random_equal_support_pair(Eigen::Index dim, Eigen::Index rank, Rng& rng);
StatePair random_nested_support_pair(Eigen::Index dim, Eigen::Index rank_rho,
                                     Eigen::Index rank_sigma, Rng& rng);

// Random quantum channel in operator-sum form, sum_i K_i^dagger K_i = 1,
// acting on M_d with the given Kraus rank.
std::vector<Matrix> random_kraus_channel(Eigen::Index dim, int kraus_rank, Rng& rng);

FdState apply_channel(const std::vector<Matrix>& kraus, const FdState& rho);

}  // namespace qdiv
