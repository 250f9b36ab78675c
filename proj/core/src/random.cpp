#include "qdiv/random.hpp"

namespace qdiv {

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_unitary(Eigen::Index dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

HermMatrix random_psd(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  const Matrix v = random_ginibre(dim, rank, rng);
  Matrix m = v * v.adjoint() / static_cast<double>(dim);
  return HermMatrix((m + m.adjoint()) / 2.0);
}

HermMatrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  HermMatrix m = random_psd(dim, rank, rng);
  return HermMatrix(m.entries() / m.trace());
}

StatePair random_full_pair(Eigen::Index dim, Rng& rng) {
  return {FdState::from_density(random_density(dim, dim, rng)),
          FdState::from_density(random_density(dim, dim, rng))};
}

namespace {

// Density supported exactly on the range of the isometry v (dim x rank).
HermMatrix density_on(const Matrix& v, Rng& rng) {
  const Eigen::Index rank = v.cols();
  HermMatrix small = random_density(rank, rank, rng);
  Matrix big = v * small.entries() * v.adjoint();
  return HermMatrix((big + big.adjoint()) / 2.0);
}

}  // namespace

StatePair random_equal_support_pair(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  const Matrix u = random_unitary(dim, rng);
  const Matrix v = u.leftCols(rank);
  return {FdState::from_density(density_on(v, rng)),
          FdState::from_density(density_on(v, rng))};
}

StatePair random_nested_support_pair(Eigen::Index dim, Eigen::Index rank_rho,
                                     Eigen::Index rank_sigma, Rng& rng) {
  if (rank_rho > rank_sigma) throw ValidationError("nested pair: rank_rho > rank_sigma");
  const Matrix u = random_unitary(dim, rng);
  return {FdState::from_density(density_on(u.leftCols(rank_rho), rng)),
          FdState::from_density(density_on(u.leftCols(rank_sigma), rng))};
}

std::vector<Matrix> random_kraus_channel(Eigen::Index dim, int kraus_rank, Rng& rng) {
  // Isometry C^d -> C^(d*k) via QR; its d x d blocks are the Kraus operators.
  const Matrix g = random_ginibre(dim * kraus_rank, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = Matrix(qr.householderQ()).leftCols(dim);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<size_t>(kraus_rank));
  for (int i = 0; i < kraus_rank; ++i) kraus.push_back(q.middleRows(i * dim, dim));
  return kraus;
}

FdState apply_channel(const std::vector<Matrix>& kraus, const FdState& rho) {
  const HermMatrix h = rho.dense();
  Matrix out = Matrix::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& k : kraus) out += k * h.entries() * k.adjoint();
  return FdState::from_density(HermMatrix((out + out.adjoint()) / 2.0));
}

}  // namespace qdiv
