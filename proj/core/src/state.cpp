#include "qdiv/state.hpp"

#include <cmath>

namespace qdiv {

FdState::FdState(std::vector<HermMatrix> blocks, double psd_tol) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("FdState: no blocks");
  weight_ = 0.0;
  for (const auto& blk : blocks_) {
    const double lmin = blk.min_eigenvalue();
    const double scale = std::max(blk.operator_norm(), 1.0);
    if (lmin < -psd_tol * scale)
      throw NegativeSpectrumError("FdState: block has negative eigenvalue " +
                                  std::to_string(lmin));
    weight_ += blk.trace();
  }
}

FdState FdState::from_density(const HermMatrix& density, double psd_tol) {
  return FdState(std::vector<HermMatrix>{density}, psd_tol);
}

FdState FdState::from_diagonal(const RealVector& probabilities) {
  return FdState::from_density(HermMatrix::diagonal(probabilities));
}

std::vector<Eigen::Index> FdState::block_dims() const {
  std::vector<Eigen::Index> dims;
  dims.reserve(blocks_.size());
  for (const auto& blk : blocks_) dims.push_back(blk.dim());
  return dims;
}

Eigen::Index FdState::total_dim() const {
  Eigen::Index n = 0;
  for (const auto& blk : blocks_) n += blk.dim();
  return n;
}

HermMatrix FdState::dense() const {
  if (blocks_.size() == 1) return blocks_[0];
  return direct_sum(blocks_);
}

double FdState::apply(const HermMatrix& x) const {
  if (x.dim() != total_dim()) throw DimMismatchError("FdState::apply: dimension mismatch");
  Eigen::Index off = 0;
  Complex acc = 0.0;
  for (const auto& blk : blocks_) {
    acc += (blk.entries() * x.entries().block(off, off, blk.dim(), blk.dim())).trace();
    off += blk.dim();
  }
  return acc.real();
}

FdState FdState::scaled(double factor) const {
  if (factor < 0) throw ValidationError("FdState::scaled: negative factor");
  std::vector<HermMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& blk : blocks_) out.emplace_back(Matrix(factor * blk.entries()));
  return FdState(std::move(out));
}

bool FdState::same_algebra(const FdState& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k].dim() != other.blocks_[k].dim()) return false;
  return true;
}

bool commutes(const FdState& a, const FdState& b, double rel_tol) {
  if (!a.same_algebra(b)) throw DimMismatchError("commutes: different algebras");
  double norm_a = 0.0, norm_b = 0.0, comm = 0.0;
  for (size_t k = 0; k < a.block_count(); ++k) {
    norm_a = std::max(norm_a, a.block(k).operator_norm());
    norm_b = std::max(norm_b, b.block(k).operator_norm());
    comm = std::max(comm, commutator_norm(a.block(k), b.block(k)));
  }
  return comm <= rel_tol * std::max(norm_a * norm_b, 1e-300);
}

bool support_dominated(const FdState& rho, const FdState& sigma, double tol) {
  if (!rho.same_algebra(sigma)) throw DimMismatchError("support_dominated: different algebras");
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const Projection sr = support_projection(rho.block(k));
    const Projection ss = support_projection(sigma.block(k));
    if (!loewner_leq(sr.matrix(), ss.matrix(), tol)) return false;
  }
  return true;
}

}  // namespace qdiv
