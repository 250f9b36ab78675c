#include "qdiv/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qdiv {

namespace {

// Partial trace over the second (multiplicity) factor of an (m*n) x (m*n) block
// viewed as M_m (x) M_n.
Matrix partial_trace_multiplicity(const Matrix& block, int m, int n) {
  Matrix out = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int t = 0; t < n; ++t) out(i, j) += block(i * n + t, j * n + t);
  return out;
}

}  // namespace

Subalgebra::Subalgebra(Matrix basis_change, std::vector<std::pair<int, int>> pattern)
    : basis_change_(std::move(basis_change)), pattern_(std::move(pattern)) {
  if (!is_unitary(basis_change_))
    throw ValidationError("Subalgebra: basis change is not unitary");
  Eigen::Index total = 0;
  for (auto [m, n] : pattern_) {
    if (m <= 0 || n <= 0) throw ValidationError("Subalgebra: nonpositive pattern entry");
    total += static_cast<Eigen::Index>(m) * n;
  }
  if (total != basis_change_.rows())
    throw ValidationError("Subalgebra: pattern does not cover the ambient dimension");
}

Subalgebra Subalgebra::full(Eigen::Index dim) {
  return Subalgebra(Matrix::Identity(dim, dim), {{static_cast<int>(dim), 1}});
}

Subalgebra Subalgebra::scalars(Eigen::Index dim) {
  return Subalgebra(Matrix::Identity(dim, dim), {{1, static_cast<int>(dim)}});
}

Subalgebra Subalgebra::diagonal(Eigen::Index dim) {
  return diagonal(dim, Matrix::Identity(dim, dim));
}

Subalgebra Subalgebra::diagonal(Eigen::Index dim, const Matrix& basis_change) {
  std::vector<std::pair<int, int>> pattern(static_cast<size_t>(dim), {1, 1});
  return Subalgebra(basis_change, std::move(pattern));
}

SubalgebraChain::SubalgebraChain(std::vector<Subalgebra> links, double tol)
    : links_(std::move(links)) {
  if (links_.empty()) throw ValidationError("SubalgebraChain: empty chain");
  const Eigen::Index d = links_.front().ambient_dim();
  for (const auto& link : links_)
    if (link.ambient_dim() != d)
      throw DimMismatchError("SubalgebraChain: mixed ambient dimensions");
  // Containment on a spanning set: E_i(E_{i+1}(e_rs)) = E_i(e_rs) for all
  // matrix units e_rs of M_d (conditional expectations are linear).
  for (size_t i = 0; i + 1 < links_.size(); ++i) {
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index s = r; s < d; ++s) {
        Matrix unit = Matrix::Zero(d, d);
        // Hermitian combinations of the matrix unit pair span the same space.
        unit(r, s) += 0.5;
        unit(s, r) += 0.5;
        const HermMatrix x(unit);
        const HermMatrix inner = conditional_expectation(x, links_[i + 1]);
        const Matrix lhs = conditional_expectation(inner, links_[i]).entries();
        const Matrix rhs = conditional_expectation(x, links_[i]).entries();
        double dev = (lhs - rhs).cwiseAbs().maxCoeff();
        if (r != s) {
          Matrix unit_im = Matrix::Zero(d, d);
          unit_im(r, s) = Complex(0.0, -0.5);
          unit_im(s, r) = Complex(0.0, 0.5);
          const HermMatrix y(unit_im);
          const HermMatrix inner2 = conditional_expectation(y, links_[i + 1]);
          dev = std::max(dev, (conditional_expectation(inner2, links_[i]).entries() -
                               conditional_expectation(y, links_[i]).entries())
                                  .cwiseAbs()
                                  .maxCoeff());
        }
        if (dev > tol)
          throw ValidationError("SubalgebraChain: link " + std::to_string(i) +
                                " is not contained in link " + std::to_string(i + 1));
      }
    }
  }
}

HermMatrix conditional_expectation(const HermMatrix& x, const Subalgebra& n) {
  if (x.dim() != n.ambient_dim())
    throw DimMismatchError("conditional_expectation: dimension mismatch");
  const Matrix& u = n.basis_change();
  const Matrix y = u.adjoint() * x.entries() * u;
  Matrix out = Matrix::Zero(x.dim(), x.dim());
  Eigen::Index off = 0;
  for (auto [m, nk] : n.pattern()) {
    const Matrix blk = y.block(off, off, m * nk, m * nk);
    const Matrix reduced = partial_trace_multiplicity(blk, m, nk) / static_cast<double>(nk);
    out.block(off, off, m * nk, m * nk) =
        kronecker(reduced, Matrix::Identity(nk, nk));
    off += static_cast<Eigen::Index>(m) * nk;
  }
  const Matrix back = u * out * u.adjoint();
  return HermMatrix((back + back.adjoint()) / 2.0);
}

FdState restrict_state(const FdState& rho, const Subalgebra& n) {
  if (rho.total_dim() != n.ambient_dim())
    throw DimMismatchError("restrict_state: dimension mismatch");
  const Matrix& u = n.basis_change();
  const Matrix y = u.adjoint() * rho.dense().entries() * u;
  std::vector<HermMatrix> blocks;
  blocks.reserve(n.pattern().size());
  Eigen::Index off = 0;
  for (auto [m, nk] : n.pattern()) {
    const Matrix blk = y.block(off, off, m * nk, m * nk);
    const Matrix reduced = partial_trace_multiplicity(blk, m, nk);
    blocks.emplace_back(Matrix((reduced + reduced.adjoint()) / 2.0));
    off += static_cast<Eigen::Index>(m) * nk;
  }
  return FdState(std::move(blocks));
}

FdState restrict_state_dense(const FdState& rho, const Subalgebra& n) {
  return FdState::from_density(conditional_expectation(rho.dense(), n));
}

FdState corner_restrict(const FdState& rho, const Projection& e) {
  const HermMatrix h = rho.dense();
  if (h.dim() != e.dim()) throw DimMismatchError("corner_restrict: dimension mismatch");
  const double scalar = h.trace() - (e.entries() * h.entries() * e.entries()).trace().real();
  std::vector<HermMatrix> blocks;
  if (e.rank() > 0) {
    const Matrix& v = e.range_isometry();
    Matrix compressed = v.adjoint() * h.entries() * v;
    blocks.emplace_back(Matrix((compressed + compressed.adjoint()) / 2.0));
  } else {
    blocks.emplace_back(Matrix::Zero(1, 1));
  }
  Matrix s(1, 1);
  s(0, 0) = std::max(scalar, 0.0);
  blocks.emplace_back(s);
  return FdState(std::move(blocks));
}

std::pair<FdState, int> pinch(const FdState& rho, const FdState& sigma) {
  if (!rho.same_algebra(sigma)) throw DimMismatchError("pinch: different algebras");
  // Global eigenvalue grouping across blocks: numerically equal eigenvalues
  // must share a pinching projection or the constant v is wrong.
  struct Entry {
    double value;
    size_t block;
    Eigen::Index index;
  };
  std::vector<Entry> entries;
  double scale = 0.0;
  for (size_t k = 0; k < sigma.block_count(); ++k) {
    const auto& lam = sigma.block(k).spectral().eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      entries.push_back({lam(i), k, i});
      scale = std::max(scale, std::abs(lam(i)));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });
  const double gap = 1e-10 * std::max(scale, 1.0);

  std::vector<std::vector<std::vector<Eigen::Index>>> groups;  // group -> block -> indices
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i == 0 || entries[i].value - entries[i - 1].value > gap)
      groups.emplace_back(sigma.block_count());
    groups.back()[entries[i].block].push_back(entries[i].index);
  }

  std::vector<HermMatrix> out_blocks;
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const auto& sp = sigma.block(k).spectral();
    Matrix acc = Matrix::Zero(rho.block(k).dim(), rho.block(k).dim());
    for (const auto& group : groups) {
      const auto& idx = group[k];
      if (idx.empty()) continue;
      Matrix v(sp.eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
      for (size_t c = 0; c < idx.size(); ++c) v.col(static_cast<Eigen::Index>(c)) =
          sp.eigenvectors.col(idx[c]);
      const Matrix p = v * v.adjoint();
      acc += p * rho.block(k).entries() * p;
    }
    out_blocks.emplace_back(Matrix((acc + acc.adjoint()) / 2.0));
  }
  return {FdState(std::move(out_blocks)), static_cast<int>(groups.size())};
}

FdState tensor_power_state(const FdState& rho, int n) {
  if (n < 1) throw ValidationError("tensor_power_state: n must be >= 1");
  double dims = std::pow(static_cast<double>(rho.total_dim()), n);
  if (dims > 16384.0)
    throw TooLargeError("tensor_power_state: dimension " + std::to_string(dims) +
                        " exceeds the 2^14 guard");
  HermMatrix acc = rho.dense();
  for (int i = 1; i < n; ++i) acc = tensor(acc, rho.dense());
  return FdState::from_density(acc);
}

std::vector<ExtReal> martingale_sequence(const FdState& rho, const FdState& sigma,
                                         const SubalgebraChain& chain, double alpha) {
  check_sandwiched_alpha(alpha);
  std::vector<ExtReal> out;
  out.reserve(chain.links().size());
  for (const auto& link : chain.links()) {
    const FdState r = restrict_state_dense(rho, link);
    const FdState s = restrict_state_dense(sigma, link);
    out.push_back(sandwiched_d(r, s, alpha));
  }
  return out;
}

}  // namespace qdiv
