#include "qdiv/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qdiv {

namespace {

extern "C" void zheevd_(const char* jobz, const char* uplo, const int* n, Complex* a,
                        const int* lda, double* w, Complex* work, const int* lwork,
                        double* rwork, const int* lrwork, int* iwork, const int* liwork,
                        int* info);

// Deterministic eigenvector phases: first component with modulus > eps is made
// real positive. Keeps outputs reproducible across runs and backends.
void fix_phases(Matrix& u) {
  const double eps = 1e-12;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double m = std::abs(u(i, j));
      if (m > eps) {
        u.col(j) *= std::conj(u(i, j)) / m;
        break;
      }
    }
  }
}

Spectral compute_spectral(const Matrix& entries) {
  const int n = static_cast<int>(entries.rows());
  Spectral s;
  if (n == 0) {
    s.eigenvalues = RealVector(0);
    s.eigenvectors = Matrix(0, 0);
    return s;
  }
  // LAPACK zheevd is noticeably faster than Eigen's QL iteration for the
  // tensor-power dimensions used by the hypothesis-testing experiments.
  Matrix a = entries;
  RealVector w(n);
  int lwork = -1, lrwork = -1, liwork = -1, info = 0;
  Complex wkopt;
  double rwkopt;
  int iwkopt;
  zheevd_("V", "L", &n, a.data(), &n, w.data(), &wkopt, &lwork, &rwkopt, &lrwork, &iwkopt,
          &liwork, &info);
  lwork = static_cast<int>(wkopt.real());
  lrwork = static_cast<int>(rwkopt);
  liwork = iwkopt;
  std::vector<Complex> work(static_cast<size_t>(std::max(lwork, 1)));
  std::vector<double> rwork(static_cast<size_t>(std::max(lrwork, 1)));
  std::vector<int> iwork(static_cast<size_t>(std::max(liwork, 1)));
  zheevd_("V", "L", &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork,
          iwork.data(), &liwork, &info);
  if (info != 0) {
    // zheevd can fail to converge on rare inputs; Eigen's solver is the fallback.
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries);
    if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
  } else {
    s.eigenvalues = w;
    s.eigenvectors = a;
  }
  fix_phases(s.eigenvectors);
  return s;
}

double spectral_cutoff(const RealVector& lambda, double tol) {
  const double lmax = lambda.size() ? lambda(lambda.size() - 1) : 0.0;
  return tol * std::max(lmax, 1.0);
}

void check_psd(const RealVector& lambda, double tol) {
  if (lambda.size() == 0) return;
  const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1)));
  if (lambda(0) < -tol * std::max(scale, 1.0))
    throw NegativeSpectrumError("matrix is not positive semidefinite: min eigenvalue " +
                                std::to_string(lambda(0)));
}

}  // namespace

HermMatrix::HermMatrix(const Matrix& entries) : cell_(std::make_shared<SpectralCell>()) {
  if (entries.rows() != entries.cols())
    throw NonHermitianError("HermMatrix: matrix is not square");
  const double scale = entries.size() ? entries.cwiseAbs().maxCoeff() : 0.0;
  const double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (entries.size() && dev > 1e-12 * std::max(scale, 1.0))
    throw NonHermitianError("HermMatrix: deviation from A = A^dagger is " +
                            std::to_string(dev));
  entries_ = (entries + entries.adjoint()) / 2.0;
}

HermMatrix HermMatrix::identity(Eigen::Index dim) {
  return HermMatrix(Matrix::Identity(dim, dim));
}

HermMatrix HermMatrix::zero(Eigen::Index dim) { return HermMatrix(Matrix::Zero(dim, dim)); }

HermMatrix HermMatrix::diagonal(const RealVector& diag) {
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
  return HermMatrix(m);
}

const Spectral& HermMatrix::spectral() const& {
  std::call_once(cell_->once, [this] { cell_->value = compute_spectral(entries_); });
  return cell_->value;
}

double HermMatrix::operator_norm() const {
  const auto& lam = spectral().eigenvalues;
  if (lam.size() == 0) return 0.0;
  return std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
}

double HermMatrix::min_eigenvalue() const {
  const auto& lam = spectral().eigenvalues;
  return lam.size() ? lam(0) : 0.0;
}

double HermMatrix::max_eigenvalue() const {
  const auto& lam = spectral().eigenvalues;
  return lam.size() ? lam(lam.size() - 1) : 0.0;
}

Projection::Projection(const HermMatrix& p) : matrix_(p) {
  const auto& s = p.spectral();
  const Matrix sq = p.entries() * p.entries();
  if ((sq - p.entries()).cwiseAbs().maxCoeff() > 1e-10)
    throw NotProjectionError("Projection: P^2 != P");
  rank_ = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double l = s.eigenvalues(i);
    if (std::abs(l) > 1e-8 && std::abs(l - 1.0) > 1e-8)
      throw NotProjectionError("Projection: eigenvalue " + std::to_string(l) +
                               " not in {0,1}");
    if (l > 0.5) ++rank_;
  }
  // Eigenvalues ascending, so the range vectors are the trailing columns.
  isometry_ = s.eigenvectors.rightCols(rank_);
}

Projection Projection::identity(Eigen::Index dim) {
  return Projection(HermMatrix::identity(dim));
}

Projection Projection::zero(Eigen::Index dim) { return Projection(HermMatrix::zero(dim)); }

Spectral eig_hermitian(const HermMatrix& a) { return a.spectral(); }

HermMatrix fn_on_support(const HermMatrix& a, const std::function<double(double)>& f,
                         double tol) {
  const auto& s = a.spectral();
  check_psd(s.eigenvalues, tol);
  const double cutoff = spectral_cutoff(s.eigenvalues, tol);
  RealVector mapped(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    mapped(i) = s.eigenvalues(i) > cutoff ? f(s.eigenvalues(i)) : 0.0;
  Matrix out = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
  return HermMatrix((out + out.adjoint()) / 2.0);
}

HermMatrix pow_on_support(const HermMatrix& a, double p, double tol) {
  return fn_on_support(a, [p](double t) { return std::pow(t, p); }, tol);
}

Projection support_projection(const HermMatrix& a, double tol) {
  const auto& s = a.spectral();
  check_psd(s.eigenvalues, tol);
  const double cutoff = spectral_cutoff(s.eigenvalues, tol);
  RealVector ind(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    ind(i) = s.eigenvalues(i) > cutoff ? 1.0 : 0.0;
  Matrix out = s.eigenvectors * ind.asDiagonal() * s.eigenvectors.adjoint();
  return Projection(HermMatrix((out + out.adjoint()) / 2.0));
}

bool loewner_leq(const HermMatrix& a, const HermMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DimMismatchError("loewner_leq: dimension mismatch");
  const HermMatrix diff(b.entries() - a.entries());
  return diff.min_eigenvalue() >= -tol;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermMatrix tensor(const HermMatrix& a, const HermMatrix& b) {
  return HermMatrix(kronecker(a.entries(), b.entries()));
}

HermMatrix direct_sum(const std::vector<HermMatrix>& blocks) {
  Eigen::Index total = 0;
  for (const auto& blk : blocks) total += blk.dim();
  Matrix out = Matrix::Zero(total, total);
  Eigen::Index off = 0;
  for (const auto& blk : blocks) {
    out.block(off, off, blk.dim(), blk.dim()) = blk.entries();
    off += blk.dim();
  }
  return HermMatrix(out);
}

double commutator_norm(const HermMatrix& a, const HermMatrix& b) {
  if (a.dim() != b.dim()) throw DimMismatchError("commutator_norm: dimension mismatch");
  return (a.entries() * b.entries() - b.entries() * a.entries()).norm();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <=
         tol;
}

}  // namespace qdiv
