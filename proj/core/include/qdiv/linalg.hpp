#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "qdiv/errors.hpp"

namespace qdiv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Relative spectral cutoff: eigenvalues below tol*max(lambda_max, 1) count as zero.
inline constexpr double kSupportTol = 1e-12;

// Eigendecomposition of a Hermitian matrix: A = U diag(lambda) U^dagger,
// eigenvalues ascending, eigenvector phases fixed deterministically
// (first component of modulus > eps made real positive).
struct Spectral {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

// Dense complex Hermitian matrix with a lazily filled, shared spectral cache.
// Immutable after construction; copies share the cache cell, so the one-time
// fill is visible to all copies and is race-free via std::call_once.
class HermMatrix {
 public:
  // Validates hermiticity within 1e-12 * max|entry| and symmetrizes.
  explicit HermMatrix(const Matrix& entries);

  static HermMatrix identity(Eigen::Index dim);
  static HermMatrix zero(Eigen::Index dim);
  static HermMatrix diagonal(const RealVector& diag);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }

  // The reference aliases the shared cache cell; rvalue access would dangle.
  const Spectral& spectral() const&;
  const Spectral& spectral() const&& = delete;

  double trace() const { return entries_.trace().real(); }
  // Largest |eigenvalue|.
  double operator_norm() const;
  double frobenius_norm() const { return entries_.norm(); }

  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  struct SpectralCell {
    std::once_flag once;
    Spectral value;
  };

  Matrix entries_;
  std::shared_ptr<SpectralCell> cell_;
};

// Projection in M_d: P^2 = P = P^dagger within 1e-10, eigenvalues in {0,1}.
class Projection {
 public:
  explicit Projection(const HermMatrix& p);

  Eigen::Index dim() const { return matrix_.dim(); }
  const HermMatrix& matrix() const { return matrix_; }
  const Matrix& entries() const { return matrix_.entries(); }
  Eigen::Index rank() const { return rank_; }
  // Columns span the range; isometry of shape dim x rank.
  const Matrix& range_isometry() const { return isometry_; }

  static Projection identity(Eigen::Index dim);
  static Projection zero(Eigen::Index dim);

 private:
  HermMatrix matrix_;
  Matrix isometry_;
  Eigen::Index rank_;
};

// A = U diag(lambda) U^dagger with lambda ascending; throws NonHermitian.
Spectral eig_hermitian(const HermMatrix& a);

// f applied to the spectrum above the relative cutoff tol*max(lambda_max, 1);
// eigenvalues at or below the cutoff map to 0 (pseudo-calculus on the support).
// Throws NegativeSpectrum if min eigenvalue < -tol*max(|lambda|, 1).
HermMatrix fn_on_support(const HermMatrix& a, const std::function<double(double)>& f,
                         double tol = kSupportTol);

// Power function on the support; negative exponents give the pseudo-inverse power.
HermMatrix pow_on_support(const HermMatrix& a, double p, double tol = kSupportTol);

// Projection onto the span of eigenvectors with lambda > tol*max(lambda_max, 1).
Projection support_projection(const HermMatrix& a, double tol = kSupportTol);

// A <= B in the Loewner order: min eigenvalue of (B - A) >= -tol.
bool loewner_leq(const HermMatrix& a, const HermMatrix& b, double tol = 1e-10);

// Kronecker product / block-diagonal assembly.
HermMatrix tensor(const HermMatrix& a, const HermMatrix& b);
HermMatrix direct_sum(const std::vector<HermMatrix>& blocks);
Matrix kronecker(const Matrix& a, const Matrix& b);

// ||AB - BA||_F
double commutator_norm(const HermMatrix& a, const HermMatrix& b);

// U^dagger U = 1 within tol.
bool is_unitary(const Matrix& u, double tol = 1e-10);

}  // namespace qdiv
