#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcbnorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Any square or rectangular complex matrix; no structural invariant.
using GeneralMatrix = Matrix;

/// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double kHermitian = 1e-12;     // per-entry |X - X^dagger|
inline constexpr double kNegativeClip = 1e-10;  // eigenvalues in (-kNegativeClip, 0) clip to 0
inline constexpr double kTrace = 1e-10;         // density trace
inline constexpr double kSupportRel = 1e-12;    // lambda <= kSupportRel * max(lambda_max, 1) is zero
inline constexpr double kOrthogonal = 1e-10;    // tr(P_rho P_sigma) threshold
inline constexpr double kVarianceClip = 1e-9;
inline constexpr double kUnitNorm = 1e-12;
}  // namespace tol

/// Complex square matrix equal to its conjugate transpose.
///
/// Construction checks the per-entry Hermiticity tolerance and then stores the
/// exactly Hermitian part (X + X^dagger) / 2.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& entries);

  /// Builds from a matrix known to be Hermitian up to round-off; only the
  /// symmetrisation is applied.
  static HermitianOperator hermitize(const Matrix& entries);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex trace() const { return entries_.trace(); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator*(double scale) const;

 private:
  struct Trusted {};
  HermitianOperator(Trusted, Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Positive semidefinite, unit-trace Hermitian operator.
class DensityMatrix {
 public:
  /// Validates eigenvalues >= -1e-10 and trace 1 within 1e-10. Small negative
  /// eigenvalues are clipped.
  explicit DensityMatrix(const HermitianOperator& op);
  explicit DensityMatrix(const Matrix& entries) : DensityMatrix(HermitianOperator(entries)) {}

  /// rho = L L^dagger / tr(L L^dagger); positive by construction, no eigen check.
  static DensityMatrix from_factor(const Matrix& factor);
  /// Normalises a PSD matrix (up to round-off) to unit trace without an eigen check.
  static DensityMatrix from_psd_unchecked(const Matrix& psd);

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(const Vector& amplitudes);
  static DensityMatrix basis_state(std::size_t dim, std::size_t index);
  static DensityMatrix diagonal(std::span<const double> probabilities);

  std::size_t dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  explicit DensityMatrix(HermitianOperator op, bool /*trusted*/) : op_(std::move(op)) {}

  HermitianOperator op_;
};

/// Unit-norm state vector.
class PureStateVector {
 public:
  explicit PureStateVector(Vector amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  DensityMatrix density() const;

 private:
  Vector amplitudes_;
};

/// Ordered tensor factor dimensions; the leftmost factor is the slowest index.
class SystemLayout {
 public:
  SystemLayout(std::initializer_list<std::size_t> dims);
  explicit SystemLayout(std::vector<std::size_t> dims);

  std::size_t size() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const;
  std::size_t dim_of(std::span<const std::size_t> factors) const;

  /// Throws DimensionMismatch unless total_dim() == dim.
  void check(std::size_t dim) const;

 private:
  std::vector<std::size_t> dims_;
};

}  // namespace qcbnorm
