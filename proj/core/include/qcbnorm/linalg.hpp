#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcbnorm/types.hpp"

namespace qcbnorm {

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors, unitary
};

/// Hermitian eigendecomposition with ascending eigenvalues.
EigenDecomposition eigh(const HermitianOperator& x);

/// Support cutoff: lambda counts as zero when lambda <= 1e-12 * max(lambda_max, 1).
double support_threshold(double lambda_max);

/// Schatten quasi-norm (sum_i s_i^alpha)^(1/alpha) over singular values.
double schatten_quasi_norm(const GeneralMatrix& x, double alpha);

/// Same quantity for a PSD operator, computed from its eigenvalues.
double schatten_quasi_norm_psd(const HermitianOperator& x, double alpha);

/// sum_i max(lambda_i, 0)^alpha; the building block of both norms above.
double power_trace(const RealVector& spectrum, double alpha);

/// X^p for PSD X (negative eigenvalues in (-1e-10, 0) clipped, 0^p = 0 for p > 0).
/// p <= 0 is only defined for strictly positive X.
HermitianOperator matrix_power(const HermitianOperator& x, double p);

/// X^p computed on the support of X only (pseudo-power); any real p.
HermitianOperator support_power(const HermitianOperator& x, double p);

struct SupportLog {
  HermitianOperator log;      // log2 on the support, 0 on the kernel
  HermitianOperator support;  // orthogonal projector onto the support
};

SupportLog matrix_log2(const HermitianOperator& x);

HermitianOperator support_projector(const HermitianOperator& x);

/// Kronecker product, left factor = first (slowest) subsystem.
Matrix tensor(const Matrix& x, const Matrix& y);
HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y);
DensityMatrix tensor(const DensityMatrix& x, const DensityMatrix& y);
Vector tensor(const Vector& x, const Vector& y);

/// Traces out every factor of `layout` not listed in `keep`. Kept factors stay
/// in their original relative order.
Matrix partial_trace(const Matrix& x, const SystemLayout& layout,
                     std::span<const std::size_t> keep);
HermitianOperator partial_trace(const HermitianOperator& x, const SystemLayout& layout,
                                std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& x, const SystemLayout& layout,
                            std::span<const std::size_t> keep);

/// Reorders tensor factors: factor `order[i]` of the input becomes factor i of the output.
Matrix permute_systems(const Matrix& x, const SystemLayout& layout,
                       std::span<const std::size_t> order);
DensityMatrix permute_systems(const DensityMatrix& x, const SystemLayout& layout,
                              std::span<const std::size_t> order);

/// (1/2) ||rho - sigma||_1
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// tr[(Y^dagger X^p Y)^(q/p)] for PSD X, p in [1,2], q >= 1.
double carlen_lieb_upsilon(const HermitianOperator& x, const GeneralMatrix& y, double p, double q);

namespace detail {

/// Eigendecomposition of a matrix the caller guarantees is Hermitian.
EigenDecomposition eigh_raw(const Matrix& x);

/// Eigenvalues only (ascending) of a Hermitian matrix.
RealVector eigvals_raw(const Matrix& x);

/// V f(lambda) V^dagger.
template <typename F>
Matrix apply_spectral(const EigenDecomposition& eig, F&& f) {
  const Eigen::Index n = eig.values.size();
  Matrix scaled = eig.vectors;
  for (Eigen::Index i = 0; i < n; ++i) scaled.col(i) *= f(eig.values(i));
  return scaled * eig.vectors.adjoint();
}

Matrix hermitian_part(const Matrix& x);

/// Clips eigenvalues in (-1e-10, 0) to zero; throws InvariantViolation below that.
void clip_negative(RealVector& values, const char* what);

/// Thin factor W (n x r) with W W^dagger = X over the support of a PSD X.
Matrix psd_factor(const Matrix& x);

}  // namespace detail

}  // namespace qcbnorm
