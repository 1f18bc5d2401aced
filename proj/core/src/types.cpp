#include "qcbnorm/types.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"

namespace qcbnorm {

HermitianOperator::HermitianOperator(const Matrix& entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw InvariantViolation("HermitianOperator: matrix must be square and non-empty");
  }
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kHermitian) {
    std::ostringstream msg;
    msg << "HermitianOperator: max |X - X^dagger| entry " << asym << " exceeds " << tol::kHermitian;
    throw InvariantViolation(msg.str());
  }
  entries_ = detail::hermitian_part(entries);
}

HermitianOperator HermitianOperator::hermitize(const Matrix& entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw InvariantViolation("HermitianOperator: matrix must be square and non-empty");
  }
  return HermitianOperator(Trusted{}, detail::hermitian_part(entries));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Trusted{}, Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Trusted{}, Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianOperator(Trusted{}, std::move(m));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("HermitianOperator: sum of unequal dimensions");
  return HermitianOperator(Trusted{}, entries_ + other.entries_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("HermitianOperator: difference of unequal dimensions");
  return HermitianOperator(Trusted{}, entries_ - other.entries_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  return HermitianOperator(Trusted{}, entries_ * scale);
}

DensityMatrix::DensityMatrix(const HermitianOperator& op) : op_(op) {
  const double tr = op.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " differs from 1";
    throw InvariantViolation(msg.str());
  }
  auto eig = detail::eigh_raw(op.matrix());
  if (eig.values(0) < 0.0) {
    detail::clip_negative(eig.values, "DensityMatrix");
    op_ = HermitianOperator::hermitize(detail::apply_spectral(eig, [](double v) { return v; }));
  }
}

DensityMatrix DensityMatrix::from_factor(const Matrix& factor) {
  Matrix rho = factor * factor.adjoint();
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw InvariantViolation("DensityMatrix::from_factor: zero factor");
  rho /= tr;
  return DensityMatrix(HermitianOperator::hermitize(rho), true);
}

DensityMatrix DensityMatrix::from_psd_unchecked(const Matrix& psd) {
  const double tr = psd.trace().real();
  if (!(tr > 0.0)) throw InvariantViolation("DensityMatrix: non-positive trace");
  return DensityMatrix(HermitianOperator::hermitize(psd / tr), true);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim)), true);
}

DensityMatrix DensityMatrix::pure(const Vector& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw InvariantViolation("DensityMatrix::pure: zero vector");
  const Vector v = amplitudes / n;
  return DensityMatrix(HermitianOperator::hermitize(v * v.adjoint()), true);
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidParameter("DensityMatrix::basis_state: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(v);
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(HermitianOperator::diagonal(probabilities));
}

PureStateVector::PureStateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1 || std::abs(amplitudes_.norm() - 1.0) > tol::kUnitNorm) {
    throw InvariantViolation("PureStateVector: amplitudes must have unit 2-norm");
  }
}

DensityMatrix PureStateVector::density() const { return DensityMatrix::pure(amplitudes_); }

SystemLayout::SystemLayout(std::initializer_list<std::size_t> dims)
    : SystemLayout(std::vector<std::size_t>(dims)) {}

SystemLayout::SystemLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidParameter("SystemLayout: no factors");
  for (auto d : dims_) {
    if (d == 0) throw InvalidParameter("SystemLayout: zero factor dimension");
  }
}

std::size_t SystemLayout::total_dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SystemLayout::dim_of(std::span<const std::size_t> factors) const {
  std::size_t d = 1;
  for (auto f : factors) {
    if (f >= dims_.size()) throw DimensionMismatch("SystemLayout: factor index out of range");
    d *= dims_[f];
  }
  return d;
}

void SystemLayout::check(std::size_t dim) const {
  if (total_dim() != dim) {
    std::ostringstream msg;
    msg << "SystemLayout: factors multiply to " << total_dim() << " but operator has dimension " << dim;
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace qcbnorm
