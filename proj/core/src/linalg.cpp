#include "qcbnorm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcbnorm/errors.hpp"

namespace qcbnorm {

namespace detail {

EigenDecomposition eigh_raw(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvals_raw(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigh: eigensolver did not converge");
  return solver.eigenvalues();
}

Matrix hermitian_part(const Matrix& x) { return (x + x.adjoint()) * 0.5; }

void clip_negative(RealVector& values, const char* what) {
  for (auto& v : values) {
    if (v < -tol::kNegativeClip) {
      std::ostringstream msg;
      msg << what << ": eigenvalue " << v << " below -" << tol::kNegativeClip;
      throw InvariantViolation(msg.str());
    }
    if (v < 0.0) v = 0.0;
  }
}

Matrix psd_factor(const Matrix& x) {
  auto eig = eigh_raw(x);
  const Eigen::Index n = eig.values.size();
  const double cut = support_threshold(eig.values(n - 1));
  Eigen::Index first = 0;
  while (first < n && eig.values(first) <= cut) ++first;
  const Eigen::Index rank = n - first;
  Matrix w(x.rows(), std::max<Eigen::Index>(rank, 1));
  if (rank == 0) {
    w.setZero();
    return w;
  }
  for (Eigen::Index k = 0; k < rank; ++k) {
    w.col(k) = eig.vectors.col(first + k) * std::sqrt(eig.values(first + k));
  }
  return w;
}

}  // namespace detail

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << what << ": dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw DimensionMismatch(msg.str());
  }
}

// Offsets into the full index for every multi-index over `factors`, in
// row-major order of those factors.
std::vector<Eigen::Index> factor_offsets(const SystemLayout& layout,
                                         std::span<const std::size_t> factors) {
  const auto& dims = layout.dims();
  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    stride[i] = s;
    s *= static_cast<Eigen::Index>(dims[i]);
  }
  std::vector<Eigen::Index> offsets{0};
  for (auto f : factors) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * dims[f]);
    for (auto base : offsets) {
      for (std::size_t v = 0; v < dims[f]; ++v) {
        next.push_back(base + static_cast<Eigen::Index>(v) * stride[f]);
      }
    }
    offsets = std::move(next);
  }
  return offsets;
}

void validate_factor_list(const SystemLayout& layout, std::span<const std::size_t> list,
                          bool require_all) {
  std::vector<bool> seen(layout.size(), false);
  for (auto f : list) {
    if (f >= layout.size() || seen[f]) {
      throw DimensionMismatch("subsystem index out of range or repeated");
    }
    seen[f] = true;
  }
  if (require_all && list.size() != layout.size()) {
    throw DimensionMismatch("permutation must list every subsystem once");
  }
}

}  // namespace

EigenDecomposition eigh(const HermitianOperator& x) { return detail::eigh_raw(x.matrix()); }

double support_threshold(double lambda_max) {
  return tol::kSupportRel * std::max(lambda_max, 1.0);
}

double power_trace(const RealVector& spectrum, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("power_trace: order must be positive");
  if (spectrum.size() == 0) return 0.0;
  const double cut = support_threshold(spectrum.maxCoeff());
  double sum = 0.0;
  for (double v : spectrum) {
    if (v > cut) sum += std::pow(v, alpha);
  }
  return sum;
}

double schatten_quasi_norm(const GeneralMatrix& x, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("schatten_quasi_norm: invalid order alpha <= 0");
  Eigen::JacobiSVD<Matrix> svd(x);
  return std::pow(power_trace(svd.singularValues(), alpha), 1.0 / alpha);
}

double schatten_quasi_norm_psd(const HermitianOperator& x, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("schatten_quasi_norm: invalid order alpha <= 0");
  RealVector values = detail::eigvals_raw(x.matrix());
  detail::clip_negative(values, "schatten_quasi_norm_psd");
  return std::pow(power_trace(values, alpha), 1.0 / alpha);
}

HermitianOperator matrix_power(const HermitianOperator& x, double p) {
  auto eig = eigh(x);
  detail::clip_negative(eig.values, "matrix_power");
  const double cut = support_threshold(eig.values.maxCoeff());
  if (p <= 0.0 && eig.values(0) <= cut) {
    throw SingularPowerError("matrix_power: non-positive exponent of a singular operator");
  }
  return HermitianOperator::hermitize(detail::apply_spectral(eig, [&](double v) {
    return v > cut ? std::pow(v, p) : 0.0;
  }));
}

HermitianOperator support_power(const HermitianOperator& x, double p) {
  auto eig = eigh(x);
  detail::clip_negative(eig.values, "support_power");
  const double cut = support_threshold(eig.values.maxCoeff());
  return HermitianOperator::hermitize(detail::apply_spectral(eig, [&](double v) {
    return v > cut ? std::pow(v, p) : 0.0;
  }));
}

SupportLog matrix_log2(const HermitianOperator& x) {
  auto eig = eigh(x);
  detail::clip_negative(eig.values, "matrix_log2");
  const double cut = support_threshold(eig.values.maxCoeff());
  auto log = detail::apply_spectral(eig, [&](double v) { return v > cut ? std::log2(v) : 0.0; });
  auto proj = detail::apply_spectral(eig, [&](double v) { return v > cut ? 1.0 : 0.0; });
  return {HermitianOperator::hermitize(log), HermitianOperator::hermitize(proj)};
}

HermitianOperator support_projector(const HermitianOperator& x) {
  auto eig = eigh(x);
  detail::clip_negative(eig.values, "support_projector");
  const double cut = support_threshold(eig.values.maxCoeff());
  return HermitianOperator::hermitize(
      detail::apply_spectral(eig, [&](double v) { return v > cut ? 1.0 : 0.0; }));
}

Matrix tensor(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y) {
  return HermitianOperator::hermitize(tensor(x.matrix(), y.matrix()));
}

DensityMatrix tensor(const DensityMatrix& x, const DensityMatrix& y) {
  return DensityMatrix::from_psd_unchecked(tensor(x.matrix(), y.matrix()));
}

Vector tensor(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

Matrix partial_trace(const Matrix& x, const SystemLayout& layout,
                     std::span<const std::size_t> keep) {
  if (x.rows() != x.cols()) throw DimensionMismatch("partial_trace: operator must be square");
  layout.check(static_cast<std::size_t>(x.rows()));
  validate_factor_list(layout, keep, false);
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<std::size_t> traced;
  for (std::size_t f = 0; f < layout.size(); ++f) {
    if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);
  }
  const auto keep_off = factor_offsets(layout, kept);
  const auto trace_off = factor_offsets(layout, traced);
  const auto n = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (auto t : trace_off) acc += x(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, const SystemLayout& layout,
                                std::span<const std::size_t> keep) {
  return HermitianOperator::hermitize(partial_trace(x.matrix(), layout, keep));
}

DensityMatrix partial_trace(const DensityMatrix& x, const SystemLayout& layout,
                            std::span<const std::size_t> keep) {
  return DensityMatrix::from_psd_unchecked(partial_trace(x.matrix(), layout, keep));
}

Matrix permute_systems(const Matrix& x, const SystemLayout& layout,
                       std::span<const std::size_t> order) {
  if (x.rows() != x.cols()) throw DimensionMismatch("permute_systems: operator must be square");
  layout.check(static_cast<std::size_t>(x.rows()));
  validate_factor_list(layout, order, true);
  const auto offsets = factor_offsets(layout, order);
  const auto n = static_cast<Eigen::Index>(offsets.size());
  Matrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = x(offsets[r], offsets[c]);
  }
  return out;
}

DensityMatrix permute_systems(const DensityMatrix& x, const SystemLayout& layout,
                              std::span<const std::size_t> order) {
  return DensityMatrix::from_psd_unchecked(permute_systems(x.matrix(), layout, order));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  const RealVector values = detail::eigvals_raw(rho.matrix() - sigma.matrix());
  return 0.5 * values.cwiseAbs().sum();
}

double carlen_lieb_upsilon(const HermitianOperator& x, const GeneralMatrix& y, double p, double q) {
  if (!(p >= 1.0 && p <= 2.0) || !(q >= 1.0)) {
    throw InvalidParameter("carlen_lieb_upsilon: requires p in [1,2] and q >= 1");
  }
  if (y.rows() != static_cast<Eigen::Index>(x.dim())) {
    throw DimensionMismatch("carlen_lieb_upsilon: Y row count must match X");
  }
  const auto xp = matrix_power(x, p);
  const Matrix inner = detail::hermitian_part(y.adjoint() * xp.matrix() * y);
  RealVector values = detail::eigvals_raw(inner);
  for (auto& v : values) v = std::max(v, 0.0);
  double sum = 0.0;
  for (double v : values) sum += std::pow(v, q / p);
  return sum;
}

}  // namespace qcbnorm
