#include <cmath>
#include <limits>

#include "objectives.hpp"
#include "qcbnorm/linalg.hpp"

namespace qcbnorm::internal {

namespace {

// Eigenvalues at the level of rounding noise are treated as zero.
double noise_floor(const RealVector& values) {
  const double top = values.size() > 0 ? std::max(values.maxCoeff(), 0.0) : 0.0;
  return 64.0 * std::numeric_limits<double>::epsilon() * top * static_cast<double>(values.size());
}

Matrix tensor_identity_left(std::size_t da, const Matrix& b) {
  return tensor(Matrix(Matrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da))), b);
}

Matrix tensor_identity_right(const Matrix& a, std::size_t db) {
  return tensor(a, Matrix(Matrix::Identity(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db))));
}

}  // namespace

double noise_power_trace(const RealVector& spectrum, double alpha) {
  const double cut = noise_floor(spectrum);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    if (spectrum(i) > cut) sum += std::pow(spectrum(i), alpha);
  }
  return sum;
}

Matrix power_derivative(const Matrix& x, double p, const Matrix& h) {
  const auto eig = detail::eigh_raw(x);
  const Eigen::Index n = eig.values.size();
  constexpr double kFloor = 1e-300;
  Matrix ht = eig.vectors.adjoint() * h * eig.vectors;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double li = std::max(eig.values(i), kFloor);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double lj = std::max(eig.values(j), kFloor);
      double coeff;
      if (std::abs(li - lj) <= 1e-10 * std::max(li, lj)) {
        coeff = p * std::pow(0.5 * (li + lj), p - 1.0);
      } else {
        coeff = (std::pow(li, p) - std::pow(lj, p)) / (li - lj);
      }
      ht(i, j) *= coeff;
    }
  }
  return eig.vectors * ht * eig.vectors.adjoint();
}

RenyiSaddle::RenyiSaddle(const Matrix& psd, std::size_t dim_a, std::size_t dim_b, double alpha)
    : factored_(psd, dim_a, dim_b), alpha_(alpha) {}

RenyiSaddle::Evaluation RenyiSaddle::evaluate(const Matrix& rho, const Matrix& sigma, bool want_rho,
                                              bool want_sigma) const {
  const double a = alpha_;
  const double q = 1.0 / a;
  const double s = (1.0 - a) / a;
  const Matrix p_op = psd_power(rho, q);
  const Matrix s_op = psd_power(sigma, s);

  const Matrix& z = factored_.factor();
  const auto da = static_cast<Eigen::Index>(factored_.dim_a());
  const auto db = static_cast<Eigen::Index>(factored_.dim_b());
  const Eigen::Index r = z.cols();
  Matrix transformed(z.rows(), r);
  const Matrix pt = p_op.transpose();
  for (Eigen::Index k = 0; k < r; ++k) {
    Eigen::Map<const Matrix> m(z.col(k).data(), db, da);
    Eigen::Map<Matrix> out(transformed.col(k).data(), db, da);
    out.noalias() = s_op * m * pt;
  }
  const auto eig = detail::eigh_raw(detail::hermitian_part(z.adjoint() * transformed));
  const double cut = noise_floor(eig.values);

  Evaluation out;
  RealVector weight(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double g = eig.values(i);
    if (g > cut) {
      out.value += std::pow(g, a);
      weight(i) = std::pow(g, a - 1.0);
    } else {
      weight(i) = 0.0;
    }
  }
  if (!want_rho && !want_sigma) return out;

  // M = Z G^(a-1) Z^dagger; df = a tr[(dP (x) S) M] + a tr[(P (x) dS) M].
  const Matrix zw = z * eig.vectors;
  const Matrix m = zw * weight.asDiagonal() * zw.adjoint();
  const SystemLayout layout{factored_.dim_a(), factored_.dim_b()};
  if (want_rho) {
    const Matrix root = tensor_identity_left(factored_.dim_a(), psd_power(sigma, 0.5 * s));
    const std::size_t keep[] = {0};
    const Matrix x = a * partial_trace(Matrix(root * m * root), layout, keep);
    out.grad_rho = power_derivative(rho, q, detail::hermitian_part(x));
  }
  if (want_sigma) {
    const Matrix root = tensor_identity_right(psd_power(rho, 0.5 * q), factored_.dim_b());
    const std::size_t keep[] = {1};
    const Matrix x = a * partial_trace(Matrix(root * m * root), layout, keep);
    out.grad_sigma = power_derivative(sigma, s, detail::hermitian_part(x));
  }
  return out;
}

}  // namespace qcbnorm::internal
