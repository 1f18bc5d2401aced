#include "qcbnorm/states.hpp"

#include <cmath>
#include <numbers>

#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"

namespace qcbnorm {

HermitianOperator max_entangled(std::size_t d) {
  if (d < 1) throw InvalidParameter("max_entangled: dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix phi = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) phi(i * n + i, j * n + j) = 1.0;
  }
  return HermitianOperator::hermitize(phi);
}

PureStateVector purify(const DensityMatrix& rho) {
  const auto eig = eigh(rho.op());
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Vector psi = Vector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = std::max(eig.values(i), 0.0);
    if (lambda == 0.0) continue;
    Vector ref = Vector::Zero(n);
    ref(i) = 1.0;
    psi += std::sqrt(lambda) * tensor(Vector(eig.vectors.col(i)), ref);
  }
  psi /= psi.norm();
  return PureStateVector(std::move(psi));
}

std::vector<Matrix> heisenberg_weyl(std::size_t d) {
  if (d < 1) throw InvalidParameter("heisenberg_weyl: dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix shift = Matrix::Zero(n, n);
  Matrix clock = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    shift((j + 1) % n, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  std::vector<Matrix> ops;
  ops.reserve(d * d);
  Matrix xa = Matrix::Identity(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    Matrix zb = Matrix::Identity(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
      ops.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = shift * xa;
  }
  return ops;
}

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) {
    throw InvalidParameter("random_density: need 1 <= rank <= d");
  }
  const Matrix g = random_gaussian(d, rank, rng);
  return DensityMatrix::from_factor(g);
}

Matrix random_isometry(std::size_t d_in, std::size_t d_out, Rng& rng) {
  if (d_in < 1 || d_out < d_in) {
    throw DimensionMismatch("random_isometry: need 1 <= d_in <= d_out");
  }
  const Matrix g = random_gaussian(d_out, d_in, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  // Fix the phase freedom of QR so that the distribution is Haar on the Stiefel manifold.
  const Matrix r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Matrix random_unitary(std::size_t d, Rng& rng) { return random_isometry(d, d, rng); }

HermitianOperator random_hermitian(std::size_t d, Rng& rng) {
  const Matrix g = random_gaussian(d, d, rng);
  return HermitianOperator::hermitize(g);
}

}  // namespace qcbnorm
