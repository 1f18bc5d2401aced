#include <gtest/gtest.h>

#include <numbers>

#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"
#include "qcbnorm/states.hpp"
#include "support.hpp"

namespace qcbnorm {
namespace {

using testing::diag;
using testing::max_abs;

TEST(HermitianOperator, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(HermitianOperator{m}, InvariantViolation);
  EXPECT_THROW(HermitianOperator{Matrix(2, 3)}, InvariantViolation);
}

TEST(DensityMatrix, ValidatesTraceAndPositivity) {
  EXPECT_THROW(DensityMatrix(diag({0.6, 0.6})), InvariantViolation);
  EXPECT_THROW(DensityMatrix(diag({1.5, -0.5})), InvariantViolation);
  const DensityMatrix clipped(diag({1.0 + 1e-11, -1e-11}));
  EXPECT_GE(detail::eigvals_raw(clipped.matrix()).minCoeff(), 0.0);
}

TEST(PureStateVector, RequiresUnitNorm) {
  Vector v(2);
  v << 1, 1;
  EXPECT_THROW(PureStateVector{v}, InvariantViolation);
  EXPECT_NO_THROW(PureStateVector{v / std::sqrt(2.0)});
}

TEST(Eigh, IdentityAndDiagonal) {
  const auto id = eigh(HermitianOperator::identity(2));
  EXPECT_NEAR(id.values(0), 1.0, 1e-14);
  EXPECT_NEAR(id.values(1), 1.0, 1e-14);
  const auto d = eigh(HermitianOperator(diag({3, -1})));
  EXPECT_NEAR(d.values(0), -1.0, 1e-14);
  EXPECT_NEAR(d.values(1), 3.0, 1e-14);
}

TEST(Eigh, ReconstructsRandomHermitian) {
  Rng rng(1);
  for (std::size_t d : {2, 3, 5, 8}) {
    const HermitianOperator x = random_hermitian(d, rng);
    const auto e = eigh(x);
    const Matrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((rebuilt - x.matrix()).norm(), 1e-10);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(SchattenQuasiNorm, ClosedForms) {
  EXPECT_NEAR(schatten_quasi_norm(Matrix::Identity(2, 2), 0.5), 4.0, 1e-12);
  EXPECT_NEAR(schatten_quasi_norm(diag({4, 0}), 0.5), 4.0, 1e-12);
  EXPECT_THROW(schatten_quasi_norm(Matrix::Identity(2, 2), 0.0), InvalidParameter);
  EXPECT_THROW(schatten_quasi_norm(Matrix::Identity(2, 2), -1.0), InvalidParameter);
}

TEST(SchattenQuasiNorm, MatchesSvdOracle) {
  Rng rng(2);
  const Matrix x = random_gaussian(3, 3, rng);
  const Eigen::JacobiSVD<Matrix> svd(x);
  double s = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) s += std::pow(svd.singularValues()(i), 0.7);
  EXPECT_NEAR(schatten_quasi_norm(x, 0.7), std::pow(s, 1.0 / 0.7), 1e-10);
}

TEST(SchattenQuasiNorm, UnitarilyInvariant) {
  Rng rng(3);
  for (double a : {0.5, 0.8, 1.0, 2.0}) {
    const Matrix x = random_gaussian(4, 4, rng);
    const Matrix u = random_unitary(4, rng);
    const Matrix v = random_unitary(4, rng);
    EXPECT_NEAR(schatten_quasi_norm(u * x * v, a), schatten_quasi_norm(x, a), 1e-10);
  }
}

TEST(SchattenQuasiNorm, RankOneEqualsTrace) {
  Rng rng(4);
  const DensityMatrix psi = random_density(3, 1, rng);
  for (double a : {0.3, 0.5, 0.9, 1.7}) {
    EXPECT_NEAR(schatten_quasi_norm_psd(psi.op() * 2.5, a), 2.5, 1e-10);
  }
}

TEST(SchattenQuasiNorm, QuasiNormBehaviour) {
  // Triangle inequality fails below alpha = 1 ...
  const Matrix x = diag({1, 0});
  const Matrix y = diag({0, 1});
  const double a = 0.5;
  EXPECT_GT(schatten_quasi_norm(x + y, a), schatten_quasi_norm(x, a) + schatten_quasi_norm(y, a) + 1.0);
  // ... while the alpha-th powers stay subadditive on PSD pairs.
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Matrix p = random_density(3, 3, rng).matrix();
    const Matrix q = random_density(3, 2, rng).matrix();
    const double lhs = std::pow(schatten_quasi_norm(p + q, a), a);
    const double rhs = std::pow(schatten_quasi_norm(p, a), a) + std::pow(schatten_quasi_norm(q, a), a);
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(MatrixPower, ClosedForms) {
  EXPECT_MATRIX_NEAR(matrix_power(HermitianOperator::identity(3), 0.37).matrix(), Matrix::Identity(3, 3), 1e-12);
  EXPECT_MATRIX_NEAR(matrix_power(HermitianOperator(diag({4, 0})), 0.5).matrix(), diag({2, 0}), 1e-12);
  EXPECT_THROW(matrix_power(HermitianOperator(diag({4, 0})), -0.5), SingularPowerError);
  EXPECT_THROW(matrix_power(HermitianOperator(diag({4, 0})), 0.0), SingularPowerError);
  EXPECT_MATRIX_NEAR(matrix_power(HermitianOperator(diag({4, 1})), -0.5).matrix(), diag({0.5, 1}), 1e-12);
}

TEST(MatrixPower, SquareMatchesProduct) {
  Rng rng(6);
  const DensityMatrix x = random_density(4, 4, rng);
  EXPECT_MATRIX_NEAR(matrix_power(x.op(), 2.0).matrix(), x.matrix() * x.matrix(), 1e-10);
}

TEST(MatrixLog2, ClosedForms) {
  EXPECT_MATRIX_NEAR(matrix_log2(HermitianOperator::identity(2)).log.matrix(), Matrix::Zero(2, 2), 1e-14);
  const auto l = matrix_log2(HermitianOperator(diag({2, 1})));
  EXPECT_MATRIX_NEAR(l.log.matrix(), diag({1, 0}), 1e-14);
  EXPECT_MATRIX_NEAR(matrix_log2(HermitianOperator(diag({0.5, 0.5}))).log.matrix(), diag({-1, -1}), 1e-14);
  const auto singular = matrix_log2(HermitianOperator(diag({0.25, 0})));
  EXPECT_MATRIX_NEAR(singular.log.matrix(), diag({-2, 0}), 1e-14);
  EXPECT_MATRIX_NEAR(singular.support.matrix(), diag({1, 0}), 1e-14);
}

TEST(SupportThreshold, ScaleAware) {
  EXPECT_DOUBLE_EQ(support_threshold(0.5), 1e-12);
  EXPECT_DOUBLE_EQ(support_threshold(100.0), 1e-10);
}

TEST(Tensor, ClosedForms) {
  EXPECT_MATRIX_NEAR(tensor(Matrix(Matrix::Identity(2, 2)), Matrix(Matrix::Identity(3, 3))), Matrix::Identity(6, 6),
                     0.0);
  EXPECT_MATRIX_NEAR(tensor(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0}), 0.0);
}

TEST(Tensor, TraceFactorises) {
  Rng rng(7);
  const Matrix x = random_gaussian(2, 2, rng);
  const Matrix y = random_gaussian(3, 3, rng);
  EXPECT_LT(std::abs(tensor(x, y).trace() - x.trace() * y.trace()), 1e-12);
}

TEST(PartialTrace, ProductAndMaxEntangled) {
  Rng rng(8);
  const DensityMatrix rho = random_density(2, 2, rng);
  const DensityMatrix sigma = random_density(3, 3, rng);
  const std::size_t first[] = {0};
  const std::size_t second[] = {1};
  const SystemLayout layout{2, 3};
  EXPECT_MATRIX_NEAR(partial_trace(tensor(rho, sigma), layout, first).matrix(), rho.matrix(), 1e-12);
  EXPECT_MATRIX_NEAR(partial_trace(tensor(rho, sigma), layout, second).matrix(), sigma.matrix(), 1e-12);
  for (std::size_t d : {2, 3, 4}) {
    const SystemLayout dd{d, d};
    EXPECT_MATRIX_NEAR(partial_trace(max_entangled(d).matrix(), dd, first),
                       Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)), 1e-12);
  }
}

TEST(PartialTrace, PreservesTraceAndChecksLayout) {
  Rng rng(9);
  const DensityMatrix rho = random_density(12, 12, rng);
  const SystemLayout layout{2, 3, 2};
  const std::size_t keep[] = {0, 2};
  EXPECT_NEAR(partial_trace(rho, layout, keep).matrix().trace().real(), 1.0, 1e-12);
  const SystemLayout wrong{2, 2};
  const std::size_t k0[] = {0};
  EXPECT_THROW(partial_trace(rho.matrix(), wrong, k0), DimensionMismatch);
}

TEST(PermuteSystems, SwapsFactors) {
  Rng rng(10);
  const Matrix x = random_gaussian(2, 2, rng);
  const Matrix y = random_gaussian(3, 3, rng);
  const std::size_t order[] = {1, 0};
  EXPECT_MATRIX_NEAR(permute_systems(tensor(x, y), SystemLayout{2, 3}, order), tensor(y, x), 1e-12);
}

TEST(MaxEntangled, Definition) {
  EXPECT_MATRIX_NEAR(max_entangled(1).matrix(), Matrix::Ones(1, 1), 0.0);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  EXPECT_MATRIX_NEAR(max_entangled(2).matrix(), expected, 0.0);
  for (std::size_t d = 2; d <= 4; ++d) EXPECT_NEAR(max_entangled(d).trace().real(), static_cast<double>(d), 1e-14);
  EXPECT_NEAR(detail::eigvals_raw(max_entangled(3).matrix()).tail(1)(0), 3.0, 1e-12);
}

TEST(Purify, ClosedFormsAndRoundTrip) {
  // Ascending eigenvalue order pairs the nonzero eigenvalue of |0><0| with reference |1>.
  const PureStateVector zero = purify(DensityMatrix::basis_state(2, 0));
  EXPECT_NEAR(std::abs(zero.amplitudes()(1)), 1.0, 1e-12);

  const PureStateVector bell = purify(DensityMatrix::maximally_mixed(2));
  const Matrix phi = max_entangled(2).matrix() / 2.0;
  // Same reduced states as the maximally entangled vector; equal up to a local unitary on the reference.
  const std::size_t first[] = {0};
  EXPECT_MATRIX_NEAR(partial_trace(bell.density().matrix(), SystemLayout{2, 2}, first),
                     partial_trace(phi, SystemLayout{2, 2}, first), 1e-12);

  Rng rng(11);
  for (std::size_t d : {2, 3}) {
    const DensityMatrix rho = random_density(d, d, rng);
    const DensityMatrix reduced = partial_trace(purify(rho).density(), SystemLayout{d, d}, first);
    EXPECT_LT(trace_distance(reduced, rho), 1e-10);
  }
}

TEST(HeisenbergWeyl, QubitPaulis) {
  EXPECT_MATRIX_NEAR(heisenberg_weyl(1).front(), Matrix::Ones(1, 1), 0.0);
  const auto w = heisenberg_weyl(2);
  ASSERT_EQ(w.size(), 4u);
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EXPECT_MATRIX_NEAR(w[0], Matrix::Identity(2, 2), 1e-14);
  EXPECT_MATRIX_NEAR(w[1], z, 1e-14);
  EXPECT_MATRIX_NEAR(w[2], x, 1e-14);
  EXPECT_MATRIX_NEAR(w[3], x * z, 1e-14);
  for (std::size_t d : {3, 4}) {
    for (const auto& u : heisenberg_weyl(d)) {
      EXPECT_MATRIX_NEAR(u * u.adjoint(), Matrix::Identity(u.rows(), u.rows()), 1e-12);
    }
  }
}

TEST(HeisenbergWeyl, TwirlIsCompletelyDepolarizing) {
  Rng rng(12);
  for (std::size_t d : {2, 3}) {
    const Matrix rho = random_gaussian(d, d, rng);
    Matrix avg = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& w : heisenberg_weyl(d)) avg += w * rho * w.adjoint();
    avg /= static_cast<double>(d * d);
    const Matrix expected = rho.trace() / static_cast<double>(d) * Matrix::Identity(rho.rows(), rho.cols());
    EXPECT_MATRIX_NEAR(avg, expected, 1e-12);
  }
}

TEST(HeisenbergWeyl, BipartiteTwirlProperty) {
  // (1/d^2) sum_k (1 (x) W_k) rho_12 (1 (x) W_k)^dagger = rho_1 (x) 1/d
  Rng rng(13);
  for (std::size_t d : {2, 3}) {
    const DensityMatrix rho = random_density(d * d, d * d, rng);
    const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Matrix avg = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const auto& w : heisenberg_weyl(d)) {
      const Matrix u = tensor(id, w);
      avg += u * rho.matrix() * u.adjoint();
    }
    avg /= static_cast<double>(d * d);
    const std::size_t first[] = {0};
    const Matrix rho1 = partial_trace(rho.matrix(), SystemLayout{d, d}, first);
    EXPECT_MATRIX_NEAR(avg, tensor(rho1, Matrix(id / static_cast<double>(d))), 1e-12);
  }
}

TEST(RandomSampling, PureStatesAndIsometries) {
  Rng rng(14);
  const DensityMatrix pure = random_density(2, 1, rng);
  EXPECT_NEAR((pure.matrix() * pure.matrix()).trace().real(), 1.0, 1e-10);
  const Matrix v = random_isometry(2, 5, rng);
  EXPECT_MATRIX_NEAR(v.adjoint() * v, Matrix::Identity(2, 2), 1e-10);
  EXPECT_THROW(random_isometry(3, 2, rng), DimensionMismatch);
  EXPECT_THROW(random_density(2, 3, rng), InvalidParameter);
}

TEST(RandomSampling, DeterministicUnderSeed) {
  Rng a(99);
  Rng b(99);
  EXPECT_EQ(random_density(3, 2, a).matrix(), random_density(3, 2, b).matrix());
  EXPECT_EQ(random_isometry(2, 4, a), random_isometry(2, 4, b));
}

TEST(TraceDistance, ClosedForms) {
  Rng rng(15);
  const DensityMatrix rho = random_density(3, 3, rng);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-14);
  EXPECT_NEAR(trace_distance(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)), 1.0, 1e-14);
  EXPECT_NEAR(trace_distance(testing::diag_state({0.75, 0.25}), DensityMatrix::maximally_mixed(2)), 0.25, 1e-14);
  EXPECT_THROW(trace_distance(rho, DensityMatrix::maximally_mixed(2)), DimensionMismatch);
}

TEST(CarlenLieb, ClosedForms) {
  Rng rng(16);
  const DensityMatrix x = random_density(3, 3, rng);
  const Matrix id3 = Matrix::Identity(3, 3);
  EXPECT_NEAR(carlen_lieb_upsilon(x.op() * 2.0, id3, 1.0, 1.0), 2.0, 1e-12);
  EXPECT_NEAR(carlen_lieb_upsilon(HermitianOperator::identity(2), Matrix::Identity(2, 2), 2.0, 2.0), 2.0, 1e-12);
  EXPECT_THROW(carlen_lieb_upsilon(x.op(), id3, 0.5, 1.0), InvalidParameter);
  EXPECT_THROW(carlen_lieb_upsilon(x.op(), id3, 2.5, 1.0), InvalidParameter);
  EXPECT_THROW(carlen_lieb_upsilon(x.op(), id3, 1.5, 0.5), InvalidParameter);
}

class CarlenLiebConvexity : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(CarlenLiebConvexity, MidpointProbes) {
  const auto [p, q] = GetParam();
  Rng rng(static_cast<std::uint64_t>(100 * p + q));
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  double worst = -1.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 2);
    const HermitianOperator x1 = random_density(d, d, rng).op() * scale(rng);
    const HermitianOperator x2 = random_density(d, 1 + static_cast<std::size_t>(i % d), rng).op() * scale(rng);
    const Matrix y = random_gaussian(d, d, rng);
    const double mid = carlen_lieb_upsilon((x1 + x2) * 0.5, y, p, q);
    const double avg = 0.5 * (carlen_lieb_upsilon(x1, y, p, q) + carlen_lieb_upsilon(x2, y, p, q));
    worst = std::max(worst, mid - avg);
  }
  EXPECT_LE(worst, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Grid, CarlenLiebConvexity,
                         ::testing::Values(std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{1.5, 1.0},
                                           std::pair{1.5, 2.0}, std::pair{2.0, 1.0}, std::pair{2.0, 2.0}));

}  // namespace
}  // namespace qcbnorm
