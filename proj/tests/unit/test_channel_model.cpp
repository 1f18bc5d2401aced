#include <gtest/gtest.h>

#include <algorithm>

#include "qcbnorm/channel.hpp"
#include "qcbnorm/errors.hpp"
#include "support.hpp"

namespace qcbnorm {
namespace {

using testing::max_abs;

RealVector sorted_nonzero_spectrum(const Matrix& x) {
  RealVector ev = detail::eigvals_raw(detail::hermitian_part(x));
  std::vector<double> kept;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-9) kept.push_back(ev(i));
  }
  std::sort(kept.begin(), kept.end());
  return Eigen::Map<RealVector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

void expect_same_spectrum(const Matrix& a, const Matrix& b, double tol) {
  const RealVector sa = sorted_nonzero_spectrum(a);
  const RealVector sb = sorted_nonzero_spectrum(b);
  ASSERT_EQ(sa.size(), sb.size());
  EXPECT_LE((sa - sb).cwiseAbs().maxCoeff(), tol);
}

std::vector<CPMap> corpus(Rng& rng) {
  return {identity_channel(2),
          identity_channel(3),
          trace_map(3),
          channel_zoo("depolarizing", {{"p", 0.3}}),
          channel_zoo("amplitude_damping", {{"gamma", 0.4}}),
          channel_zoo("dephasing", {{"p", 0.2}}),
          random_channel(2, 2, 2, rng),
          random_channel(2, 3, 2, rng),
          random_channel(3, 2, 3, rng)};
}

TEST(CPMap, ValidatesConstruction) {
  EXPECT_THROW(CPMap(2, 2, {}, false), InvalidParameter);
  EXPECT_THROW(CPMap(2, 2, {Matrix::Identity(3, 2)}, false), DimensionMismatch);
  EXPECT_THROW(CPMap(2, 2, {Matrix(Matrix::Identity(2, 2) * 0.5)}, true), InvariantViolation);
  EXPECT_TRUE(CPMap::from_kraus({Matrix::Identity(2, 2)}).trace_preserving());
  EXPECT_FALSE(CPMap::from_kraus({Matrix(Matrix::Identity(2, 2) * 0.5)}).trace_preserving());
}

TEST(Apply, ClosedForms) {
  Rng rng(1);
  const DensityMatrix rho = random_density(2, 2, rng);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(identity_channel(2), rho.matrix()), rho.matrix(), 1e-14);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(trace_map(2), rho.matrix()), Matrix::Ones(1, 1), 1e-14);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(channel_zoo("depolarizing", {{"p", 1.0}}), rho.matrix()), Matrix::Identity(2, 2) * 0.5,
                     1e-14);
  EXPECT_THROW(qcbnorm::apply(identity_channel(3), rho.matrix()), DimensionMismatch);
  EXPECT_THROW(apply_channel(scale(identity_channel(2), 0.5), rho), ContractError);
}

TEST(Apply, TracePreservingOnRandomStates) {
  Rng rng(2);
  for (const auto& m : corpus(rng)) {
    const DensityMatrix rho = random_density(m.in_dim(), m.in_dim(), rng);
    EXPECT_NEAR(qcbnorm::apply(m, rho.matrix()).trace().real(), 1.0, 1e-10);
  }
}

TEST(Choi, PositiveAndMatchesDefinition) {
  Rng rng(3);
  for (const auto& m : corpus(rng)) {
    const ChoiOperator c = choi(m);
    EXPECT_GE(detail::eigvals_raw(c.op.matrix()).minCoeff(), -1e-10);
    // id (x) M applied to Phi, summed over the matrix units of A.
    const auto d = static_cast<Eigen::Index>(m.in_dim());
    Matrix expected = Matrix::Zero(d * static_cast<Eigen::Index>(m.out_dim()), d * static_cast<Eigen::Index>(m.out_dim()));
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        Matrix eij = Matrix::Zero(d, d);
        eij(i, j) = 1.0;
        expected += tensor(eij, qcbnorm::apply(m, eij));
      }
    }
    EXPECT_MATRIX_NEAR(c.op.matrix(), expected, 1e-10);
  }
}

TEST(Stinespring, IsometryAndRoundTrip) {
  Rng rng(4);
  for (const auto& m : corpus(rng)) {
    const StinespringDilation u = stinespring(m);
    const auto n = static_cast<Eigen::Index>(m.in_dim());
    EXPECT_MATRIX_NEAR(u.map_matrix.adjoint() * u.map_matrix, Matrix::Identity(n, n), 1e-10);
    const CPMap back = from_stinespring(u);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        Matrix eij = Matrix::Zero(n, n);
        eij(i, j) = 1.0;
        EXPECT_MATRIX_NEAR(apply_dilation(u, eij), qcbnorm::apply(m, eij), 1e-10);
        EXPECT_MATRIX_NEAR(qcbnorm::apply(back, eij), qcbnorm::apply(m, eij), 1e-10);
      }
    }
  }
}

TEST(Complementary, TraceAndIdentityAreMutualComplements) {
  for (std::size_t d : {2, 3}) {
    expect_same_spectrum(choi(complementary(trace_map(d))).op.matrix(), choi(identity_channel(d)).op.matrix(), 1e-10);
    expect_same_spectrum(choi(complementary(identity_channel(d))).op.matrix(), choi(trace_map(d)).op.matrix(), 1e-10);
  }
}

TEST(Complementary, PreservesTracePreservation) {
  Rng rng(5);
  for (const auto& m : corpus(rng)) EXPECT_TRUE(complementary(m).trace_preserving());
}

TEST(Complementary, DoubleComplementOfIsometricChannel) {
  Rng rng(6);
  for (std::size_t d : {2, 3}) {
    const CPMap v = random_channel(d, d + 1, 1, rng);
    expect_same_spectrum(choi(complementary(complementary(v))).op.matrix(), choi(v).op.matrix(), 1e-8);
  }
}

TEST(TensorMap, IdentityAndFactorisation) {
  EXPECT_MATRIX_NEAR(choi(tensor_map(identity_channel(2), identity_channel(3))).op.matrix(),
                     choi(identity_channel(6)).op.matrix(), 1e-12);
  Rng rng(7);
  const CPMap m1 = random_channel(2, 3, 2, rng);
  const CPMap m2 = random_channel(3, 2, 2, rng);
  const DensityMatrix rho = random_density(2, 2, rng);
  const DensityMatrix sigma = random_density(3, 3, rng);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(tensor_map(m1, m2), tensor(rho, sigma).matrix()),
                     tensor(qcbnorm::apply(m1, rho.matrix()), qcbnorm::apply(m2, sigma.matrix())), 1e-12);
}

TEST(TensorMap, ChoiIsPermutedProduct) {
  Rng rng(8);
  const CPMap m1 = random_channel(2, 3, 2, rng);
  const CPMap m2 = random_channel(2, 2, 3, rng);
  // Choi(M1 (x) M2) on A1 A2 B1 B2 versus Choi(M1) (x) Choi(M2) on A1 B1 A2 B2.
  const Matrix product = tensor(choi(m1).op.matrix(), choi(m2).op.matrix());
  const std::size_t order[] = {0, 2, 1, 3};
  const Matrix permuted = permute_systems(product, SystemLayout{2, 3, 2, 2}, order);
  EXPECT_MATRIX_NEAR(choi(tensor_map(m1, m2)).op.matrix(), permuted, 1e-10);
}

TEST(Compose, TraceAfterChannelIsTrace) {
  Rng rng(9);
  const CPMap n = random_channel(3, 2, 2, rng);
  EXPECT_MATRIX_NEAR(choi(compose(trace_map(2), n)).op.matrix(), choi(trace_map(3)).op.matrix(), 1e-12);
  EXPECT_THROW(compose(trace_map(3), n), DimensionMismatch);
}

TEST(SandwichMap, ClosedForms) {
  const CPMap g = sandwich_map(DensityMatrix::maximally_mixed(3), RenyiOrder(0.5));
  Rng rng(10);
  const Matrix x = random_gaussian(3, 3, rng);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(g, x), x / 3.0, 1e-12);
  const CPMap p = sandwich_map(DensityMatrix::basis_state(2, 0), RenyiOrder(0.7));
  const Matrix y = random_gaussian(2, 2, rng);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = y(0, 0);
  EXPECT_MATRIX_NEAR(qcbnorm::apply(p, y), expected, 1e-12);
  EXPECT_FALSE(p.trace_preserving());
  EXPECT_THROW(sandwich_map(DensityMatrix::maximally_mixed(2), RenyiOrder(2.0)), RegimeError);
}

TEST(SandwichMap, ComposedChoiIsConjugatedChoi) {
  Rng rng(11);
  const CPMap n = random_channel(2, 3, 2, rng);
  const DensityMatrix sigma = random_density(3, 3, rng);
  const RenyiOrder a(0.6);
  const Matrix k = tensor(Matrix(Matrix::Identity(2, 2)), matrix_power(sigma.op(), a.sandwich_exponent()).matrix());
  EXPECT_MATRIX_NEAR(choi(compose(sandwich_map(sigma, a), n)).op.matrix(), k * choi(n).op.matrix() * k, 1e-12);
}

TEST(Zoo, ClosedForms) {
  EXPECT_MATRIX_NEAR(choi(channel_zoo("depolarizing", {{"p", 0.0}})).op.matrix(), choi(identity_channel(2)).op.matrix(),
                     1e-12);
  Rng rng(12);
  const CPMap ad = channel_zoo("amplitude_damping", {{"gamma", 1.0}});
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = random_density(2, 2, rng);
    EXPECT_MATRIX_NEAR(qcbnorm::apply(ad, rho.matrix()), DensityMatrix::basis_state(2, 0).matrix(), 1e-12);
  }
  const CPMap deph = channel_zoo("dephasing", {{"p", 0.25}});
  const DensityMatrix rho = random_density(2, 2, rng);
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_MATRIX_NEAR(qcbnorm::apply(deph, rho.matrix()), 0.75 * rho.matrix() + 0.25 * z * rho.matrix() * z, 1e-12);
  const CPMap dep = channel_zoo("depolarizing", {{"p", 0.3}});
  EXPECT_MATRIX_NEAR(qcbnorm::apply(dep, rho.matrix()), 0.7 * rho.matrix() + 0.3 * Matrix(Matrix::Identity(2, 2)) / 2.0, 1e-12);
}

TEST(Zoo, AllMembersTracePreserving) {
  for (const auto& name : zoo_names()) {
    const CPMap m = channel_zoo(name);
    const auto n = static_cast<Eigen::Index>(m.in_dim());
    EXPECT_MATRIX_NEAR(m.kraus_gram(), Matrix::Identity(n, n), 1e-12) << name;
  }
}

TEST(Zoo, RejectsBadInput) {
  EXPECT_THROW(channel_zoo("erasure"), InvalidParameter);
  EXPECT_THROW(channel_zoo("depolarizing", {{"p", 1.5}}), InvalidParameter);
  EXPECT_THROW(channel_zoo("dephasing", {{"gamma", 0.1}}), InvalidParameter);
  EXPECT_THROW(channel_zoo("identity", {{"d", 2.5}}), InvalidParameter);
}

TEST(RandomChannel, TracePreservingAndDeterministic) {
  Rng rng(13);
  const CPMap m = random_channel(3, 2, 2, rng);
  EXPECT_MATRIX_NEAR(m.kraus_gram(), Matrix::Identity(3, 3), 1e-10);
  const CPMap iso = random_channel(2, 3, 1, rng);
  EXPECT_EQ(sorted_nonzero_spectrum(choi(iso).op.matrix()).size(), 1);
  Rng a(5);
  Rng b(5);
  const CPMap ma = random_channel(2, 2, 2, a);
  const CPMap mb = random_channel(2, 2, 2, b);
  ASSERT_EQ(ma.kraus_count(), mb.kraus_count());
  for (std::size_t i = 0; i < ma.kraus_count(); ++i) EXPECT_EQ(ma.kraus()[i], mb.kraus()[i]);
  EXPECT_THROW(random_channel(3, 1, 2, rng), DimensionMismatch);
}

TEST(RotateKraus, SameMap) {
  Rng rng(14);
  const CPMap m = random_channel(2, 2, 2, rng);
  const CPMap r = rotate_kraus(m, random_isometry(2, 4, rng));
  EXPECT_EQ(r.kraus_count(), 4u);
  EXPECT_MATRIX_NEAR(choi(r).op.matrix(), choi(m).op.matrix(), 1e-12);
}

}  // namespace
}  // namespace qcbnorm
