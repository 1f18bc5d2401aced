#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qcbnorm/linalg.hpp"
#include "qcbnorm/states.hpp"
#include "qcbnorm/types.hpp"

namespace qcbnorm::testing {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline DensityMatrix diag_state(std::initializer_list<double> p) { return DensityMatrix(diag(p)); }

/// Full-rank random state with eigenvalues bounded away from zero.
inline DensityMatrix full_rank_state(std::size_t d, Rng& rng) {
  const Matrix m = 0.9 * random_density(d, d, rng).matrix() + 0.1 * DensityMatrix::maximally_mixed(d).matrix();
  return DensityMatrix::from_psd_unchecked(m);
}

inline double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

#define EXPECT_MATRIX_NEAR(a, b, tol) EXPECT_LE(::qcbnorm::testing::max_abs((a) - (b)), (tol))

}  // namespace qcbnorm::testing
