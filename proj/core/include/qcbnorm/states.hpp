#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcbnorm/types.hpp"

namespace qcbnorm {

/// Explicit random source; every sampler takes one by reference.
using Rng = std::mt19937_64;

/// Unnormalised maximally entangled operator sum_{ij} |i><j| (x) |i><j| on d*d.
HermitianOperator max_entangled(std::size_t d);

/// Eigen-purification sum_i sqrt(lambda_i) |v_i> (x) |i> with ascending
/// eigenvalues. The first tensor factor carries rho; the second is the
/// reference.
PureStateVector purify(const DensityMatrix& rho);

/// The d^2 shift-clock unitaries X^a Z^b, ordered with a as the outer index.
std::vector<Matrix> heisenberg_weyl(std::size_t d);

/// G G^dagger / tr(G G^dagger) with G a d x rank complex Gaussian matrix.
DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng);

/// d_out x d_in matrix with orthonormal columns from the QR of a complex Gaussian matrix.
Matrix random_isometry(std::size_t d_in, std::size_t d_out, Rng& rng);

/// Haar-distributed unitary on d.
Matrix random_unitary(std::size_t d, Rng& rng);

/// Matrix with i.i.d. complex standard Gaussian entries (real and imaginary parts N(0, 1/2)).
Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);

/// Random Hermitian matrix (G + G^dagger)/2.
HermitianOperator random_hermitian(std::size_t d, Rng& rng);

}  // namespace qcbnorm
