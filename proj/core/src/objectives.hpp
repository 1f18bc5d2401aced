#pragma once

// Fast evaluators shared by the optimisation-backed operations. Each one is
// checked against the direct full-matrix definition in the unit tests.

#include <cstddef>

#include "qcbnorm/types.hpp"

namespace qcbnorm::internal {

/// A PSD operator X on A (x) B held as a thin factor Z (X = Z Z^dagger).
/// Evaluates tr[(Z^dagger (P (x) S) Z)^alpha], i.e. the alpha power trace of
/// (P^1/2 (x) S^1/2) X (P^1/2 (x) S^1/2), without forming the full product.
class FactoredBipartite {
 public:
  FactoredBipartite(const Matrix& psd, std::size_t dim_a, std::size_t dim_b);

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_b() const { return dim_b_; }
  std::size_t rank() const { return static_cast<std::size_t>(factor_.cols()); }
  const Matrix& factor() const { return factor_; }

  /// Spectrum of Z^dagger (P (x) S) Z; S may be empty meaning identity.
  RealVector sandwiched_spectrum(const Matrix& p, const Matrix* s) const;

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  Matrix factor_;
};

/// f(rho, sigma) = tr[(Z^dagger (rho^(1/a) (x) sigma^((1-a)/a)) Z)^a] for a PSD operator
/// Z Z^dagger on A (x) B, with its gradients in rho and sigma (df = tr(G drho)).
/// For a Choi operator this is the common saddle function of the Renyi channel information.
class RenyiSaddle {
 public:
  RenyiSaddle(const Matrix& psd, std::size_t dim_a, std::size_t dim_b, double alpha);

  struct Evaluation {
    double value = 0.0;
    Matrix grad_rho;    // empty unless requested
    Matrix grad_sigma;  // empty unless requested
  };

  Evaluation evaluate(const Matrix& rho, const Matrix& sigma, bool want_rho, bool want_sigma) const;

  std::size_t dim_a() const { return factored_.dim_a(); }
  std::size_t dim_b() const { return factored_.dim_b(); }
  double alpha() const { return alpha_; }

 private:
  FactoredBipartite factored_;
  double alpha_;
};

/// Frechet derivative of X -> X^p at a PSD x, applied to h (Daleckii-Krein).
Matrix power_derivative(const Matrix& x, double p, const Matrix& h);

/// sum of lambda^alpha over the eigenvalues above the rounding-noise floor
/// (64 eps lambda_max n). Used by objectives that are minimised: a support
/// threshold would hand the optimizer a spurious drop near the boundary.
double noise_power_trace(const RealVector& spectrum, double alpha);

/// X^p on the support (eigenvalues <= support threshold map to 0).
Matrix psd_power(const Matrix& x, double p);

}  // namespace qcbnorm::internal
