#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "qcbnorm/optimizer.hpp"
#include "qcbnorm/renyi_order.hpp"
#include "qcbnorm/types.hpp"

namespace qcbnorm {

/// Divergence in bits, or +infinity as a tagged state. The +infinity case is
/// never represented by a floating-point infinity.
class DivergenceValue {
 public:
  static DivergenceValue finite(double bits) { return DivergenceValue(bits, true); }
  static DivergenceValue infinite() { return DivergenceValue(0.0, false); }

  bool is_finite() const { return finite_; }
  /// Throws Error when called on +infinity.
  double value() const;

  bool operator==(const DivergenceValue& other) const = default;

 private:
  DivergenceValue(double v, bool f) : value_(v), finite_(f) {}
  double value_;
  bool finite_;
};

std::ostream& operator<<(std::ostream& os, const DivergenceValue& d);

/// Shannon entropy in bits of a nonnegative spectrum (0 log 0 = 0).
double spectrum_entropy(const RealVector& spectrum);

/// -tr rho log2 rho
double von_neumann_entropy(const DensityMatrix& rho);

/// tr rho (log2 rho - log2 sigma) if supp(rho) is inside supp(sigma), +infinity otherwise.
DivergenceValue relative_entropy(const DensityMatrix& rho, const HermitianOperator& sigma);

/// Sandwiched Renyi divergence in bits. alpha in [1/2,1): +infinity iff the
/// supports are orthogonal; alpha > 1: +infinity unless supp(rho) is inside
/// supp(sigma), with sigma powers taken on its support.
DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const HermitianOperator& sigma,
                                 const RenyiOrder& alpha);

/// tr rho (log2 rho - log2 sigma)^2 - D(rho||sigma)^2, in bits squared.
/// Throws UndefinedVarianceError unless supp(rho) is inside supp(sigma).
double relative_entropy_variance(const DensityMatrix& rho, const HermitianOperator& sigma);

/// I(A:B) = H(A) + H(B) - H(AB) for a two-factor layout.
double mutual_information(const DensityMatrix& rho_ab, const SystemLayout& layout);

/// I(A:B) where A and B are groups of factors of `layout`; other factors are traced out.
double mutual_information(const DensityMatrix& rho, const SystemLayout& layout,
                          std::span<const std::size_t> a, std::span<const std::size_t> b);

enum class CmiForm {
  /// H(XY) + H(ZY) - H(XYZ) - H(Y); nonnegative by strong subadditivity.
  kStandard,
  /// H(XY) + H(ZY) - H(XYZ) - H(Z); the conditioning entropy swapped. Kept only
  /// to document that this variant is not a valid CMI (it goes negative).
  kSubtractZ,
};

/// I(X:Z|Y) for a three-factor layout (X, Y, Z).
double conditional_mutual_information(const DensityMatrix& rho_xyz, const SystemLayout& layout,
                                      CmiForm form = CmiForm::kStandard);

/// I(X:Z|Y) where X, Y, Z are disjoint groups of factors of `layout`.
double conditional_mutual_information(const DensityMatrix& rho, const SystemLayout& layout,
                                      std::span<const std::size_t> x, std::span<const std::size_t> y,
                                      std::span<const std::size_t> z,
                                      CmiForm form = CmiForm::kStandard);

struct RenyiMutualInformation {
  double value = 0.0;  // bits
  DensityMatrix sigma_b = DensityMatrix::maximally_mixed(1);
  OptimizationOutcome outcome;
};

/// min over sigma_B of D_alpha(rho_AB || rho_A (x) sigma_B), alpha in [1/2, 1).
RenyiMutualInformation renyi_mutual_information(const DensityMatrix& rho_ab, const SystemLayout& layout,
                                                const RenyiOrder& alpha, const OptimizerConfig& cfg,
                                                std::span<const DensityMatrix> warm_starts = {});

}  // namespace qcbnorm
