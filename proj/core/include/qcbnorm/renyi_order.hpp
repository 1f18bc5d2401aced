#pragma once

namespace qcbnorm {

/// Renyi order alpha in [1/2, 1) (quasi-norm regime) or (1, inf) (norm regime).
class RenyiOrder {
 public:
  enum class Regime { kQuasi, kStandard };

  /// Throws RegimeError for alpha < 1/2, alpha == 1 or non-finite alpha.
  explicit RenyiOrder(double alpha);

  double value() const { return alpha_; }
  Regime regime() const { return regime_; }
  bool is_quasi() const { return regime_ == Regime::kQuasi; }

  /// Exponent (1 - alpha) / (2 alpha) of the reference state in the sandwich.
  double sandwich_exponent() const { return (1.0 - alpha_) / (2.0 * alpha_); }

  /// Throws RegimeError unless alpha is in [1/2, 1).
  const RenyiOrder& require_quasi(const char* what) const;

 private:
  double alpha_;
  Regime regime_;
};

}  // namespace qcbnorm
