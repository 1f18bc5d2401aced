#pragma once

#include <cstddef>
#include <span>

#include "qcbnorm/channel.hpp"
#include "qcbnorm/errors.hpp"
#include "qcbnorm/optimizer.hpp"
#include "qcbnorm/renyi_order.hpp"

namespace qcbnorm {

/// Largest product input dimension accepted by the tensor-product checks.
inline constexpr std::size_t kDefaultDimensionCap = 9;

class DimensionCapExceeded : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

struct CbNormResult {
  double value = 0.0;  // sandwiched-Choi expression
  DensityMatrix optimizer_state = DensityMatrix::maximally_mixed(1);  // argmin rho_A
  double dual_value = 0.0;    // complementary-map expression
  double agreement_gap = 0.0; // |log2 value - log2 dual_value|
  OptimizationOutcome outcome;
};

/// min over rho_A of || (rho^(1/2a) (x) 1) Choi(M) (rho^(1/2a) (x) 1) ||_a, together
/// with the complementary-map expression as a cross-check. alpha in [1/2, 1).
CbNormResult cb_quasinorm_primal(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg,
                                 std::span<const DensityMatrix> warm_starts = {});

/// Primal expression only (no dual cross-check); the building block of nested optimisations.
OptimizationOutcome cb_quasinorm_sandwich(const CPMap& map, const RenyiOrder& alpha,
                                          const OptimizerConfig& cfg,
                                          std::span<const DensityMatrix> warm_starts = {});

/// min over X >= 0 of ||M^C(X)||_a / ||X||_a, with X restricted to unit trace.
double cb_quasinorm_dual(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg);

/// min over pure phi_AA' of ||id (x) M(phi)||_a / ||tr_A phi||_a, parametrised by
/// the reduced state of phi on the input.
double cb_quasinorm_pure_ratio(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg);

/// alpha >= 1: max over pure phi of ||id (x) M(phi)||_a / ||tr_A phi||_a, through
/// the sandwiched-Choi form with the maximisation sense.
double cb_norm_geq1(const CPMap& map, double alpha, const OptimizerConfig& cfg);

struct MultiplicativityGap {
  double joint = 0.0;   // ||M1 (x) M2||
  double first = 0.0;   // ||M1||
  double second = 0.0;  // ||M2||
  double gap = 0.0;     // log2 joint - log2 first - log2 second
};

/// log2 ||M1 (x) M2|| - log2 ||M1|| - log2 ||M2|| in the quasi-norm regime.
MultiplicativityGap multiplicativity_gap(const CPMap& first, const CPMap& second, const RenyiOrder& alpha,
                                         const OptimizerConfig& cfg,
                                         std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace qcbnorm
