#include "qcbnorm/cb_quasinorm.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "objectives.hpp"
#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"
#include "qcbnorm/states.hpp"

namespace qcbnorm {

namespace {

double norm_from_spectrum(const RealVector& spectrum, double alpha) {
  return std::pow(internal::noise_power_trace(spectrum, alpha), 1.0 / alpha);
}

// rho -> || (rho^(1/2a) (x) 1) C (rho^(1/2a) (x) 1) ||_a
StateObjective sandwich_objective(const CPMap& map, double alpha) {
  auto factored = std::make_shared<internal::FactoredBipartite>(choi(map).op.matrix(), map.in_dim(),
                                                                map.out_dim());
  return [factored, alpha](const DensityMatrix& rho) -> std::optional<double> {
    const Matrix p = internal::psd_power(rho.matrix(), 1.0 / alpha);
    const double v = norm_from_spectrum(factored->sandwiched_spectrum(p, nullptr), alpha);
    if (!(v > 0.0)) return std::nullopt;
    return v;
  };
}

}  // namespace

OptimizationOutcome cb_quasinorm_sandwich(const CPMap& map, const RenyiOrder& alpha,
                                          const OptimizerConfig& cfg,
                                          std::span<const DensityMatrix> warm_starts) {
  alpha.require_quasi("cb_quasinorm");
  return optimize_over_states(sandwich_objective(map, alpha.value()), map.in_dim(), Sense::kMinimize, cfg,
                              warm_starts);
}

CbNormResult cb_quasinorm_primal(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg,
                                 std::span<const DensityMatrix> warm_starts) {
  auto outcome = cb_quasinorm_sandwich(map, alpha, cfg, warm_starts);
  CbNormResult out;
  out.value = outcome.value;
  out.optimizer_state = outcome.argument;
  out.dual_value = cb_quasinorm_dual(map, alpha, cfg);
  out.agreement_gap = std::abs(std::log2(out.value) - std::log2(out.dual_value));
  out.outcome = std::move(outcome);
  return out;
}

double cb_quasinorm_dual(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg) {
  alpha.require_quasi("cb_quasinorm_dual");
  const double a = alpha.value();
  const CPMap comp = complementary(map);
  const StateObjective objective = [&](const DensityMatrix& x) -> std::optional<double> {
    const RealVector out_spec = detail::eigvals_raw(detail::hermitian_part(apply(comp, x.matrix())));
    const RealVector in_spec = detail::eigvals_raw(x.matrix());
    const double num = norm_from_spectrum(out_spec, a);
    const double den = norm_from_spectrum(in_spec, a);
    if (!(num > 0.0) || !(den > 0.0)) return std::nullopt;
    return num / den;
  };
  return optimize_over_states(objective, map.in_dim(), Sense::kMinimize, cfg).value;
}

double cb_quasinorm_pure_ratio(const CPMap& map, const RenyiOrder& alpha, const OptimizerConfig& cfg) {
  alpha.require_quasi("cb_quasinorm_pure_ratio");
  const double a = alpha.value();
  const auto d = static_cast<Eigen::Index>(map.in_dim());
  const auto dout = static_cast<Eigen::Index>(map.out_dim());
  const auto r = static_cast<Eigen::Index>(map.kraus_count());
  const StateObjective objective = [&](const DensityMatrix& rho) -> std::optional<double> {
    const auto phi = purify(rho);
    // phi(i*d + j) with i on the input factor; as a column-major d x d map this is Phi^T.
    Eigen::Map<const Matrix> phi_t(phi.amplitudes().data(), d, d);
    Matrix outputs(dout * d, r);
    for (Eigen::Index k = 0; k < r; ++k) {
      Eigen::Map<Matrix> w(outputs.col(k).data(), d, dout);
      w.noalias() = phi_t * map.kraus()[static_cast<std::size_t>(k)].transpose();
    }
    const RealVector spec = detail::eigvals_raw(detail::hermitian_part(outputs.adjoint() * outputs));
    const double num = norm_from_spectrum(spec, a);
    const double den = norm_from_spectrum(detail::eigvals_raw(rho.matrix()), a);
    if (!(num > 0.0) || !(den > 0.0)) return std::nullopt;
    return num / den;
  };
  return optimize_over_states(objective, map.in_dim(), Sense::kMinimize, cfg).value;
}

double cb_norm_geq1(const CPMap& map, double alpha, const OptimizerConfig& cfg) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "cb_norm_geq1: alpha=" << alpha << " must be >= 1";
    throw RegimeError(msg.str());
  }
  return optimize_over_states(sandwich_objective(map, alpha), map.in_dim(), Sense::kMaximize, cfg).value;
}

MultiplicativityGap multiplicativity_gap(const CPMap& first, const CPMap& second, const RenyiOrder& alpha,
                                         const OptimizerConfig& cfg, std::size_t dimension_cap) {
  alpha.require_quasi("multiplicativity_gap");
  const std::size_t joint_dim = first.in_dim() * second.in_dim();
  if (joint_dim > dimension_cap) {
    std::ostringstream msg;
    msg << "multiplicativity_gap: product input dimension " << joint_dim << " exceeds cap " << dimension_cap;
    throw DimensionCapExceeded(msg.str());
  }
  const auto r1 = cb_quasinorm_sandwich(first, alpha, cfg);
  const auto r2 = cb_quasinorm_sandwich(second, alpha, cfg);
  const DensityMatrix warm[] = {tensor(r1.argument, r2.argument)};
  const auto joint = cb_quasinorm_sandwich(tensor_map(first, second), alpha, cfg, warm);
  MultiplicativityGap out;
  out.joint = joint.value;
  out.first = r1.value;
  out.second = r2.value;
  out.gap = std::log2(out.joint) - std::log2(out.first) - std::log2(out.second);
  return out;
}

}  // namespace qcbnorm
