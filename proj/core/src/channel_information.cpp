#include "qcbnorm/channel_information.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "qcbnorm/entropy.hpp"
#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"
#include "qcbnorm/states.hpp"
#include "objectives.hpp"

namespace qcbnorm {

namespace {

void require_channel(const CPMap& channel, const char* what) {
  if (!channel.trace_preserving()) {
    throw ContractError(std::string(what) + ": the map is not trace preserving");
  }
}

void require_cap(const CPMap& first, const CPMap& second, std::size_t cap, const char* what) {
  const std::size_t joint = first.in_dim() * second.in_dim();
  if (joint > cap) {
    std::ostringstream msg;
    msg << what << ": product input dimension " << joint << " exceeds cap " << cap;
    throw DimensionCapExceeded(msg.str());
  }
}

double entropy_of(const Matrix& x) {
  return spectrum_entropy(detail::eigvals_raw(detail::hermitian_part(x)));
}

// Restart results within the optimality window, best first, merged at kDedupDistance.
std::vector<DensityMatrix> near_optimal_inputs(const OptimizationOutcome& outcome) {
  std::vector<std::size_t> order(outcome.per_restart_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return outcome.per_restart_values[a] > outcome.per_restart_values[b];
  });
  std::vector<DensityMatrix> kept;
  for (const std::size_t i : order) {
    if (outcome.value - outcome.per_restart_values[i] > kOptimalityWindow) break;
    const DensityMatrix& candidate = outcome.per_restart_arguments[i];
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const DensityMatrix& k) {
      return trace_distance(k, candidate) < kDedupDistance;
    });
    if (!duplicate) kept.push_back(candidate);
  }
  return kept;
}

// (N (x) id_R) applied to the eigen-purification of rho; factors (B, R).
DensityMatrix purified_output(const CPMap& channel, const DensityMatrix& rho) {
  const DensityMatrix psi = purify(rho).density();
  const CPMap lifted = tensor_map(channel, identity_channel(rho.dim()));
  return DensityMatrix::from_psd_unchecked(apply(lifted, psi.matrix()));
}

double variance_against_marginals(const DensityMatrix& rho, const SystemLayout& layout,
                                  std::span<const std::size_t> b, std::span<const std::size_t> a) {
  const DensityMatrix rho_b = partial_trace(rho, layout, b);
  const DensityMatrix rho_a = partial_trace(rho, layout, a);
  return relative_entropy_variance(rho, tensor(rho_b, rho_a).op());
}

}  // namespace

double channel_mutual_information_objective(const CPMap& channel, const DensityMatrix& rho) {
  const CPMap comp = complementary(channel);
  return entropy_of(rho.matrix()) + entropy_of(apply(channel, rho.matrix())) -
         entropy_of(apply(comp, rho.matrix()));
}

ChannelInfoResult channel_mutual_information(const CPMap& channel, const OptimizerConfig& cfg,
                                             std::span<const DensityMatrix> warm_starts) {
  require_channel(channel, "channel_mutual_information");
  const CPMap comp = complementary(channel);
  const StateObjective objective = [&](const DensityMatrix& rho) -> std::optional<double> {
    return entropy_of(rho.matrix()) + entropy_of(apply(channel, rho.matrix())) -
           entropy_of(apply(comp, rho.matrix()));
  };
  ChannelInfoResult out;
  out.outcome = optimize_over_states(objective, channel.in_dim(), Sense::kMaximize, cfg, warm_starts);
  out.value = out.outcome.value;
  out.optimizer_inputs = near_optimal_inputs(out.outcome);
  out.center = apply_channel(channel, out.outcome.argument);
  return out;
}

double divergence_center_check(const CPMap& channel, const ChannelInfoResult& result) {
  if (result.optimizer_inputs.empty()) {
    throw InvalidParameter("divergence_center_check: no optimizer inputs recorded");
  }
  double worst = 0.0;
  for (const auto& rho : result.optimizer_inputs) {
    worst = std::max(worst, trace_distance(apply_channel(channel, rho), result.center));
  }
  const auto& values = result.outcome.per_restart_values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (result.outcome.value - values[i] > kOptimalityWindow) continue;
    worst = std::max(worst, trace_distance(apply_channel(channel, result.outcome.per_restart_arguments[i]), result.center));
  }
  return worst;
}

namespace {

RenyiInfoResult to_info(OptimizationOutcome outcome) {
  RenyiInfoResult out;
  out.value = outcome.value;
  out.argument = outcome.argument;
  out.outcome = std::move(outcome);
  return out;
}

OptimizerConfig single_warm_inner(const OptimizerConfig& cfg) {
  OptimizerConfig inner = cfg.inner(1);
  inner.pin_maximally_mixed = false;
  return inner;
}

// F(rho, sigma) = log2 f(rho, sigma) / (alpha - 1) and one of its gradients.
std::optional<ValueGradient> saddle_value(const internal::RenyiSaddle& saddle, const Matrix& rho,
                                          const Matrix& sigma, bool in_rho) {
  const double a = saddle.alpha();
  const auto e = saddle.evaluate(rho, sigma, in_rho, !in_rho);
  if (!(e.value > 0.0)) return std::nullopt;
  const double scale = 1.0 / ((a - 1.0) * std::log(2.0) * e.value);
  return ValueGradient{std::log2(e.value) / (a - 1.0), scale * (in_rho ? e.grad_rho : e.grad_sigma)};
}

// Outer level over one argument; the inner level optimises the other one from the
// previous inner optimum. The outer gradient is the partial gradient at the inner optimum.
OptimizationOutcome nested_gradient(const CPMap& channel, const RenyiOrder& alpha, const OptimizerConfig& cfg,
                                    std::span<const DensityMatrix> warm_starts, bool outer_is_rho) {
  const auto saddle = std::make_shared<internal::RenyiSaddle>(choi(channel).op.matrix(), channel.in_dim(),
                                                              channel.out_dim(), alpha.value());
  const std::size_t outer_dim = outer_is_rho ? channel.in_dim() : channel.out_dim();
  const std::size_t inner_dim = outer_is_rho ? channel.out_dim() : channel.in_dim();
  const Sense outer_sense = outer_is_rho ? Sense::kMaximize : Sense::kMinimize;
  const Sense inner_sense = outer_is_rho ? Sense::kMinimize : Sense::kMaximize;
  const OptimizerConfig inner = single_warm_inner(cfg);

  const SmoothStateObjectiveFactory factory = [&, saddle](std::size_t) -> SmoothStateObjective {
    auto last = std::make_shared<DensityMatrix>(DensityMatrix::maximally_mixed(inner_dim));
    return [&, saddle, last](const DensityMatrix& x) -> std::optional<ValueGradient> {
      const SmoothStateObjectiveFactory inner_factory = [&](std::size_t) -> SmoothStateObjective {
        return [&](const DensityMatrix& y) {
          return outer_is_rho ? saddle_value(*saddle, x.matrix(), y.matrix(), false)
                              : saddle_value(*saddle, y.matrix(), x.matrix(), true);
        };
      };
      const DensityMatrix warm[] = {*last};
      const auto best = optimize_over_states_smooth(inner_factory, inner_dim, inner_sense, inner, warm);
      *last = best.argument;
      return outer_is_rho ? saddle_value(*saddle, x.matrix(), best.argument.matrix(), true)
                          : saddle_value(*saddle, best.argument.matrix(), x.matrix(), false);
    };
  };
  return optimize_over_states_smooth(factory, outer_dim, outer_sense, cfg, warm_starts);
}

}  // namespace

RenyiInfoResult renyi_channel_information_primal(const CPMap& channel, const RenyiOrder& alpha,
                                                 const OptimizerConfig& cfg,
                                                 std::span<const DensityMatrix> warm_starts,
                                                 NestedSolver solver) {
  alpha.require_quasi("renyi_channel_information_primal");
  require_channel(channel, "renyi_channel_information_primal");
  if (solver == NestedSolver::kGradient) return to_info(nested_gradient(channel, alpha, cfg, warm_starts, true));

  const std::size_t db = channel.out_dim();
  const Matrix c = choi(channel).op.matrix();
  const SystemLayout layout{channel.in_dim(), db};
  const Matrix id_b = Matrix::Identity(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
  const OptimizerConfig inner = single_warm_inner(cfg);

  const StateObjectiveFactory factory = [&](std::size_t) -> StateObjective {
    auto last_sigma = std::make_shared<DensityMatrix>(DensityMatrix::maximally_mixed(db));
    return [&, last_sigma](const DensityMatrix& rho) -> std::optional<double> {
      // rho_AB = (sqrt(rho) (x) 1) Choi (sqrt(rho) (x) 1)
      const Matrix root = tensor(internal::psd_power(rho.matrix(), 0.5), id_b);
      const DensityMatrix rho_ab = DensityMatrix::from_psd_unchecked(root * c * root);
      const DensityMatrix warm[] = {*last_sigma};
      auto rmi = renyi_mutual_information(rho_ab, layout, alpha, inner, warm);
      *last_sigma = rmi.sigma_b;
      return rmi.value;
    };
  };
  return to_info(optimize_over_states(factory, channel.in_dim(), Sense::kMaximize, cfg, warm_starts));
}

RenyiInfoResult renyi_channel_information_dual(const CPMap& channel, const RenyiOrder& alpha,
                                               const OptimizerConfig& cfg,
                                               std::span<const DensityMatrix> warm_starts,
                                               NestedSolver solver) {
  alpha.require_quasi("renyi_channel_information_dual");
  require_channel(channel, "renyi_channel_information_dual");
  // The spectrum of the sandwiched Choi of Gamma_sigma o N is that of
  // Z^dagger (rho^(1/a) (x) sigma^((1-a)/a)) Z, so both solvers share the saddle function.
  if (solver == NestedSolver::kGradient) return to_info(nested_gradient(channel, alpha, cfg, warm_starts, false));

  const double a = alpha.value();
  const double prefactor = a / (a - 1.0);
  const OptimizerConfig inner = single_warm_inner(cfg);

  const StateObjectiveFactory factory = [&](std::size_t) -> StateObjective {
    auto last_rho = std::make_shared<DensityMatrix>(DensityMatrix::maximally_mixed(channel.in_dim()));
    return [&, last_rho](const DensityMatrix& sigma) -> std::optional<double> {
      const CPMap composed = compose(sandwich_map(sigma, alpha), channel);
      const DensityMatrix warm[] = {*last_rho};
      const auto cb = cb_quasinorm_sandwich(composed, alpha, inner, warm);
      *last_rho = cb.argument;
      if (!(cb.value > 0.0)) return std::nullopt;
      return prefactor * std::log2(cb.value);
    };
  };
  return to_info(optimize_over_states(factory, channel.out_dim(), Sense::kMinimize, cfg, warm_starts));
}

AdditivityGap renyi_additivity_gap(const CPMap& first, const CPMap& second, const RenyiOrder& alpha,
                                   const OptimizerConfig& cfg, std::size_t dimension_cap, NestedSolver solver) {
  require_cap(first, second, dimension_cap, "renyi_additivity_gap");
  const auto r1 = renyi_channel_information_primal(first, alpha, cfg, {}, solver);
  const auto r2 = renyi_channel_information_primal(second, alpha, cfg, {}, solver);
  const DensityMatrix warm[] = {tensor(r1.argument, r2.argument)};
  const auto joint = renyi_channel_information_primal(tensor_map(first, second), alpha, cfg, warm, solver);
  return {joint.value, r1.value, r2.value, joint.value - r1.value - r2.value};
}

AdditivityGap mutual_information_additivity_gap(const CPMap& first, const CPMap& second,
                                                const OptimizerConfig& cfg, std::size_t dimension_cap) {
  require_cap(first, second, dimension_cap, "mutual_information_additivity_gap");
  const auto r1 = channel_mutual_information(first, cfg);
  const auto r2 = channel_mutual_information(second, cfg);
  const DensityMatrix warm[] = {tensor(r1.outcome.argument, r2.outcome.argument)};
  const auto joint = channel_mutual_information(tensor_map(first, second), cfg, warm);
  return {joint.value, r1.value, r2.value, joint.value - r1.value - r2.value};
}

double dispersion_at(const CPMap& channel, const DensityMatrix& input) {
  const DensityMatrix rho = purified_output(channel, input);
  const SystemLayout layout{channel.out_dim(), input.dim()};
  const std::size_t b[] = {0};
  const std::size_t r[] = {1};
  return variance_against_marginals(rho, layout, b, r);
}

DispersionResult channel_dispersion(const CPMap& channel, const OptimizerConfig& cfg,
                                    std::span<const DensityMatrix> warm_starts) {
  require_channel(channel, "channel_dispersion");
  DispersionResult out;
  out.information = channel_mutual_information(channel, cfg, warm_starts);
  const auto& inputs = out.information.optimizer_inputs;
  const std::size_t d = channel.in_dim();
  const std::size_t db = channel.out_dim();

  std::vector<DensityMatrix> outputs;
  outputs.reserve(inputs.size());
  for (const auto& rho : inputs) {
    outputs.push_back(purified_output(channel, rho));
    const SystemLayout layout{db, d};
    const std::size_t b[] = {0};
    const std::size_t r[] = {1};
    out.witnesses.push_back({"pure", rho, variance_against_marginals(outputs.back(), layout, b, r)});
  }
  // Flagged mixtures: rho_BRF = (rho_BR^i (x) |0><0| + rho_BR^j (x) |1><1|) / 2.
  const Matrix flag0 = DensityMatrix::basis_state(2, 0).matrix();
  const Matrix flag1 = DensityMatrix::basis_state(2, 1).matrix();
  const SystemLayout flagged{db, d, 2};
  const std::size_t b[] = {0};
  const std::size_t rf[] = {1, 2};
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      const Matrix mix = 0.5 * (tensor(outputs[i].matrix(), flag0) + tensor(outputs[j].matrix(), flag1));
      const DensityMatrix rho = DensityMatrix::from_psd_unchecked(mix);
      const DensityMatrix avg = DensityMatrix::from_psd_unchecked(0.5 * (inputs[i].matrix() + inputs[j].matrix()));
      out.witnesses.push_back({"mixture", avg, variance_against_marginals(rho, flagged, b, rf)});
    }
  }
  if (!out.witnesses.empty()) {
    const auto [lo, hi] = std::minmax_element(
        out.witnesses.begin(), out.witnesses.end(),
        [](const DispersionWitness& x, const DispersionWitness& y) { return x.variance < y.variance; });
    out.v_min = lo->variance;
    out.v_max = hi->variance;
  }
  return out;
}

DispersionGap dispersion_additivity_gap(const CPMap& first, const CPMap& second, const OptimizerConfig& cfg,
                                        std::size_t dimension_cap) {
  require_cap(first, second, dimension_cap, "dispersion_additivity_gap");
  OptimizerConfig c = cfg;
  c.restarts = std::max(c.restarts, kDispersionRestarts);
  DispersionGap out;
  out.first = channel_dispersion(first, c);
  out.second = channel_dispersion(second, c);
  std::vector<DensityMatrix> warm;
  for (const auto& x : out.first.information.optimizer_inputs) {
    for (const auto& y : out.second.information.optimizer_inputs) {
      if (warm.size() + 1 >= static_cast<std::size_t>(c.restarts)) break;
      warm.push_back(tensor(x, y));
    }
  }
  out.joint = channel_dispersion(tensor_map(first, second), c, warm);
  out.gap_max = out.joint.v_max - out.first.v_max - out.second.v_max;
  out.gap_min = out.joint.v_min - out.first.v_min - out.second.v_min;
  return out;
}

StructureCheck structure_cmi_check(const CPMap& first, const CPMap& second, const DensityMatrix& input,
                                   const OptimizerConfig& cfg, std::optional<double> optimal_value) {
  require_channel(first, "structure_cmi_check");
  require_channel(second, "structure_cmi_check");
  if (input.dim() != first.in_dim() * second.in_dim()) {
    throw DimensionMismatch("structure_cmi_check: input dimension does not match the product channel");
  }
  const CPMap joint = tensor_map(first, second);
  StructureCheck out;
  out.input_value = channel_mutual_information_objective(joint, input);
  if (optimal_value) {
    out.optimal_value = *optimal_value;
  } else {
    const DensityMatrix warm[] = {input};
    out.optimal_value = channel_mutual_information(joint, cfg, warm).value;
  }
  if (out.optimal_value - out.input_value > kOptimalityWindow) {
    std::ostringstream msg;
    msg << "input is " << (out.optimal_value - out.input_value)
        << " bits below the optimum; the CMIs need not vanish";
    out.warning = msg.str();
  }

  const auto u1 = stinespring(first);
  const auto u2 = stinespring(second);
  const Matrix u = tensor(u1.map_matrix, u2.map_matrix);
  const DensityMatrix rho = DensityMatrix::from_psd_unchecked(u * input.matrix() * u.adjoint());
  // Factors in row order of U1 (x) U2: B1, E1, B2, E2.
  const SystemLayout layout{u1.out_dim, u1.env_dim, u2.out_dim, u2.env_dim};
  const std::size_t b1e1[] = {0, 1};
  const std::size_t b1[] = {0};
  const std::size_t e1[] = {1};
  const std::size_t b2[] = {2};
  const std::size_t e2[] = {3};
  out.cmi_1 = conditional_mutual_information(rho, layout, b1e1, e2, b2);
  out.cmi_2 = conditional_mutual_information(rho, layout, b1, e1, e2);
  return out;
}

}  // namespace qcbnorm
