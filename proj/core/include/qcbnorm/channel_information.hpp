#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcbnorm/cb_quasinorm.hpp"
#include "qcbnorm/channel.hpp"
#include "qcbnorm/optimizer.hpp"
#include "qcbnorm/renyi_order.hpp"

namespace qcbnorm {

/// Restart results within this many bits of the best count as optimizers.
inline constexpr double kOptimalityWindow = 1e-6;
/// Optimizer inputs closer than this in trace distance are merged.
inline constexpr double kDedupDistance = 1e-4;
inline constexpr int kDispersionRestarts = 32;

struct ChannelInfoResult {
  double value = 0.0;  // bits
  std::vector<DensityMatrix> optimizer_inputs;  // near-optimal inputs, best first
  DensityMatrix center = DensityMatrix::maximally_mixed(1);  // output of the best input
  OptimizationOutcome outcome;
};

/// H(rho) + H(N(rho)) - H(N^C(rho)), which equals H(B|E) + H(B) on the dilated output.
double channel_mutual_information_objective(const CPMap& channel, const DensityMatrix& rho);

/// max over inputs of I(A:B) on the purified channel output. Throws ContractError
/// unless the map is trace preserving.
ChannelInfoResult channel_mutual_information(const CPMap& channel, const OptimizerConfig& cfg,
                                             std::span<const DensityMatrix> warm_starts = {});

/// Largest trace distance between the center and the output of an optimizer input or of
/// any restart result within the optimality window.
double divergence_center_check(const CPMap& channel, const ChannelInfoResult& result);

/// Solver for the nested max-min problems of the Renyi channel information.
/// kGradient runs BFGS at both levels on the common saddle function with analytic
/// gradients (the outer gradient by the envelope theorem). kSimplex nests the
/// derivative-free search literally: renyi_mutual_information inside the primal,
/// cb_quasinorm_sandwich of Gamma_sigma o N inside the dual. kSimplex is slow and
/// meant as an independent cross-check on small channels.
enum class NestedSolver { kGradient, kSimplex };

struct RenyiInfoResult {
  double value = 0.0;  // bits
  DensityMatrix argument = DensityMatrix::maximally_mixed(1);  // rho_A (primal) or sigma_B (dual)
  OptimizationOutcome outcome;
};

/// max over rho_A of min over sigma_B of D_alpha(N(psi_rho) || rho_A (x) sigma_B).
RenyiInfoResult renyi_channel_information_primal(const CPMap& channel, const RenyiOrder& alpha,
                                                 const OptimizerConfig& cfg,
                                                 std::span<const DensityMatrix> warm_starts = {},
                                                 NestedSolver solver = NestedSolver::kGradient);

/// min over sigma_B of alpha/(alpha-1) log2 ||Gamma_sigma o N||_cb.
RenyiInfoResult renyi_channel_information_dual(const CPMap& channel, const RenyiOrder& alpha,
                                               const OptimizerConfig& cfg,
                                               std::span<const DensityMatrix> warm_starts = {},
                                               NestedSolver solver = NestedSolver::kGradient);

struct AdditivityGap {
  double joint = 0.0;
  double first = 0.0;
  double second = 0.0;
  double gap = 0.0;  // joint - first - second
};

/// I_alpha(N1 (x) N2) - I_alpha(N1) - I_alpha(N2) through the primal route, whose inner
/// problem is convex in sigma. The joint problem is warm-started from the product of the
/// factor optimizers.
AdditivityGap renyi_additivity_gap(const CPMap& first, const CPMap& second, const RenyiOrder& alpha,
                                   const OptimizerConfig& cfg,
                                   std::size_t dimension_cap = kDefaultDimensionCap,
                                   NestedSolver solver = NestedSolver::kGradient);

/// I(N1 (x) N2) - I(N1) - I(N2).
AdditivityGap mutual_information_additivity_gap(const CPMap& first, const CPMap& second,
                                                const OptimizerConfig& cfg,
                                                std::size_t dimension_cap = kDefaultDimensionCap);

struct DispersionWitness {
  std::string kind;  // "pure" or "mixture"
  DensityMatrix input;  // optimizer input (for a mixture: the average of the pair)
  double variance = 0.0;
};

struct DispersionResult {
  double v_max = 0.0;
  double v_min = 0.0;
  std::vector<DispersionWitness> witnesses;
  ChannelInfoResult information;
};

/// V(rho_AB || rho_A (x) rho_B) for the eigen-purification of `input` sent through the channel.
double dispersion_at(const CPMap& channel, const DensityMatrix& input);

/// V_max and V_min over the explored optimizer set. Besides the purified optimizers,
/// flagged equal mixtures of every pair of distinct optimizers are evaluated.
DispersionResult channel_dispersion(const CPMap& channel, const OptimizerConfig& cfg,
                                    std::span<const DensityMatrix> warm_starts = {});

struct DispersionGap {
  double gap_max = 0.0;
  double gap_min = 0.0;
  DispersionResult joint;
  DispersionResult first;
  DispersionResult second;
};

/// Additivity gaps of V_max and V_min, joint minus the sum over the factors.
/// `cfg.restarts` is raised to kDispersionRestarts if lower.
DispersionGap dispersion_additivity_gap(const CPMap& first, const CPMap& second, const OptimizerConfig& cfg,
                                        std::size_t dimension_cap = kDefaultDimensionCap);

struct StructureCheck {
  double cmi_1 = 0.0;  // I(B1 E1 : B2 | E2)
  double cmi_2 = 0.0;  // I(B1 : E2 | E1)
  double input_value = 0.0;    // objective at the given input
  double optimal_value = 0.0;  // reference optimum of the product channel
  std::optional<std::string> warning;  // set when the input is not within the optimality window
};

/// Both conditional mutual informations on (U1 (x) U2) rho (U1 (x) U2)^dagger over B1 E1 B2 E2.
/// Without `optimal_value` the product channel mutual information is re-optimised from `input`.
StructureCheck structure_cmi_check(const CPMap& first, const CPMap& second, const DensityMatrix& input,
                                   const OptimizerConfig& cfg, std::optional<double> optimal_value = {});

}  // namespace qcbnorm
