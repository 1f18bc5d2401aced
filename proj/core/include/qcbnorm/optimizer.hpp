#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qcbnorm/types.hpp"

namespace qcbnorm {

enum class Sense { kMinimize, kMaximize };

struct OptimizerConfig {
  int restarts = 8;
  int max_evals = 20000;  // per restart
  double f_tol = 1e-10;
  double x_tol = 1e-9;
  /// Chart-gradient tolerance of the smooth (quasi-Newton) search.
  double g_tol = 1e-7;
  std::uint64_t seed = 0;

  /// Start restart 0 at the maximally mixed state.
  bool pin_maximally_mixed = true;
  /// Initial simplex edge for random and pinned starts, in chart units.
  double initial_step = 0.15;
  /// Initial simplex edge around warm starts.
  double warm_step = 0.02;
  /// Fresh-simplex polishing rounds after the first convergence.
  int max_polish = 6;

  /// Throws InvalidParameter if a field is non-positive.
  void validate() const;

  /// Copy with f_tol and g_tol divided by 10 and the given restart count; used for inner
  /// problems of nested optimisations.
  OptimizerConfig inner(int inner_restarts) const;
};

struct OptimizationOutcome {
  double value = 0.0;
  DensityMatrix argument = DensityMatrix::maximally_mixed(1);
  std::vector<double> per_restart_values;
  std::vector<DensityMatrix> per_restart_arguments;
  bool converged = false;
  long evals_used = 0;

  /// max - min over per_restart_values.
  double restart_spread() const;
};

/// Objective on densities; std::nullopt marks the +infinity barrier.
using StateObjective = std::function<std::optional<double>(const DensityMatrix&)>;

/// Builds a fresh objective per restart, for objectives that carry warm-start
/// state of their own (nested optimisations).
using StateObjectiveFactory = std::function<StateObjective(std::size_t restart)>;

/// Multi-restart Nelder-Mead over the density manifold, through the chart
/// rho = L L^dagger / tr(L L^dagger) with L lower triangular (real diagonal).
///
/// Restart order: the maximally mixed state (if pinned), then `warm_starts`,
/// then random full-rank states drawn from a stream seeded by (seed, restart).
/// Results are merged in restart order, so the outcome does not depend on
/// scheduling.
OptimizationOutcome optimize_over_states(const StateObjective& objective, std::size_t dim,
                                         Sense sense, const OptimizerConfig& cfg,
                                         std::span<const DensityMatrix> warm_starts = {});

OptimizationOutcome optimize_over_states(const StateObjectiveFactory& factory, std::size_t dim,
                                         Sense sense, const OptimizerConfig& cfg,
                                         std::span<const DensityMatrix> warm_starts = {});

/// Value of a smooth objective with its gradient as a Hermitian operator G,
/// so that df = tr(G drho).
struct ValueGradient {
  double value = 0.0;
  Matrix gradient;
};

using SmoothStateObjective = std::function<std::optional<ValueGradient>(const DensityMatrix&)>;
using SmoothStateObjectiveFactory = std::function<SmoothStateObjective(std::size_t restart)>;

/// Multi-restart BFGS on the same chart for objectives with an analytic gradient.
/// Restart order, seeding and merging follow optimize_over_states; max_evals caps
/// the iterations of each restart.
OptimizationOutcome optimize_over_states_smooth(const SmoothStateObjectiveFactory& factory, std::size_t dim,
                                                Sense sense, const OptimizerConfig& cfg,
                                                std::span<const DensityMatrix> warm_starts = {});

/// Chart coordinates <-> densities. Exposed for tests and benchmarks.
namespace chart {
std::size_t coordinate_count(std::size_t dim);
DensityMatrix to_density(std::span<const double> coords, std::size_t dim);
std::vector<double> from_density(const DensityMatrix& rho);
/// Pulls a density-space gradient G back to chart coordinates.
std::vector<double> pull_back(std::span<const double> coords, std::size_t dim, const Matrix& gradient);
}  // namespace chart

}  // namespace qcbnorm
