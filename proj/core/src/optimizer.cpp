#include "qcbnorm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"
#include "qcbnorm/parallel.hpp"
#include "qcbnorm/states.hpp"

namespace qcbnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;
using ChartFunction = std::function<double(std::span<const double>)>;

struct SimplexResult {
  Point x;
  double f = kInf;
  long evals = 0;
  bool converged = false;
};

// Nelder-Mead with dimension-adaptive coefficients (Gao and Han, 2012).
SimplexResult nelder_mead(const ChartFunction& f, const Point& x0, double step, double f_tol,
                          double x_tol, long max_evals) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<Point> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  long evals = 0;
  auto eval = [&](const Point& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  Point centroid(n), trial(n), trial2(n);
  bool converged = false;

  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    {
      std::vector<Point> s2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        s2[i] = std::move(simplex[order[i]]);
        v2[i] = values[order[i]];
      }
      simplex = std::move(s2);
      values = std::move(v2);
    }
    const double best = values[0];
    const double worst = values[n];
    if (std::isfinite(worst)) {
      double diam = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, std::abs(simplex[i][j] - simplex[0][j]));
      }
      if (worst - best <= f_tol * std::max(1.0, std::abs(best)) && diam <= x_tol) {
        converged = true;
        break;
      }
    } else if (!std::isfinite(best)) {
      break;  // whole simplex on the barrier
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (auto& c : centroid) c /= dn;

    for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + reflect * (centroid[j] - simplex[n][j]);
    const double fr = eval(trial);

    if (fr < values[0]) {
      for (std::size_t j = 0; j < n; ++j) trial2[j] = centroid[j] + expand * (trial[j] - centroid[j]);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[n] = trial2;
        values[n] = fe;
      } else {
        simplex[n] = trial;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = trial;
      values[n] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < values[n]) {
      for (std::size_t j = 0; j < n; ++j) trial2[j] = centroid[j] + contract * (trial[j] - centroid[j]);
      const double fc = eval(trial2);
      if (fc <= fr) {
        simplex[n] = trial2;
        values[n] = fc;
        accepted = true;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) trial2[j] = centroid[j] + contract * (simplex[n][j] - centroid[j]);
      const double fc = eval(trial2);
      if (fc < values[n]) {
        simplex[n] = trial2;
        values[n] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          simplex[i][j] = simplex[0][j] + shrink * (simplex[i][j] - simplex[0][j]);
        }
        values[i] = eval(simplex[i]);
      }
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(best_it - values.begin());
  return {simplex[idx], values[idx], evals, converged};
}

struct RestartResult {
  double value = kInf;  // internal (minimisation) sign
  DensityMatrix argument = DensityMatrix::maximally_mixed(1);
  long evals = 0;
  bool converged = false;
};

RestartResult run_restart(const StateObjective& objective, std::size_t dim, Sense sense,
                          const OptimizerConfig& cfg, const DensityMatrix& start, double step) {
  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  const ChartFunction f = [&](std::span<const double> x) {
    double norm2 = 0.0;
    for (double c : x) norm2 += c * c;
    if (!(norm2 > 1e-300)) return kInf;
    DensityMatrix rho = chart::to_density(x, dim);
    const auto v = objective(rho);
    if (!v || !std::isfinite(*v)) return kInf;
    return sign * *v;
  };
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const double x_tol = std::max(cfg.x_tol, std::sqrt(cfg.f_tol));
  long budget = cfg.max_evals;

  Point x = chart::from_density(start);
  auto res = nelder_mead(f, x, step * scale, cfg.f_tol, x_tol, budget);
  long evals = res.evals;
  bool converged = res.converged;
  budget -= res.evals;

  double polish_step = std::min(step, cfg.warm_step) * scale;
  for (int round = 0; round < cfg.max_polish && budget > 0 && std::isfinite(res.f); ++round) {
    // Re-chart from the density to drop drift along the scale direction of L.
    const Point restart_x = chart::from_density(chart::to_density(res.x, dim));
    auto next = nelder_mead(f, restart_x, polish_step, cfg.f_tol, x_tol, budget);
    evals += next.evals;
    budget -= next.evals;
    const double gain = res.f - next.f;
    const bool improved = next.f < res.f;
    if (improved) res = next;
    converged = next.converged;
    if (!improved || gain <= cfg.f_tol * std::max(1.0, std::abs(res.f))) break;
    polish_step *= 0.3;
  }

  RestartResult out;
  out.evals = evals;
  out.converged = converged && budget > 0;
  if (std::isfinite(res.f)) {
    out.value = res.f;
    out.argument = chart::to_density(res.x, dim);
  }
  return out;
}

// BFGS2 through GSL. The objective is evaluated in the internal (minimisation) sign.
struct SmoothContext {
  const SmoothStateObjective* objective;
  std::size_t dim;
  double sign;
  long evals = 0;
};

double smooth_eval(const gsl_vector* x, SmoothContext& ctx, gsl_vector* grad) {
  ++ctx.evals;
  const std::span<const double> coords(x->data, x->size);
  double norm2 = 0.0;
  for (double c : coords) norm2 += c * c;
  std::optional<ValueGradient> vg;
  if (norm2 > 1e-300) vg = (*ctx.objective)(chart::to_density(coords, ctx.dim));
  if (!vg || !std::isfinite(vg->value)) {
    if (grad != nullptr) gsl_vector_set_zero(grad);
    return kInf;
  }
  if (grad != nullptr) {
    const auto g = chart::pull_back(coords, ctx.dim, vg->gradient);
    for (std::size_t k = 0; k < g.size(); ++k) gsl_vector_set(grad, k, ctx.sign * g[k]);
  }
  return ctx.sign * vg->value;
}

double gsl_f(const gsl_vector* x, void* p) { return smooth_eval(x, *static_cast<SmoothContext*>(p), nullptr); }
void gsl_df(const gsl_vector* x, void* p, gsl_vector* g) { smooth_eval(x, *static_cast<SmoothContext*>(p), g); }
void gsl_fdf(const gsl_vector* x, void* p, double* f, gsl_vector* g) {
  *f = smooth_eval(x, *static_cast<SmoothContext*>(p), g);
}

struct SmoothRun {
  Point x;
  double f = kInf;
  bool converged = false;
  long iterations = 0;
};

SmoothRun bfgs(SmoothContext& ctx, const Point& x0, double step, double g_tol, double f_tol, long max_iter) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  const std::size_t n = x0.size();
  gsl_multimin_function_fdf fdf{&gsl_f, &gsl_df, &gsl_fdf, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x, k, x0[k]);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  SmoothRun out;
  if (gsl_multimin_fdfminimizer_set(s, &fdf, x, step, 0.1) == GSL_SUCCESS && std::isfinite(s->f)) {
    // Stop on a small chart gradient, or when the value has not moved by more than
    // f_tol over the last kStallWindow iterations.
    constexpr long kStallWindow = 8;
    std::vector<double> history;
    while (out.iterations < max_iter) {
      if (gsl_multimin_test_gradient(s->gradient, g_tol) == GSL_SUCCESS) {
        out.converged = true;
        break;
      }
      history.push_back(s->f);
      if (history.size() > static_cast<std::size_t>(kStallWindow)) {
        const double old_f = history[history.size() - 1 - kStallWindow];
        if (old_f - s->f <= f_tol * std::max(1.0, std::abs(s->f))) break;
      }
      ++out.iterations;
      if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;  // no further progress
    }
    out.f = s->f;
    out.x.assign(s->x->data, s->x->data + n);
    if (!out.converged) out.converged = gsl_multimin_test_gradient(s->gradient, 10.0 * g_tol) == GSL_SUCCESS;
  }
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return out;
}

// Frank-Wolfe gap tr(G rho) - lambda_min(G) of the internal-sign gradient: zero exactly at
// stationary points of the density problem, and an upper bound on f - f* for convex f.
// Rank-deficient chart points have a vanishing chart gradient without being stationary.
struct Stationarity {
  double value = kInf;
  double gap = kInf;
  Vector descent;  // eigenvector of lambda_min(G)
};

Stationarity stationarity(const SmoothStateObjective& objective, double sign, const DensityMatrix& rho) {
  Stationarity out;
  const auto vg = objective(rho);
  if (!vg || !std::isfinite(vg->value)) return out;
  const Matrix g = sign * detail::hermitian_part(vg->gradient);
  const auto eig = detail::eigh_raw(g);
  out.value = sign * vg->value;
  out.gap = std::max(0.0, (g * rho.matrix()).trace().real() - eig.values(0));
  out.descent = eig.vectors.col(0);
  return out;
}

RestartResult run_smooth_restart(const SmoothStateObjective& objective, std::size_t dim, Sense sense,
                                 const OptimizerConfig& cfg, const DensityMatrix& start, double step) {
  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  SmoothContext ctx{&objective, dim, sign};
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const double gap_tol = std::sqrt(cfg.f_tol) * 0.1;
  long budget = cfg.max_evals;

  auto res = bfgs(ctx, chart::from_density(start), step * scale, cfg.g_tol, cfg.f_tol, budget);
  budget -= res.iterations;
  bool stationary = false;
  for (int round = 0; round <= cfg.max_polish && budget > 0 && std::isfinite(res.f); ++round) {
    const DensityMatrix rho = chart::to_density(res.x, dim);
    const Stationarity st = stationarity(objective, sign, rho);
    ++ctx.evals;
    if (st.gap <= gap_tol * std::max(1.0, std::abs(res.f))) {
      stationary = true;
      break;
    }
    if (round == cfg.max_polish) break;
    // Frank-Wolfe step towards the extreme point |v><v|, then a fresh BFGS run.
    const Matrix vertex = st.descent * st.descent.adjoint();
    DensityMatrix best_rho = rho;
    double best_f = res.f;
    for (double eta = 0.5; eta > 1e-7; eta *= 0.2) {
      const DensityMatrix trial = DensityMatrix::from_psd_unchecked((1.0 - eta) * rho.matrix() + eta * vertex);
      const auto v = objective(trial);
      ++ctx.evals;
      if (v && std::isfinite(v->value) && sign * v->value < best_f) {
        best_f = sign * v->value;
        best_rho = trial;
        break;
      }
    }
    auto next = bfgs(ctx, chart::from_density(best_rho), std::min(step, cfg.warm_step) * scale, cfg.g_tol,
                     cfg.f_tol, budget);
    budget -= next.iterations;
    const double before = res.f;
    if (next.f <= res.f) {
      res = next;
    } else if (best_f < res.f) {
      res.x = chart::from_density(best_rho);
      res.f = best_f;
    }
    // A Frank-Wolfe round that gains less than f_tol: the remaining gap is gradient noise.
    if (before - res.f <= cfg.f_tol * std::max(1.0, std::abs(res.f))) {
      stationary = true;
      break;
    }
  }
  RestartResult out;
  out.evals = ctx.evals;
  out.converged = stationary;
  if (std::isfinite(res.f)) {
    out.value = res.f;
    out.argument = chart::to_density(res.x, dim);
  }
  return out;
}

using RestartRunner = std::function<RestartResult(std::size_t restart, const DensityMatrix& start, double step)>;

OptimizationOutcome run_all(const RestartRunner& runner, std::size_t dim, Sense sense,
                            const OptimizerConfig& cfg, std::span<const DensityMatrix> warm_starts) {
  cfg.validate();
  if (dim < 1) throw InvalidParameter("optimize_over_states: dimension must be positive");
  for (const auto& w : warm_starts) {
    if (w.dim() != dim) throw DimensionMismatch("optimize_over_states: warm start dimension mismatch");
  }

  struct Start {
    std::optional<DensityMatrix> rho;  // empty: draw randomly inside the task
    double step;
  };
  std::vector<Start> starts;
  if (cfg.pin_maximally_mixed) starts.push_back({DensityMatrix::maximally_mixed(dim), cfg.initial_step});
  for (const auto& w : warm_starts) starts.push_back({w, cfg.warm_step});
  while (starts.size() < static_cast<std::size_t>(cfg.restarts)) starts.push_back({std::nullopt, cfg.initial_step});

  std::vector<RestartResult> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    DensityMatrix start = DensityMatrix::maximally_mixed(dim);
    if (starts[i].rho) {
      start = *starts[i].rho;
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(cfg.seed >> 32), static_cast<std::uint32_t>(i)};
      Rng rng(seq);
      start = random_density(dim, dim, rng);
    }
    results[i] = runner(i, start, starts[i].step);
  });

  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  OptimizationOutcome out;
  std::size_t best = results.size();
  out.converged = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.evals_used += results[i].evals;
    out.converged = out.converged && results[i].converged;
    if (!std::isfinite(results[i].value)) continue;
    out.per_restart_values.push_back(sign * results[i].value);
    out.per_restart_arguments.push_back(results[i].argument);
    if (best == results.size() || results[i].value < results[best].value) best = i;
  }
  if (best == results.size()) {
    throw InfeasibleObjective("optimize_over_states: every restart ended on the +infinity barrier");
  }
  out.value = sign * results[best].value;
  out.argument = results[best].argument;
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (restarts < 1 || max_evals < 1 || !(f_tol > 0.0) || !(x_tol > 0.0) || !(g_tol > 0.0) || !(initial_step > 0.0) ||
      !(warm_step > 0.0) || max_polish < 0) {
    throw InvalidParameter("OptimizerConfig: restarts, budgets, tolerances and steps must be positive");
  }
}

OptimizerConfig OptimizerConfig::inner(int inner_restarts) const {
  OptimizerConfig c = *this;
  c.f_tol = f_tol / 10.0;
  c.g_tol = g_tol / 10.0;
  c.restarts = inner_restarts;
  return c;
}

double OptimizationOutcome::restart_spread() const {
  if (per_restart_values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(per_restart_values.begin(), per_restart_values.end());
  return *hi - *lo;
}

OptimizationOutcome optimize_over_states(const StateObjective& objective, std::size_t dim,
                                         Sense sense, const OptimizerConfig& cfg,
                                         std::span<const DensityMatrix> warm_starts) {
  const RestartRunner runner = [&](std::size_t, const DensityMatrix& start, double step) {
    return run_restart(objective, dim, sense, cfg, start, step);
  };
  return run_all(runner, dim, sense, cfg, warm_starts);
}

OptimizationOutcome optimize_over_states(const StateObjectiveFactory& factory, std::size_t dim,
                                         Sense sense, const OptimizerConfig& cfg,
                                         std::span<const DensityMatrix> warm_starts) {
  const RestartRunner runner = [&](std::size_t i, const DensityMatrix& start, double step) {
    return run_restart(factory(i), dim, sense, cfg, start, step);
  };
  return run_all(runner, dim, sense, cfg, warm_starts);
}

OptimizationOutcome optimize_over_states_smooth(const SmoothStateObjectiveFactory& factory, std::size_t dim,
                                                Sense sense, const OptimizerConfig& cfg,
                                                std::span<const DensityMatrix> warm_starts) {
  const RestartRunner runner = [&](std::size_t i, const DensityMatrix& start, double step) {
    return run_smooth_restart(factory(i), dim, sense, cfg, start, step);
  };
  return run_all(runner, dim, sense, cfg, warm_starts);
}

namespace chart {

std::size_t coordinate_count(std::size_t dim) { return dim * dim; }

DensityMatrix to_density(std::span<const double> coords, std::size_t dim) {
  if (coords.size() != coordinate_count(dim)) throw DimensionMismatch("chart: coordinate count");
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix l = Matrix::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) l(i, i) = coords[k++];
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      l(i, j) = Complex(coords[k], coords[k + 1]);
      k += 2;
    }
  }
  return DensityMatrix::from_factor(l);
}

std::vector<double> from_density(const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  constexpr double kRegulariser = 1e-12;
  const Matrix reg = (rho.matrix() + kRegulariser * Matrix::Identity(n, n)) / (1.0 + kRegulariser * n);
  Eigen::LLT<Matrix> llt(reg);
  if (llt.info() != Eigen::Success) throw Error("chart: Cholesky factorisation failed");
  const Matrix l = llt.matrixL();
  std::vector<double> coords;
  coords.reserve(coordinate_count(rho.dim()));
  for (Eigen::Index i = 0; i < n; ++i) coords.push_back(l(i, i).real());
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      coords.push_back(l(i, j).real());
      coords.push_back(l(i, j).imag());
    }
  }
  return coords;
}

std::vector<double> pull_back(std::span<const double> coords, std::size_t dim, const Matrix& gradient) {
  if (coords.size() != coordinate_count(dim)) throw DimensionMismatch("chart: coordinate count");
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix l = Matrix::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) l(i, i) = coords[k++];
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      l(i, j) = Complex(coords[k], coords[k + 1]);
      k += 2;
    }
  }
  // rho = L L^dagger / t: df = (2/t) Re tr((G - tr(G rho)) L dL^dagger).
  const Matrix ll = l * l.adjoint();
  const double t = ll.trace().real();
  const double mean = (gradient * ll).trace().real() / t;
  const Matrix kl = (gradient - mean * Matrix::Identity(n, n)) * l * (2.0 / t);
  std::vector<double> out;
  out.reserve(coords.size());
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(kl(i, i).real());
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      out.push_back(kl(i, j).real());
      out.push_back(kl(i, j).imag());
    }
  }
  return out;
}

}  // namespace chart

}  // namespace qcbnorm
