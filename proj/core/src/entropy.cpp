#include "qcbnorm/entropy.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "objectives.hpp"
#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"

namespace qcbnorm {

namespace {

constexpr double kSupportContainment = 1e-10;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimensions " << a << " and " << b << " differ";
    throw DimensionMismatch(msg.str());
  }
}

// tr(rho (1 - P_sigma)): weight of rho outside supp(sigma).
double weight_outside(const DensityMatrix& rho, const HermitianOperator& support) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  return (rho.matrix() * (Matrix::Identity(n, n) - support.matrix())).trace().real();
}

double entropy_of(const Matrix& rho) {
  RealVector values = detail::eigvals_raw(rho);
  for (auto& v : values) v = std::max(v, 0.0);
  return spectrum_entropy(values);
}

std::vector<std::size_t> concat(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double marginal_entropy(const DensityMatrix& rho, const SystemLayout& layout,
                        std::span<const std::size_t> keep) {
  return entropy_of(partial_trace(rho.matrix(), layout, keep));
}

}  // namespace

RenyiOrder::RenyiOrder(double alpha) : alpha_(alpha), regime_(Regime::kQuasi) {
  if (!std::isfinite(alpha) || alpha < 0.5 || alpha == 1.0) {
    std::ostringstream msg;
    msg << "RenyiOrder: alpha=" << alpha << " outside [1/2,1) U (1,inf)";
    throw RegimeError(msg.str());
  }
  regime_ = alpha < 1.0 ? Regime::kQuasi : Regime::kStandard;
}

const RenyiOrder& RenyiOrder::require_quasi(const char* what) const {
  if (!is_quasi()) {
    std::ostringstream msg;
    msg << what << ": alpha=" << alpha_ << " outside [1/2,1)";
    throw RegimeError(msg.str());
  }
  return *this;
}

double DivergenceValue::value() const {
  if (!finite_) throw Error("DivergenceValue: value() on +infinity");
  return value_;
}

std::ostream& operator<<(std::ostream& os, const DivergenceValue& d) {
  if (d.is_finite()) return os << d.value();
  return os << "+inf";
}

double spectrum_entropy(const RealVector& spectrum) {
  double h = 0.0;
  for (double v : spectrum) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of(rho.matrix()); }

DivergenceValue relative_entropy(const DensityMatrix& rho, const HermitianOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative_entropy");
  const auto log_sigma = matrix_log2(sigma);
  if (weight_outside(rho, log_sigma.support) > kSupportContainment) return DivergenceValue::infinite();
  const double cross = (rho.matrix() * log_sigma.log.matrix()).trace().real();
  return DivergenceValue::finite(-von_neumann_entropy(rho) - cross);
}

DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const HermitianOperator& sigma,
                                 const RenyiOrder& alpha) {
  require_same_dim(rho.dim(), sigma.dim(), "sandwiched_renyi");
  const double a = alpha.value();
  const auto sigma_support = support_projector(sigma);
  HermitianOperator s = HermitianOperator::zero(sigma.dim());
  if (alpha.is_quasi()) {
    const auto rho_support = support_projector(rho.op());
    const double overlap = (rho_support.matrix() * sigma_support.matrix()).trace().real();
    if (overlap <= tol::kOrthogonal) return DivergenceValue::infinite();
    s = matrix_power(sigma, alpha.sandwich_exponent());
  } else {
    if (weight_outside(rho, sigma_support) > kSupportContainment) return DivergenceValue::infinite();
    s = support_power(sigma, alpha.sandwich_exponent());
  }
  const Matrix inner = s.matrix() * rho.matrix() * s.matrix();
  RealVector values = detail::eigvals_raw(detail::hermitian_part(inner));
  for (auto& v : values) v = std::max(v, 0.0);
  const double q = power_trace(values, a);
  if (!(q > 0.0)) return DivergenceValue::infinite();
  return DivergenceValue::finite(std::log2(q) / (a - 1.0));
}

double relative_entropy_variance(const DensityMatrix& rho, const HermitianOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative_entropy_variance");
  const auto log_sigma = matrix_log2(sigma);
  if (weight_outside(rho, log_sigma.support) > kSupportContainment) {
    throw UndefinedVarianceError("relative_entropy_variance: supp(rho) is not contained in supp(sigma)");
  }
  const auto log_rho = matrix_log2(rho.op());
  const Matrix delta = log_rho.log.matrix() - log_sigma.log.matrix();
  const Matrix rho_delta = rho.matrix() * delta;
  const double mean = rho_delta.trace().real();
  const double second = (rho_delta * delta).trace().real();
  const double v = second - mean * mean;
  if (v < 0.0 && v > -tol::kVarianceClip) return 0.0;
  return std::max(v, 0.0);
}

double mutual_information(const DensityMatrix& rho_ab, const SystemLayout& layout) {
  if (layout.size() != 2) throw DimensionMismatch("mutual_information: layout must have two factors");
  const std::size_t a[] = {0};
  const std::size_t b[] = {1};
  return mutual_information(rho_ab, layout, a, b);
}

double mutual_information(const DensityMatrix& rho, const SystemLayout& layout,
                          std::span<const std::size_t> a, std::span<const std::size_t> b) {
  layout.check(rho.dim());
  const auto ab = concat(a, b);
  return marginal_entropy(rho, layout, a) + marginal_entropy(rho, layout, b) -
         marginal_entropy(rho, layout, ab);
}

double conditional_mutual_information(const DensityMatrix& rho_xyz, const SystemLayout& layout,
                                      CmiForm form) {
  if (layout.size() != 3) {
    throw DimensionMismatch("conditional_mutual_information: layout must have three factors");
  }
  const std::size_t x[] = {0};
  const std::size_t y[] = {1};
  const std::size_t z[] = {2};
  return conditional_mutual_information(rho_xyz, layout, x, y, z, form);
}

double conditional_mutual_information(const DensityMatrix& rho, const SystemLayout& layout,
                                      std::span<const std::size_t> x, std::span<const std::size_t> y,
                                      std::span<const std::size_t> z, CmiForm form) {
  layout.check(rho.dim());
  const auto xy = concat(x, y);
  const auto zy = concat(z, y);
  const auto xyz = concat(xy, z);
  const double subtract = form == CmiForm::kStandard ? marginal_entropy(rho, layout, y)
                                                     : marginal_entropy(rho, layout, z);
  return marginal_entropy(rho, layout, xy) + marginal_entropy(rho, layout, zy) -
         marginal_entropy(rho, layout, xyz) - subtract;
}

RenyiMutualInformation renyi_mutual_information(const DensityMatrix& rho_ab, const SystemLayout& layout,
                                                const RenyiOrder& alpha, const OptimizerConfig& cfg,
                                                std::span<const DensityMatrix> warm_starts) {
  alpha.require_quasi("renyi_mutual_information");
  if (layout.size() != 2) throw DimensionMismatch("renyi_mutual_information: layout must have two factors");
  layout.check(rho_ab.dim());
  const std::size_t keep_a[] = {0};
  const Matrix rho_a = partial_trace(rho_ab.matrix(), layout, keep_a);
  const double a = alpha.value();
  const double two_gamma = 2.0 * alpha.sandwich_exponent();
  const internal::FactoredBipartite factored(rho_ab.matrix(), layout[0], layout[1]);
  const Matrix p = internal::psd_power(rho_a, two_gamma);

  const StateObjective objective = [&](const DensityMatrix& sigma) -> std::optional<double> {
    const Matrix s = internal::psd_power(sigma.matrix(), two_gamma);
    const double q = internal::noise_power_trace(factored.sandwiched_spectrum(p, &s), a);
    if (!(q > 0.0)) return std::nullopt;
    return std::log2(q) / (a - 1.0);
  };
  auto outcome = optimize_over_states(objective, layout[1], Sense::kMinimize, cfg, warm_starts);
  RenyiMutualInformation out;
  out.value = outcome.value;
  out.sigma_b = outcome.argument;
  out.outcome = std::move(outcome);
  return out;
}

namespace internal {

FactoredBipartite::FactoredBipartite(const Matrix& psd, std::size_t dim_a, std::size_t dim_b)
    : dim_a_(dim_a), dim_b_(dim_b), factor_(detail::psd_factor(detail::hermitian_part(psd))) {
  if (static_cast<std::size_t>(psd.rows()) != dim_a * dim_b) {
    throw DimensionMismatch("FactoredBipartite: operator dimension is not dim_a * dim_b");
  }
}

RealVector FactoredBipartite::sandwiched_spectrum(const Matrix& p, const Matrix* s) const {
  const auto da = static_cast<Eigen::Index>(dim_a_);
  const auto db = static_cast<Eigen::Index>(dim_b_);
  const Eigen::Index r = factor_.cols();
  Matrix transformed(factor_.rows(), r);
  const Matrix pt = p.transpose();
  for (Eigen::Index k = 0; k < r; ++k) {
    // Column k reshaped so that entry (b, a) is z(a * db + b); (P (x) S) z maps to S M P^T.
    Eigen::Map<const Matrix> m(factor_.col(k).data(), db, da);
    Eigen::Map<Matrix> out(transformed.col(k).data(), db, da);
    if (s != nullptr) {
      out.noalias() = (*s) * m * pt;
    } else {
      out.noalias() = m * pt;
    }
  }
  const Matrix gram = factor_.adjoint() * transformed;
  return detail::eigvals_raw(detail::hermitian_part(gram));
}

Matrix psd_power(const Matrix& x, double p) {
  auto eig = detail::eigh_raw(x);
  const double cut = support_threshold(eig.values.maxCoeff());
  return detail::apply_spectral(eig, [&](double v) { return v > cut ? std::pow(v, p) : 0.0; });
}

}  // namespace internal

}  // namespace qcbnorm
