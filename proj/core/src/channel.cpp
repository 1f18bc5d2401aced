#include "qcbnorm/channel.hpp"

#include <cmath>
#include <sstream>

#include "qcbnorm/errors.hpp"
#include "qcbnorm/linalg.hpp"

namespace qcbnorm {

namespace {

constexpr double kTraceTol = 1e-10;

bool is_identity(const Matrix& m, double tol) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix pauli(char which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 'x':
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case 'y':
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case 'z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      m.setIdentity();
  }
  return m;
}

double param(const ZooParams& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::string& name, const ZooParams& params,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidParameter("channel_zoo: '" + name + "' has no parameter '" + key + "'");
  }
}

double probability(const std::string& name, const ZooParams& params, const char* key) {
  const double p = param(params, key, 0.0);
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "channel_zoo: " << name << " parameter " << key << "=" << p << " outside [0,1]";
    throw InvalidParameter(msg.str());
  }
  return p;
}

std::size_t dimension(const std::string& name, const ZooParams& params) {
  const double d = param(params, "d", 2.0);
  if (!(d >= 1.0) || d != std::floor(d) || d > 64.0) {
    throw InvalidParameter("channel_zoo: " + name + " needs an integer dimension d in [1, 64]");
  }
  return static_cast<std::size_t>(d);
}

}  // namespace

CPMap::CPMap(std::size_t in_dim, std::size_t out_dim, std::vector<Matrix> kraus,
             bool trace_preserving)
    : in_dim_(in_dim), out_dim_(out_dim), kraus_(std::move(kraus)), trace_preserving_(trace_preserving) {
  if (in_dim_ < 1 || out_dim_ < 1) throw InvalidParameter("CPMap: dimensions must be positive");
  if (kraus_.empty()) throw InvalidParameter("CPMap: Kraus list is empty");
  for (const auto& k : kraus_) {
    if (k.rows() != static_cast<Eigen::Index>(out_dim_) || k.cols() != static_cast<Eigen::Index>(in_dim_)) {
      std::ostringstream msg;
      msg << "CPMap: Kraus operator is " << k.rows() << "x" << k.cols() << ", expected " << out_dim_
          << "x" << in_dim_;
      throw DimensionMismatch(msg.str());
    }
  }
  if (trace_preserving_ && !is_identity(kraus_gram(), kTraceTol)) {
    throw InvariantViolation("CPMap: flagged trace preserving but sum K^dagger K != identity");
  }
}

CPMap CPMap::from_kraus(std::vector<Matrix> kraus) {
  if (kraus.empty()) throw InvalidParameter("CPMap: Kraus list is empty");
  const auto in = static_cast<std::size_t>(kraus.front().cols());
  const auto out = static_cast<std::size_t>(kraus.front().rows());
  CPMap map(in, out, std::move(kraus), false);
  map.trace_preserving_ = is_identity(map.kraus_gram(), kTraceTol);
  return map;
}

Matrix CPMap::kraus_gram() const {
  const auto n = static_cast<Eigen::Index>(in_dim_);
  Matrix g = Matrix::Zero(n, n);
  for (const auto& k : kraus_) g.noalias() += k.adjoint() * k;
  return g;
}

Matrix apply(const CPMap& map, const Matrix& x) {
  if (x.rows() != static_cast<Eigen::Index>(map.in_dim()) || x.cols() != x.rows()) {
    throw DimensionMismatch("apply: input dimension does not match the map");
  }
  const auto n = static_cast<Eigen::Index>(map.out_dim());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& k : map.kraus()) out.noalias() += k * x * k.adjoint();
  return out;
}

HermitianOperator apply(const CPMap& map, const HermitianOperator& x) {
  return HermitianOperator::hermitize(apply(map, x.matrix()));
}

DensityMatrix apply_channel(const CPMap& map, const DensityMatrix& rho) {
  if (!map.trace_preserving()) throw ContractError("apply_channel: map is not trace preserving");
  return DensityMatrix::from_psd_unchecked(apply(map, rho.matrix()));
}

ChoiOperator choi(const CPMap& map) {
  const auto din = static_cast<Eigen::Index>(map.in_dim());
  const auto dout = static_cast<Eigen::Index>(map.out_dim());
  Matrix c = Matrix::Zero(din * dout, din * dout);
  Vector v(din * dout);
  for (const auto& k : map.kraus()) {
    for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    c.noalias() += v * v.adjoint();
  }
  return {HermitianOperator::hermitize(c), SystemLayout{map.in_dim(), map.out_dim()}};
}

StinespringDilation stinespring(const CPMap& map) {
  const auto env = static_cast<Eigen::Index>(map.kraus_count());
  const auto dout = static_cast<Eigen::Index>(map.out_dim());
  Matrix u(dout * env, static_cast<Eigen::Index>(map.in_dim()));
  for (Eigen::Index e = 0; e < env; ++e) {
    const auto& k = map.kraus()[static_cast<std::size_t>(e)];
    for (Eigen::Index b = 0; b < dout; ++b) u.row(b * env + e) = k.row(b);
  }
  return {std::move(u), map.out_dim(), map.kraus_count()};
}

CPMap from_stinespring(const StinespringDilation& dilation) {
  const auto env = static_cast<Eigen::Index>(dilation.env_dim);
  const auto dout = static_cast<Eigen::Index>(dilation.out_dim);
  if (dilation.map_matrix.rows() != dout * env) {
    throw DimensionMismatch("from_stinespring: row count is not out_dim * env_dim");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(dilation.env_dim);
  for (Eigen::Index e = 0; e < env; ++e) {
    Matrix k(dout, dilation.map_matrix.cols());
    for (Eigen::Index b = 0; b < dout; ++b) k.row(b) = dilation.map_matrix.row(b * env + e);
    kraus.push_back(std::move(k));
  }
  return CPMap::from_kraus(std::move(kraus));
}

Matrix apply_dilation(const StinespringDilation& dilation, const Matrix& x) {
  const Matrix full = dilation.map_matrix * x * dilation.map_matrix.adjoint();
  const std::size_t keep[] = {0};
  return partial_trace(full, SystemLayout{dilation.out_dim, dilation.env_dim}, keep);
}

CPMap complementary(const CPMap& map) {
  const auto env = static_cast<Eigen::Index>(map.kraus_count());
  const auto din = static_cast<Eigen::Index>(map.in_dim());
  std::vector<Matrix> kraus;
  kraus.reserve(map.out_dim());
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(map.out_dim()); ++b) {
    Matrix f(env, din);
    for (Eigen::Index e = 0; e < env; ++e) f.row(e) = map.kraus()[static_cast<std::size_t>(e)].row(b);
    kraus.push_back(std::move(f));
  }
  return CPMap(map.in_dim(), map.kraus_count(), std::move(kraus), map.trace_preserving());
}

CPMap tensor_map(const CPMap& first, const CPMap& second) {
  std::vector<Matrix> kraus;
  kraus.reserve(first.kraus_count() * second.kraus_count());
  for (const auto& k : first.kraus()) {
    for (const auto& l : second.kraus()) kraus.push_back(tensor(k, l));
  }
  return CPMap(first.in_dim() * second.in_dim(), first.out_dim() * second.out_dim(), std::move(kraus),
               first.trace_preserving() && second.trace_preserving());
}

CPMap compose(const CPMap& outer, const CPMap& inner) {
  if (inner.out_dim() != outer.in_dim()) {
    std::ostringstream msg;
    msg << "compose: inner output dimension " << inner.out_dim() << " != outer input dimension "
        << outer.in_dim();
    throw DimensionMismatch(msg.str());
  }
  std::vector<Matrix> kraus;
  kraus.reserve(outer.kraus_count() * inner.kraus_count());
  for (const auto& k : inner.kraus()) {
    for (const auto& l : outer.kraus()) kraus.push_back(l * k);
  }
  if (outer.trace_preserving() && inner.trace_preserving()) {
    return CPMap(inner.in_dim(), outer.out_dim(), std::move(kraus), true);
  }
  return CPMap::from_kraus(std::move(kraus));
}

CPMap scale(const CPMap& map, double c) {
  if (!(c > 0.0)) throw InvalidParameter("scale: factor must be positive");
  std::vector<Matrix> kraus;
  for (const auto& k : map.kraus()) kraus.push_back(k * std::sqrt(c));
  return CPMap::from_kraus(std::move(kraus));
}

CPMap rotate_kraus(const CPMap& map, const Matrix& mixing) {
  if (mixing.cols() != static_cast<Eigen::Index>(map.kraus_count()) || mixing.rows() < mixing.cols()) {
    throw DimensionMismatch("rotate_kraus: mixing must be an isometry from the Kraus index space");
  }
  std::vector<Matrix> kraus;
  for (Eigen::Index i = 0; i < mixing.rows(); ++i) {
    Matrix k = Matrix::Zero(static_cast<Eigen::Index>(map.out_dim()), static_cast<Eigen::Index>(map.in_dim()));
    for (Eigen::Index j = 0; j < mixing.cols(); ++j) k += mixing(i, j) * map.kraus()[static_cast<std::size_t>(j)];
    kraus.push_back(std::move(k));
  }
  return CPMap::from_kraus(std::move(kraus));
}

CPMap sandwich_map(const DensityMatrix& sigma, const RenyiOrder& alpha) {
  alpha.require_quasi("sandwich_map");
  const auto k = matrix_power(sigma.op(), alpha.sandwich_exponent());
  return CPMap(sigma.dim(), sigma.dim(), {k.matrix()}, false);
}

CPMap identity_channel(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return CPMap(d, d, {Matrix::Identity(n, n)}, true);
}

CPMap trace_map(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> kraus;
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix bra = Matrix::Zero(1, n);
    bra(0, i) = 1.0;
    kraus.push_back(std::move(bra));
  }
  return CPMap(d, 1, std::move(kraus), true);
}

std::vector<std::string> zoo_names() {
  return {"identity", "trace", "depolarizing", "amplitude_damping", "dephasing"};
}

CPMap channel_zoo(const std::string& name, const ZooParams& params) {
  if (name == "identity") {
    check_keys(name, params, {"d"});
    return identity_channel(dimension(name, params));
  }
  if (name == "trace") {
    check_keys(name, params, {"d"});
    return trace_map(dimension(name, params));
  }
  if (name == "depolarizing") {
    check_keys(name, params, {"p"});
    const double p = probability(name, params, "p");
    std::vector<Matrix> kraus{std::sqrt(1.0 - 0.75 * p) * pauli('i')};
    if (p > 0.0) {
      for (char c : {'x', 'y', 'z'}) kraus.push_back(std::sqrt(0.25 * p) * pauli(c));
    }
    return CPMap(2, 2, std::move(kraus), true);
  }
  if (name == "amplitude_damping") {
    check_keys(name, params, {"gamma"});
    const double g = probability(name, params, "gamma");
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(g);
    return CPMap(2, 2, {k0, k1}, true);
  }
  if (name == "dephasing") {
    check_keys(name, params, {"p"});
    const double p = probability(name, params, "p");
    return CPMap(2, 2, {std::sqrt(1.0 - p) * pauli('i'), std::sqrt(p) * pauli('z')}, true);
  }
  throw InvalidParameter("channel_zoo: unknown channel '" + name + "'");
}

CPMap random_channel(std::size_t d_in, std::size_t d_out, std::size_t d_env, Rng& rng) {
  if (d_in < 1 || d_out < 1 || d_env < 1 || d_out * d_env < d_in) {
    throw DimensionMismatch("random_channel: need d_out * d_env >= d_in");
  }
  const Matrix v = random_isometry(d_in, d_out * d_env, rng);
  StinespringDilation dilation{v, d_out, d_env};
  auto map = from_stinespring(dilation);
  if (!map.trace_preserving()) throw Error("random_channel: isometry lost orthonormality");
  return map;
}

}  // namespace qcbnorm
