#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qcbnorm/renyi_order.hpp"
#include "qcbnorm/states.hpp"
#include "qcbnorm/types.hpp"

namespace qcbnorm {

/// Completely positive map in Kraus form, rho -> sum_i K_i rho K_i^dagger.
class CPMap {
 public:
  /// `trace_preserving` is a claim that is checked: sum K^dagger K must equal
  /// the identity within 1e-10.
  CPMap(std::size_t in_dim, std::size_t out_dim, std::vector<Matrix> kraus, bool trace_preserving);

  /// Infers the trace-preserving flag from the Kraus operators.
  static CPMap from_kraus(std::vector<Matrix> kraus);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  std::size_t kraus_count() const { return kraus_.size(); }
  bool trace_preserving() const { return trace_preserving_; }

  /// sum_i K_i^dagger K_i
  Matrix kraus_gram() const;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<Matrix> kraus_;
  bool trace_preserving_;
};

/// U : A -> B (x) E with M(rho) = tr_E U rho U^dagger; rows are indexed (b, e) with b slowest.
struct StinespringDilation {
  Matrix map_matrix;
  std::size_t out_dim;
  std::size_t env_dim;
};

/// id (x) M applied to the unnormalised maximally entangled operator, on A (x) B.
struct ChoiOperator {
  HermitianOperator op;
  SystemLayout layout;
};

/// sum_i K_i x K_i^dagger. Eigen matrices pull namespace std into argument-dependent
/// lookup, so call this as qcbnorm::apply where <tuple> is visible.
Matrix apply(const CPMap& map, const Matrix& x);
HermitianOperator apply(const CPMap& map, const HermitianOperator& x);
/// Channel output as a state; requires a trace-preserving map.
DensityMatrix apply_channel(const CPMap& map, const DensityMatrix& rho);

ChoiOperator choi(const CPMap& map);
StinespringDilation stinespring(const CPMap& map);
CPMap from_stinespring(const StinespringDilation& dilation);
/// tr_E U x U^dagger
Matrix apply_dilation(const StinespringDilation& dilation, const Matrix& x);

/// rho -> tr_B U rho U^dagger with environment index = Kraus index.
CPMap complementary(const CPMap& map);

/// Kraus set {K_i (x) L_j}.
CPMap tensor_map(const CPMap& first, const CPMap& second);
/// outer o inner, Kraus set {L_j K_i}.
CPMap compose(const CPMap& outer, const CPMap& inner);
/// c * M for c > 0.
CPMap scale(const CPMap& map, double c);
/// Same map rebuilt from the Kraus set {sum_j u_ij K_j} for an isometry u
/// (rows >= Kraus count).
CPMap rotate_kraus(const CPMap& map, const Matrix& mixing);

/// X -> sigma^((1-alpha)/(2alpha)) X sigma^((1-alpha)/(2alpha)), alpha in [1/2, 1).
CPMap sandwich_map(const DensityMatrix& sigma, const RenyiOrder& alpha);

CPMap identity_channel(std::size_t d);
/// X -> tr(X) on d, output dimension 1.
CPMap trace_map(std::size_t d);

using ZooParams = std::map<std::string, double>;

/// Named test channels: identity {d}, trace {d}, depolarizing {p}, amplitude_damping {gamma},
/// dephasing {p}. Qubit families default to d = 2; identity/trace default to d = 2.
CPMap channel_zoo(const std::string& name, const ZooParams& params = {});
std::vector<std::string> zoo_names();

/// Trace-preserving channel from a random isometry A -> B (x) E.
CPMap random_channel(std::size_t d_in, std::size_t d_out, std::size_t d_env, Rng& rng);

}  // namespace qcbnorm
