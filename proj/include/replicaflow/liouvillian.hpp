#ifndef REPLICAFLOW_LIOUVILLIAN_HPP
#define REPLICAFLOW_LIOUVILLIAN_HPP

// M-replica Liouvillian of a driven qubit coupled to an environment (e),
// traced out inside every replica, and a probe reservoir (b), whose contour
// is shared by all replicas:
//
//   L_M = L_U + L_e + sum_i ( S_i + sum_{N=1}^{M-i} C_{i,i+N} )
//
// Every rate times Boltzmann factor product is routed through correlator_S
// so that cold probes (large theta_b) never overflow.

#include <stdexcept>
#include <string>

#include "replicaflow/model_config.hpp"
#include "replicaflow/operator_algebra.hpp"
#include "replicaflow/thermal_rates.hpp"

namespace rflow {

struct AssembleOptions {
  int max_replicas = 7;  // dense 16384 x 16384 at the ceiling
};

template <typename Real>
struct LiouvillianParts {
  SuperOperator<Real> unitary;
  SuperOperator<Real> environment;
  SuperOperator<Real> probe_same;
  SuperOperator<Real> probe_cross;
  SuperOperator<Real> total;
  int replicas = 0;
  BasicModelParams<Real> params;
};

namespace detail {

inline void check_replicas(int replicas) {
  if (replicas < 1) throw std::invalid_argument("replica count must be >= 1");
}

}  // namespace detail

/// -i [H, .] with H = sum_k (-delta/2 Z_k + Omega/2 X_k).
template <typename Real>
SuperOperator<Real> unitary_part(int replicas, const BasicModelParams<Real>& p) {
  detail::check_replicas(replicas);
  const Eigen::Index d = replica_dim(replicas);
  ReplicaOperator<Real> h = ReplicaOperator<Real>::Zero(d, d);
  for (int k = 1; k <= replicas; ++k) {
    h += (-p.delta / 2) * embed_on_replica<Real>(qubit::pauli_z<Real>(), k, replicas) +
         (p.omega / 2) * embed_on_replica<Real>(qubit::pauli_x<Real>(), k, replicas);
  }
  return Complex<Real>(0, -1) * commutator_super(h);
}

/// Standard two-rate dissipator plus Lamb shift acting inside each replica.
template <typename Real>
SuperOperator<Real> environment_part(int replicas, const BasicModelParams<Real>& p) {
  detail::check_replicas(replicas);
  const auto rates = rates_env(p.theta_e, p.gamma_e);
  const Eigen::Index d = replica_dim(replicas);

  SuperOperator<Real> out = SuperOperator<Real>::Zero(d * d, d * d);
  ReplicaOperator<Real> hermitian = ReplicaOperator<Real>::Zero(d, d);
  ReplicaOperator<Real> decay = ReplicaOperator<Real>::Zero(d, d);
  for (int k = 1; k <= replicas; ++k) {
    const ReplicaOperator<Real> s = lowering_on_replica<Real>(k, replicas);
    const ReplicaOperator<Real> sd = s.adjoint();
    out += rates.up() * sandwich_super<Real>(sd, s) + rates.down() * sandwich_super<Real>(s, sd);
    hermitian += p.lamb_e * (sd * s);
    decay += rates.up() * (s * sd) + rates.down() * (sd * s);
  }
  out += Complex<Real>(0, -1) * commutator_super(hermitian);
  out -= Real(0.5) * anticommutator_super(decay);
  return out;
}

/// Same-world probe dissipators S_i. The jump terms carry the extra
/// e^{-+theta_b} weights, so for M >= 2 the part is not trace preserving.
template <typename Real>
SuperOperator<Real> probe_same_world(int replicas, const BasicModelParams<Real>& p) {
  detail::check_replicas(replicas);
  const int m = replicas;
  const Real th = p.theta_b;
  const Real g = p.gamma_b;
  // down * e^{-theta}, down, up * e^{theta}, up
  const Real excite_jump = correlator_S(m - 1, m, th, g);
  const Real down = correlator_S(m, m, th, g);
  const Real relax_jump = correlator_S(1, m, th, g);
  const Real up = correlator_S(0, m, th, g);

  const Eigen::Index d = replica_dim(replicas);
  SuperOperator<Real> out = SuperOperator<Real>::Zero(d * d, d * d);
  ReplicaOperator<Real> hermitian = ReplicaOperator<Real>::Zero(d, d);
  ReplicaOperator<Real> decay = ReplicaOperator<Real>::Zero(d, d);
  for (int r = 1; r <= replicas; ++r) {
    const ReplicaOperator<Real> s = lowering_on_replica<Real>(r, replicas);
    const ReplicaOperator<Real> sd = s.adjoint();
    out += excite_jump * sandwich_super<Real>(sd, s) + relax_jump * sandwich_super<Real>(s, sd);
    hermitian += p.lamb_b * (sd * s);
    decay += down * (sd * s) + up * (s * sd);
  }
  out += Complex<Real>(0, -1) * commutator_super(hermitian);
  out -= Real(0.5) * anticommutator_super(decay);
  return out;
}

/// Cross-world pair terms C_{i,i+N}; zero for a single replica.
template <typename Real>
SuperOperator<Real> probe_cross_world(int replicas, const BasicModelParams<Real>& p) {
  detail::check_replicas(replicas);
  const int m = replicas;
  const Real th = p.theta_b;
  const Real g = p.gamma_b;
  const Eigen::Index d = replica_dim(replicas);

  SuperOperator<Real> out = SuperOperator<Real>::Zero(d * d, d * d);
  ReplicaOperator<Real> pair_sum = ReplicaOperator<Real>::Zero(d, d);
  for (int i = 1; i <= m; ++i) {
    const ReplicaOperator<Real> si = lowering_on_replica<Real>(i, m);
    const ReplicaOperator<Real> si_dag = si.adjoint();
    for (int n = 1; n <= m - i; ++n) {
      const ReplicaOperator<Real> sj = lowering_on_replica<Real>(i + n, m);
      const ReplicaOperator<Real> sj_dag = sj.adjoint();

      // Gamma_down group: weights e^{-(N-1)th}, e^{-(N+1)th}, e^{-N th}.
      out += correlator_S(m - n + 1, m, th, g) * sandwich_super<Real>(sj, si_dag);
      out += correlator_S(m - n - 1, m, th, g) * sandwich_super<Real>(si_dag, sj);
      pair_sum += correlator_S(m - n, m, th, g) * (si_dag * sj);

      // Gamma_up group: weights e^{(N-1)th}, e^{(N+1)th}, e^{N th}.
      out += correlator_S(n - 1, m, th, g) * sandwich_super<Real>(sj_dag, si);
      out += correlator_S(n + 1, m, th, g) * sandwich_super<Real>(si, sj_dag);
      pair_sum += correlator_S(n, m, th, g) * (si * sj_dag);
    }
  }
  out -= anticommutator_super(pair_sum);
  return out;
}

/// Builds all four parts and their sum. Throws std::length_error above the
/// configured replica ceiling.
template <typename Real>
LiouvillianParts<Real> assemble(int replicas, const BasicModelParams<Real>& p,
                                const AssembleOptions& options = {}) {
  detail::check_replicas(replicas);
  if (replicas > options.max_replicas) {
    throw std::length_error("assemble: M=" + std::to_string(replicas) + " exceeds the ceiling M<=" +
                            std::to_string(options.max_replicas));
  }
  validate_params(p);

  LiouvillianParts<Real> parts;
  parts.replicas = replicas;
  parts.params = p;
  parts.unitary = unitary_part(replicas, p);
  parts.environment = environment_part(replicas, p);
  parts.probe_same = probe_same_world(replicas, p);
  parts.probe_cross = probe_cross_world(replicas, p);
  parts.total = parts.unitary + parts.environment + parts.probe_same + parts.probe_cross;
  return parts;
}

}  // namespace rflow

#endif  // REPLICAFLOW_LIOUVILLIAN_HPP
