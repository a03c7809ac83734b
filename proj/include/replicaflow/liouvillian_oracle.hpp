#ifndef REPLICAFLOW_LIOUVILLIAN_ORACLE_HPP
#define REPLICAFLOW_LIOUVILLIAN_ORACLE_HPP

// Brute-force reference assembly of the M-replica Liouvillian. Each column is
// dR/dt for a basis matrix unit R = E_ab, computed with explicit dense
// products straight from the master equation terms. No superoperator
// constructors and no overflow-safe rate helpers are used, so this is only
// meant for small M and moderate theta_b.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "replicaflow/model_config.hpp"
#include "replicaflow/operator_algebra.hpp"

namespace rflow {

template <typename Real>
SuperOperator<Real> oracle_assemble(int replicas, const BasicModelParams<Real>& p) {
  using std::exp;
  using Op = ReplicaOperator<Real>;
  if (replicas < 1 || replicas > 3) {
    throw std::invalid_argument("oracle_assemble: M must be in 1..3, got " + std::to_string(replicas));
  }
  const int m = replicas;
  const Eigen::Index d = replica_dim(m);
  const Complex<Real> minus_i(0, -1);

  auto n_bose = [](Real x) { return Real(1) / (exp(x) - Real(1)); };

  const Real env_up = p.gamma_e * n_bose(p.theta_e);
  const Real env_down = env_up * exp(p.theta_e);
  const Real probe_up = p.gamma_b * n_bose(m * p.theta_b);
  const Real probe_down = probe_up * exp(m * p.theta_b);
  const Real tb = p.theta_b;

  std::vector<Op> s(m + 1), sd(m + 1);
  Op h = Op::Zero(d, d);
  for (int k = 1; k <= m; ++k) {
    s[k] = lowering_on_replica<Real>(k, m);
    sd[k] = s[k].adjoint();
    h += (-p.delta / 2) * embed_on_replica<Real>(qubit::pauli_z<Real>(), k, m) +
         (p.omega / 2) * embed_on_replica<Real>(qubit::pauli_x<Real>(), k, m);
  }

  auto rhs = [&](const Op& r) {
    Op out = minus_i * (h * r - r * h);
    for (int k = 1; k <= m; ++k) {
      const Op n = sd[k] * s[k];
      const Op hole = s[k] * sd[k];
      out += minus_i * p.lamb_e * (n * r - r * n);
      out += env_up * (sd[k] * r * s[k] - Real(0.5) * (hole * r + r * hole));
      out += env_down * (s[k] * r * sd[k] - Real(0.5) * (n * r + r * n));

      out += minus_i * p.lamb_b * (n * r - r * n);
      out += probe_down * (exp(-tb) * (sd[k] * r * s[k]) - Real(0.5) * (n * r + r * n));
      out += probe_up * (exp(tb) * (s[k] * r * sd[k]) - Real(0.5) * (hole * r + r * hole));
    }
    for (int i = 1; i <= m; ++i) {
      for (int gap = 1; gap <= m - i; ++gap) {
        const int j = i + gap;
        const Op a = sd[i] * s[j];
        const Op b = s[i] * sd[j];
        out += probe_down * (exp(-(gap - 1) * tb) * (s[j] * r * sd[i]) +
                             exp(-(gap + 1) * tb) * (sd[i] * r * s[j]) -
                             exp(-gap * tb) * (a * r + r * a));
        out += probe_up * (exp((gap - 1) * tb) * (sd[j] * r * s[i]) +
                           exp((gap + 1) * tb) * (s[i] * r * sd[j]) -
                           exp(gap * tb) * (b * r + r * b));
      }
    }
    return out;
  };

  SuperOperator<Real> l(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      Op unit = Op::Zero(d, d);
      unit(a, b) = 1;
      const Op dr = rhs(unit);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index jj = 0; jj < d; ++jj) l(i * d + jj, a * d + b) = dr(i, jj);
      }
    }
  }
  return l;
}

}  // namespace rflow

#endif  // REPLICAFLOW_LIOUVILLIAN_ORACLE_HPP
