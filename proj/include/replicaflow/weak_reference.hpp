#ifndef REPLICAFLOW_WEAK_REFERENCE_HPP
#define REPLICAFLOW_WEAK_REFERENCE_HPP

// Weak-coupling closed forms for the entropy flow into a weakly coupled probe,
// evaluated on the single-replica steady state of the qubit.

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

#include "replicaflow/liouvillian.hpp"

namespace rflow {

/// Qubit density matrix in the energy basis.
template <typename Real>
struct QubitState {
  Real p0 = 1;
  Real p1 = 0;
  Complex<Real> rho01{0, 0};
};

/// Throws unless p0 + p1 = 1, both populations lie in [0, 1] and
/// |rho01|^2 <= p0 p1.
template <typename Real>
void check_qubit_state(const QubitState<Real>& s, Real tol = Real(1e-12)) {
  using std::abs;
  using std::norm;
  if (abs(s.p0 + s.p1 - 1) > tol) throw std::domain_error("QubitState: p0 + p1 != 1");
  if (s.p0 < -tol || s.p0 > 1 + tol || s.p1 < -tol || s.p1 > 1 + tol) {
    throw std::domain_error("QubitState: population outside [0, 1]");
  }
  if (norm(s.rho01) > s.p0 * s.p1 + tol) throw std::domain_error("QubitState: coherence violates positivity");
}

/// Steady state of the single-replica Liouvillian (probe dissipator included
/// unless `include_probe` is false). Throws if the kernel is not one-dimensional.
template <typename Real>
QubitState<Real> steady_state_qubit(const BasicModelParams<Real>& p, bool include_probe = true) {
  using std::abs;
  BasicModelParams<Real> q = p;
  if (!include_probe) q.gamma_b = 0;
  const SuperOperator<Real> l = assemble(1, q).total;

  Eigen::JacobiSVD<SuperOperator<Real>> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();  // descending
  const Real scale = std::max(sv(0), Real(1e-300));
  int kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= Real(1e-10) * scale) ++kernel;
  }
  if (kernel != 1) {
    throw std::runtime_error("steady_state_qubit: kernel dimension " + std::to_string(kernel) + " != 1");
  }

  const ComplexVector<Real> v = svd.matrixV().col(sv.size() - 1);
  ReplicaOperator<Real> rho = devectorize<Real>(v);
  rho /= rho.trace();
  rho = Real(0.5) * (rho + rho.adjoint()).eval();

  QubitState<Real> s;
  s.p0 = rho(0, 0).real();
  s.p1 = rho(1, 1).real();
  s.rho01 = rho(0, 1);
  return s;
}

struct WeakFlowOptions {
  /// Multiply the Renyi flow by the qubit frequency (in units of Gamma_e), as
  /// the closed form is literally written. Off by default: the flow is then a rate.
  bool literal_omega = false;
  double qubit_omega = 1.0;
};

namespace detail {

template <typename Real>
Real weak_bracket(const BasicModelParams<Real>& p, const QubitState<Real>& s, bool with_coherence) {
  using std::norm;
  const auto r = rates_probe(1, p.theta_b, p.gamma_b);
  const Real net = r.down() - r.up();
  Real bracket = r.down() * s.p1 - r.up() * s.p0;
  if (with_coherence) bracket -= net * norm(s.rho01);
  return bracket;
}

}  // namespace detail

/// F_M = G_M [Gdown p1 - Gup p0 - (Gdown - Gup) |rho01|^2], single-quantum probe rates.
template <typename Real>
Real weak_flow_renyi(const BasicModelParams<Real>& p, int replicas, const QubitState<Real>& s,
                     const WeakFlowOptions& options = {}) {
  if (replicas < 2) throw std::invalid_argument("weak_flow_renyi: M must be >= 2");
  Real f = prefactor_G(replicas, p.theta_b) * detail::weak_bracket(p, s, true);
  if (options.literal_omega) f *= Real(options.qubit_omega);
  return f;
}

/// Von Neumann flow into the probe, (Gdown p1 - Gup p0 - Gnet |rho01|^2) theta_b.
template <typename Real>
Real weak_flow_vN_qubit(const BasicModelParams<Real>& p, const QubitState<Real>& s) {
  return detail::weak_bracket(p, s, true) * p.theta_b;
}

/// Same as weak_flow_vN_qubit with the coherence term dropped.
template <typename Real>
Real weak_flow_vN_qubit_incoherent(const BasicModelParams<Real>& p, const QubitState<Real>& s) {
  return detail::weak_bracket(p, s, false) * p.theta_b;
}

/// Driven oscillator at effective temperature theta_h = omega/T_h.
template <typename Real>
Real weak_flow_vN_oscillator(Real theta_h, Real theta_b, Real chi_b) {
  return (bose(theta_h) - bose(theta_b)) * chi_b * theta_b;
}

}  // namespace rflow

#endif  // REPLICAFLOW_WEAK_REFERENCE_HPP
