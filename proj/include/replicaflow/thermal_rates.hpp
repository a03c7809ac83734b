#ifndef REPLICAFLOW_THERMAL_RATES_HPP
#define REPLICAFLOW_THERMAL_RATES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace rflow {

/// Bose occupation 1/(e^x - 1) for x > 0, overflow-free for large x.
template <typename Real>
Real bose(Real x) {
  using std::exp;
  using std::expm1;
  using std::isfinite;
  if (!isfinite(x) || !(x > 0)) throw std::domain_error("bose: argument must be finite and > 0");
  if (x <= 1) return 1 / expm1(x);
  return exp(-x) / -expm1(-x);
}

/// Generalized multi-replica correlator gamma * e^{N theta} * nbar(M theta),
/// evaluated with the exponents combined: gamma * e^{(N-M) theta} / (1 - e^{-M theta}).
/// Requires 0 <= N <= M so the combined exponent never overflows.
template <typename Real>
Real correlator_S(int n, int m, Real theta, Real gamma) {
  using std::exp;
  using std::expm1;
  if (m < 1) throw std::invalid_argument("correlator_S: M must be >= 1");
  if (n < 0 || n > m) {
    throw std::invalid_argument("correlator_S: need 0 <= N <= M, got N=" + std::to_string(n) +
                                " M=" + std::to_string(m));
  }
  if (!(theta > 0)) throw std::domain_error("correlator_S: theta must be > 0");
  if (!(gamma >= 0)) throw std::domain_error("correlator_S: gamma must be >= 0");
  return gamma * exp(Real(n - m) * theta) / -expm1(-Real(m) * theta);
}

/// Absorption (up) and emission (down) rates obeying down = up * e^{M theta}.
template <typename Real>
class RatePair {
 public:
  RatePair(Real up, Real down, int m, Real theta) : up_(up), down_(down) {
    using std::abs;
    using std::exp;
    using std::isfinite;
    if (!isfinite(up) || !isfinite(down) || up < 0 || down < 0) {
      throw std::domain_error("RatePair: rates must be finite and >= 0");
    }
    // Compare in the direction that cannot overflow.
    const Real balanced_up = down * exp(-Real(m) * theta);
    if (abs(balanced_up - up) > Real(1e-12) * (abs(up) + abs(balanced_up)) + Real(1e-300)) {
      throw std::domain_error("RatePair: detailed balance violated");
    }
  }

  Real up() const { return up_; }
  Real down() const { return down_; }

 private:
  Real up_;
  Real down_;
};

/// Probe rates for M replicas: up = gamma_b nbar(M theta_b), down = gamma_b (nbar + 1).
template <typename Real>
RatePair<Real> rates_probe(int m, Real theta_b, Real gamma_b) {
  return RatePair<Real>(correlator_S(0, m, theta_b, gamma_b), correlator_S(m, m, theta_b, gamma_b), m,
                        theta_b);
}

/// Environment rates (single replica, single quantum).
template <typename Real>
RatePair<Real> rates_env(Real theta_e, Real gamma_e) {
  return rates_probe(1, theta_e, gamma_e);
}

/// Weak-coupling prefactor G_M = M nbar(M theta) / (nbar((M-1) theta) nbar(theta)),
/// rewritten so that the exponentials cancel analytically.
template <typename Real>
Real prefactor_G(int m, Real theta) {
  using std::expm1;
  if (m < 2) throw std::invalid_argument("prefactor_G: M must be >= 2");
  if (!(theta > 0)) throw std::domain_error("prefactor_G: theta must be > 0");
  const Real shifted = -expm1(-Real(m - 1) * theta);
  return Real(m) * shifted * -expm1(-theta) / -expm1(-Real(m) * theta);
}

}  // namespace rflow

#endif  // REPLICAFLOW_THERMAL_RATES_HPP
