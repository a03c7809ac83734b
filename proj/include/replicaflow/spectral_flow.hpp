#ifndef REPLICAFLOW_SPECTRAL_FLOW_HPP
#define REPLICAFLOW_SPECTRAL_FLOW_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "replicaflow/liouvillian.hpp"

namespace rflow {

template <typename Real>
struct LeadingEigenvalue {
  Complex<Real> value;
  bool complex_warning = false;  // |Im| exceeded the tolerance
};

/// Picks the eigenvalue with the largest real part. Candidates within `tol`
/// of the maximum are ranked by smallest |Im|, then by non-negative Im.
template <typename Real>
LeadingEigenvalue<Real> leading_eigenvalue(const ComplexVector<Real>& eigenvalues, Real tol) {
  using std::abs;
  if (eigenvalues.size() == 0) throw std::invalid_argument("leading_eigenvalue: empty spectrum");
  Real max_re = eigenvalues(0).real();
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) max_re = std::max(max_re, eigenvalues(i).real());

  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const Complex<Real> z = eigenvalues(i);
    if (z.real() < max_re - tol) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const Complex<Real> cur = eigenvalues(best);
    const Real dz = abs(z.imag());
    const Real dc = abs(cur.imag());
    if (dz < dc - tol || (abs(dz - dc) <= tol && z.imag() > cur.imag())) best = i;
  }
  LeadingEigenvalue<Real> out;
  out.value = eigenvalues(best);
  out.complex_warning = abs(out.value.imag()) > tol;
  return out;
}

/// max over lambda of the distance from conj(lambda) to the nearest eigenvalue.
template <typename Real>
Real pairing_defect(const ComplexVector<Real>& eigenvalues) {
  using std::abs;
  using std::conj;
  Real worst = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const Complex<Real> target = conj(eigenvalues(i));
    Real nearest = std::numeric_limits<Real>::infinity();
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) nearest = std::min(nearest, abs(eigenvalues(j) - target));
    worst = std::max(worst, nearest);
  }
  return worst;
}

/// Maximum absolute column sum.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real norm1(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Real>
struct SpectrumResult {
  ComplexVector<Real> eigenvalues;
  Complex<Real> leading;              // Lambda_0 as a complex number
  Real leading_re = 0;                // Lambda_0 (the flow is its negative)
  Real leading_imag_residual = 0;     // |Im Lambda_0|
  Real max_positive_real_part = 0;    // max Re over the whole spectrum
  Real pairing_defect = 0;
  Real norm1 = 0;                     // ||L||_1 of the input
  bool complex_leading = false;
};

/// Full spectrum of a dense non-Hermitian superoperator with diagnostics.
/// `tol` decides ties and the complex-leading warning; a negative value means
/// 1e-9 * max(1, ||L||_1).
template <typename Real>
SpectrumResult<Real> spectrum(const SuperOperator<Real>& l, Real tol = Real(-1)) {
  using std::isfinite;
  if (l.rows() != l.cols()) throw std::invalid_argument("spectrum: matrix must be square");
  if (l.size() == 0) throw std::invalid_argument("spectrum: empty matrix");
  if (!l.allFinite()) throw std::domain_error("spectrum: non-finite entries");

  Eigen::ComplexEigenSolver<SuperOperator<Real>> solver(l, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: eigensolver did not converge for a " + std::to_string(l.rows()) +
                             "x" + std::to_string(l.cols()) + " matrix");
  }

  SpectrumResult<Real> out;
  out.eigenvalues = solver.eigenvalues();
  out.norm1 = norm1(l);
  if (tol < 0) tol = Real(1e-9) * std::max(Real(1), out.norm1);

  const auto lead = leading_eigenvalue(out.eigenvalues, tol);
  out.leading = lead.value;
  out.leading_re = lead.value.real();
  out.leading_imag_residual = std::abs(lead.value.imag());
  out.complex_leading = lead.complex_warning;
  out.max_positive_real_part = out.eigenvalues.real().maxCoeff();
  out.pairing_defect = rflow::pairing_defect(out.eigenvalues);
  return out;
}

template <typename Real>
struct FlowResult {
  Real flow = 0;  // F_M = -Lambda_0
  SpectrumResult<Real> spectrum;
};

/// Renyi-M entropy flow into the probe from the leading eigenvalue of the
/// assembled M-replica Liouvillian. M=1 yields zero up to rounding.
template <typename Real>
FlowResult<Real> renyi_flow(const BasicModelParams<Real>& p, int replicas,
                            const AssembleOptions& options = {}) {
  const auto parts = assemble(replicas, p, options);
  FlowResult<Real> out;
  out.spectrum = spectrum<Real>(parts.total);
  out.flow = -out.spectrum.leading_re;
  return out;
}

}  // namespace rflow

#endif  // REPLICAFLOW_SPECTRAL_FLOW_HPP
