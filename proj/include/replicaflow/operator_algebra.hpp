#ifndef REPLICAFLOW_OPERATOR_ALGEBRA_HPP
#define REPLICAFLOW_OPERATOR_ALGEBRA_HPP

// Replica-space operators and superoperator constructors.
//
// Conventions used throughout the library:
//   * qubit basis |0> (ground, index 0), |1> (excited, index 1);
//     the lowering operator maps |1> to |0>;
//   * replica 1 is the leftmost tensor factor;
//   * vectorization is row-major: element (i, j) of a dim x dim operator
//     sits at index i * dim + j, hence vec(A rho B) = (A (x) B^T) vec(rho).

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace rflow {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

/// Operator on the 2^M-dimensional replica Hilbert space.
template <typename Real>
using ReplicaOperator = ComplexMatrix<Real>;

/// Linear map on vectorized replica operators, dimension 4^M.
template <typename Real>
using SuperOperator = ComplexMatrix<Real>;

inline Eigen::Index replica_dim(int replicas) { return Eigen::Index{1} << replicas; }
inline Eigen::Index super_dim(int replicas) { return Eigen::Index{1} << (2 * replicas); }

/// Kronecker product of two dense matrices.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace qubit {

template <typename Real>
ComplexMatrix<Real> lowering() {
  ComplexMatrix<Real> s = ComplexMatrix<Real>::Zero(2, 2);
  s(0, 1) = 1;
  return s;
}

template <typename Real>
ComplexMatrix<Real> pauli_x() {
  ComplexMatrix<Real> x = ComplexMatrix<Real>::Zero(2, 2);
  x(0, 1) = 1;
  x(1, 0) = 1;
  return x;
}

/// diag(1, -1) in the (|0>, |1>) basis.
template <typename Real>
ComplexMatrix<Real> pauli_z() {
  ComplexMatrix<Real> z = ComplexMatrix<Real>::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  return z;
}

}  // namespace qubit

/// I^(k-1) (x) op (x) I^(M-k) for a single-qubit operator `op`.
template <typename Real>
ReplicaOperator<Real> embed_on_replica(const ComplexMatrix<Real>& op, int k, int replicas) {
  if (replicas < 1) throw std::invalid_argument("replica count must be >= 1");
  if (k < 1 || k > replicas) {
    throw std::out_of_range("replica index " + std::to_string(k) + " outside 1.." +
                            std::to_string(replicas));
  }
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("single-qubit operator must be 2x2");
  const ComplexMatrix<Real> left = ComplexMatrix<Real>::Identity(replica_dim(k - 1), replica_dim(k - 1));
  const ComplexMatrix<Real> right =
      ComplexMatrix<Real>::Identity(replica_dim(replicas - k), replica_dim(replicas - k));
  return kron(kron(left, op), right);
}

template <typename Real>
ReplicaOperator<Real> lowering_on_replica(int k, int replicas) {
  return embed_on_replica<Real>(qubit::lowering<Real>(), k, replicas);
}

template <typename Real>
ComplexVector<Real> vectorize(const ReplicaOperator<Real>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("vectorize: operator must be square");
  const Eigen::Index n = a.rows();
  ComplexVector<Real> v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = a(i, j);
  }
  return v;
}

template <typename Real>
ReplicaOperator<Real> devectorize(const ComplexVector<Real>& v) {
  const Eigen::Index len = v.size();
  Eigen::Index n = 1;
  while (n * n < len) n *= 2;
  if (len < 4 || n * n != len) {
    throw std::invalid_argument("devectorize: length " + std::to_string(len) + " is not a power of 4");
  }
  ReplicaOperator<Real> a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = v(i * n + j);
  }
  return a;
}

/// K with K vec(rho) = vec(A rho B).
template <typename Real>
SuperOperator<Real> sandwich_super(const ReplicaOperator<Real>& a, const ReplicaOperator<Real>& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("sandwich_super: dimension mismatch");
  }
  return kron(a, b.transpose());
}

/// K vec(rho) = vec(A rho).
template <typename Real>
SuperOperator<Real> left_super(const ReplicaOperator<Real>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("left_super: operator must be square");
  return kron(a, ComplexMatrix<Real>::Identity(a.rows(), a.cols()));
}

/// K vec(rho) = vec(rho A).
template <typename Real>
SuperOperator<Real> right_super(const ReplicaOperator<Real>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("right_super: operator must be square");
  return kron(ComplexMatrix<Real>::Identity(a.rows(), a.cols()), a.transpose());
}

/// K vec(rho) = vec(H rho - rho H).
template <typename Real>
SuperOperator<Real> commutator_super(const ReplicaOperator<Real>& h) {
  return left_super(h) - right_super(h);
}

/// K vec(rho) = vec(A rho + rho A).
template <typename Real>
SuperOperator<Real> anticommutator_super(const ReplicaOperator<Real>& a) {
  return left_super(a) + right_super(a);
}

}  // namespace rflow

#endif  // REPLICAFLOW_OPERATOR_ALGEBRA_HPP
