#ifndef REPLICAFLOW_TESTS_SUPPORT_HPP
#define REPLICAFLOW_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "replicaflow/model_config.hpp"
#include "replicaflow/operator_algebra.hpp"

namespace rflow::testing {

inline ModelParams random_params(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  ModelParams p;
  p.delta = u(-1, 1);
  p.omega = u(0, 3);
  p.theta_e = u(0.5, 6);
  p.theta_b = u(0.5, 30);
  p.gamma_b = u(0, 2);
  p.gamma_e = u(0.5, 1.5);
  p.lamb_e = u(-0.5, 0.5);
  p.lamb_b = u(-0.5, 0.5);
  return p;
}

inline ComplexMatrix<double> random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix<double> m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix<double> random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix<double> a = random_matrix(n, rng);
  return (a + a.adjoint()) / 2.0;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace rflow::testing

#endif  // REPLICAFLOW_TESTS_SUPPORT_HPP
