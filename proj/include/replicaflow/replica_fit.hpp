#ifndef REPLICAFLOW_REPLICA_FIT_HPP
#define REPLICAFLOW_REPLICA_FIT_HPP

#include <string>
#include <vector>

namespace rflow {

struct FlowPoint {
  int replicas = 0;  // M
  double flow = 0;   // -Lambda_0(M)
};

/// Interpolant a (M + b/(M+c) - 1 - b/(1+c)); vanishes at M = 1.
double replica_model(double m, double a, double b, double c);

struct FitResult {
  double a = 0;
  double b = 0;
  double c = 0;
  double rms_residual = 0;
  double s_vN = 0;  // a (1 - b/(1+c)^2)
  std::vector<FlowPoint> points_used;
  bool degenerate = false;  // all flows equal; a = 0 returned
};

struct FitOptions {
  int grid_b = 40;
  int grid_c = 40;
  double b_min = -10, b_max = 10;
  double c_min = -0.9, c_max = 10;
  int refine_starts = 8;
  int max_iterations = 500;
};

/// Least-squares fit of the interpolant to flows at integer M >= 2.
/// Deterministic: coarse (b, c) grid with `a` solved in closed form per
/// cell, then damped Gauss-Newton refinement from the best cells.
FitResult fit_flow_vs_M(const std::vector<FlowPoint>& points, const FitOptions& options = {});

/// d/dM of the interpolant at M = 1. Throws if |1 + c| <= 1e-6.
double extrapolate_vN(const FitResult& fit);

struct TemperaturePoint {
  double theta = 0;
  double s_vN = 0;
};

/// Least-squares slope of ln s_vN against ln theta.
double powerlaw_slope(const std::vector<TemperaturePoint>& points);

}  // namespace rflow

#endif  // REPLICAFLOW_REPLICA_FIT_HPP
