#include "replicaflow/replica_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace rflow {

namespace {

constexpr double kPoleMargin = 1e-6;

struct Candidate {
  double sse;
  double a, b, c;
  bool operator<(const Candidate& o) const { return std::tie(sse, a, b, c) < std::tie(o.sse, o.a, o.b, o.c); }
};

double shape(double m, double b, double c) { return (m - 1) * (1 - b / ((m + c) * (1 + c))); }

bool admissible_c(const std::vector<FlowPoint>& pts, double c) {
  if (!std::isfinite(c)) return false;
  if (c > -1.1 && c < -0.9) return false;
  for (const auto& p : pts) {
    if (std::abs(p.replicas + c) < 1e-9) return false;
  }
  return true;
}

double sse(const std::vector<FlowPoint>& pts, double a, double b, double c) {
  double s = 0;
  for (const auto& p : pts) {
    const double r = replica_model(p.replicas, a, b, c) - p.flow;
    s += r * r;
  }
  return s;
}

// Best `a` for fixed (b, c) in closed form.
Candidate solve_linear(const std::vector<FlowPoint>& pts, double b, double c) {
  double gg = 0, gf = 0;
  for (const auto& p : pts) {
    const double g = shape(p.replicas, b, c);
    gg += g * g;
    gf += g * p.flow;
  }
  const double a = gg > 0 ? gf / gg : 0.0;
  return {sse(pts, a, b, c), a, b, c};
}

Candidate refine(const std::vector<FlowPoint>& pts, Candidate x, int max_iterations) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  double lambda = 1e-3;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd jac(n, 3);
    Eigen::VectorXd res(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double m = pts[k].replicas;
      const double mc = m + x.c, oc = 1 + x.c;
      jac(k, 0) = shape(m, x.b, x.c);
      jac(k, 1) = x.a * (1 / mc - 1 / oc);
      jac(k, 2) = x.a * x.b * (1 / (oc * oc) - 1 / (mc * mc));
      res(k) = replica_model(m, x.a, x.b, x.c) - pts[k].flow;
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * res;
    const double floor = 1e-12 * std::max(jtj.trace(), 1e-300);

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d damped = jtj;
      for (int i = 0; i < 3; ++i) damped(i, i) += lambda * std::max(jtj(i, i), floor);
      const Eigen::Vector3d step = damped.ldlt().solve(-jtr);
      if (!step.allFinite()) {
        lambda *= 10;
        continue;
      }
      const Candidate trial{0, x.a + step(0), x.b + step(1), x.c + step(2)};
      if (admissible_c(pts, trial.c)) {
        const double s = sse(pts, trial.a, trial.b, trial.c);
        if (std::isfinite(s) && s < x.sse) {
          const double rel = step.norm() / (1e-300 + Eigen::Vector3d(x.a, x.b, x.c).norm());
          x = {s, trial.a, trial.b, trial.c};
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          if (rel < 1e-15) return x;
          break;
        }
      }
      lambda *= 10;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

double replica_model(double m, double a, double b, double c) { return a * shape(m, b, c); }

FitResult fit_flow_vs_M(const std::vector<FlowPoint>& points, const FitOptions& options) {
  if (points.size() < 3) throw std::invalid_argument("fit_flow_vs_M: need at least 3 points");
  std::set<int> distinct;
  for (const auto& p : points) {
    if (p.replicas < 2) throw std::invalid_argument("fit_flow_vs_M: M values must be >= 2");
    if (!std::isfinite(p.flow)) throw std::invalid_argument("fit_flow_vs_M: non-finite flow");
    if (!distinct.insert(p.replicas).second) throw std::invalid_argument("fit_flow_vs_M: repeated M value");
  }

  FitResult out;
  out.points_used = points;

  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [](const FlowPoint& x, const FlowPoint& y) { return x.flow < y.flow; });
  if (lo->flow == hi->flow) {
    out.degenerate = true;
    double s = 0;
    for (const auto& p : points) s += p.flow * p.flow;
    out.rms_residual = std::sqrt(s / points.size());
    return out;
  }

  std::vector<Candidate> grid;
  grid.reserve(static_cast<std::size_t>(options.grid_b) * options.grid_c);
  for (int i = 0; i < options.grid_b; ++i) {
    const double b = options.b_min + (options.b_max - options.b_min) * i / std::max(1, options.grid_b - 1);
    for (int j = 0; j < options.grid_c; ++j) {
      const double c = options.c_min + (options.c_max - options.c_min) * j / std::max(1, options.grid_c - 1);
      if (!admissible_c(points, c)) continue;
      grid.push_back(solve_linear(points, b, c));
    }
  }
  std::sort(grid.begin(), grid.end());

  Candidate best{std::numeric_limits<double>::infinity(), 0, 0, 0};
  const auto starts = std::min<std::size_t>(grid.size(), std::max(1, options.refine_starts));
  for (std::size_t k = 0; k < starts; ++k) {
    const Candidate refined = refine(points, grid[k], options.max_iterations);
    if (refined < best) best = refined;
  }

  out.a = best.a;
  out.b = best.b;
  out.c = best.c;
  out.rms_residual = std::sqrt(best.sse / points.size());
  out.s_vN = extrapolate_vN(out);
  return out;
}

double extrapolate_vN(const FitResult& fit) {
  const double oc = 1 + fit.c;
  if (!(std::abs(oc) > kPoleMargin)) throw std::domain_error("extrapolate_vN: c too close to -1");
  return fit.a * (1 - fit.b / (oc * oc));
}

double powerlaw_slope(const std::vector<TemperaturePoint>& points) {
  if (points.size() < 3) throw std::invalid_argument("powerlaw_slope: need at least 3 points");
  double mx = 0, my = 0;
  for (const auto& p : points) {
    if (!(p.theta > 0) || !(p.s_vN > 0) || !std::isfinite(p.theta) || !std::isfinite(p.s_vN)) {
      throw std::domain_error("powerlaw_slope: theta and s_vN must be positive");
    }
    mx += std::log(p.theta);
    my += std::log(p.s_vN);
  }
  mx /= points.size();
  my /= points.size();
  double sxy = 0, sxx = 0;
  for (const auto& p : points) {
    const double dx = std::log(p.theta) - mx;
    sxy += dx * (std::log(p.s_vN) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw std::domain_error("powerlaw_slope: all theta values coincide");
  return sxy / sxx;
}

}  // namespace rflow
