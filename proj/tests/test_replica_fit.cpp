#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "replicaflow/replica_fit.hpp"

using namespace rflow;
using doctest::Approx;

namespace {

std::vector<FlowPoint> sample(double a, double b, double c, std::vector<int> ms = {2, 3, 4, 5}) {
  std::vector<FlowPoint> pts;
  for (int m : ms) pts.push_back({m, replica_model(m, a, b, c)});
  return pts;
}

bool rel(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(std::abs(y), 1e-300); }

}  // namespace

TEST_SUITE("replica_fit") {

TEST_CASE("model samples") {
  CHECK(replica_model(2, 1, 2, 3) == Approx(0.9).epsilon(1e-15));
  CHECK(replica_model(3, 1, 2, 3) == Approx(1.8333333333333333).epsilon(1e-15));
  CHECK(replica_model(4, 1, 2, 3) == Approx(2.7857142857142856).epsilon(1e-15));
  CHECK(replica_model(5, 1, 2, 3) == Approx(3.75).epsilon(1e-15));
}

TEST_CASE("model vanishes at one replica") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = u(rng);
    if (std::abs(1 + c) < 1e-3) continue;
    CHECK(replica_model(1, u(rng), u(rng), c) == 0);
  }
}

TEST_CASE("round trip from (1, 2, 3)") {
  const auto fit = fit_flow_vs_M(sample(1, 2, 3));
  CHECK(rel(fit.a, 1, 1e-6));
  CHECK(rel(fit.b, 2, 1e-6));
  CHECK(rel(fit.c, 3, 1e-6));
  CHECK(fit.rms_residual < 1e-10);
  CHECK(fit.points_used.size() == 4);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.s_vN == Approx(0.875).epsilon(1e-6));
}

TEST_CASE("all-zero flows") {
  const std::vector<FlowPoint> pts{{2, 0}, {3, 0}, {4, 0}, {5, 0}};
  const auto fit = fit_flow_vs_M(pts);
  CHECK(fit.a == 0);
  CHECK(fit.s_vN == 0);
  CHECK(fit.degenerate);
  CHECK(fit.rms_residual == 0);
}

TEST_CASE("flows linear in M - 1") {
  const std::vector<FlowPoint> pts{{2, 0.7}, {3, 1.4}, {4, 2.1}, {5, 2.8}};
  const auto fit = fit_flow_vs_M(pts);
  CHECK(fit.rms_residual < 1e-9);
  CHECK(std::abs(fit.b) < 1e-6);
  CHECK(fit.a == Approx(0.7).epsilon(1e-7));
  CHECK(fit.s_vN == Approx(0.7).epsilon(1e-6));
}

TEST_CASE("extrapolation examples") {
  FitResult f;
  f.a = 1;
  f.b = 2;
  f.c = 3;
  CHECK(extrapolate_vN(f) == Approx(0.875).epsilon(1e-15));
  f.a = 5;
  f.b = 0;
  for (double c : {-3.0, 0.0, 7.5}) {
    f.c = c;
    CHECK(extrapolate_vN(f) == 5);
  }
  f.c = -1 + 1e-7;
  CHECK_THROWS_AS(extrapolate_vN(f), std::domain_error);
}

TEST_CASE("extrapolation equals the model slope at one replica") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> ua(-3, 3), ub(-5, 5), uc(-0.5, 6);
  for (int trial = 0; trial < 50; ++trial) {
    FitResult f;
    f.a = ua(rng);
    f.b = ub(rng);
    f.c = uc(rng);
    const double h = 1e-6;
    const double fd = (replica_model(1 + h, f.a, f.b, f.c) - replica_model(1 - h, f.a, f.b, f.c)) / (2 * h);
    CHECK(std::abs(extrapolate_vN(f) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("s_vN is recomputable from the fitted parameters") {
  const auto fit = fit_flow_vs_M(sample(0.3, -1.2, 0.4));
  CHECK(std::abs(fit.s_vN - fit.a * (1 - fit.b / ((1 + fit.c) * (1 + fit.c)))) <= 1e-14 * std::abs(fit.s_vN));
}

TEST_CASE("refitting model samples is idempotent") {
  const double params[][3] = {{1, 2, 3}, {0.233, -1.25, 0.23}, {2, 5, 8}, {0.5, -0.5, 1.5}};
  for (const auto& q : params) {
    const auto fit = fit_flow_vs_M(sample(q[0], q[1], q[2], {2, 3, 4, 5, 6}));
    CHECK(rel(fit.a, q[0], 1e-8));
    CHECK(rel(fit.b, q[1], 1e-8));
    CHECK(rel(fit.c, q[2], 1e-8));
  }
}

TEST_CASE("scaling the flows scales a only") {
  const auto pts = sample(0.8, 1.5, 2.0);
  const auto base = fit_flow_vs_M(pts);
  for (double s : {0.01, 3.0, 250.0}) {
    auto scaled = pts;
    for (auto& p : scaled) p.flow *= s;
    const auto fit = fit_flow_vs_M(scaled);
    CHECK(rel(fit.a, s * base.a, 1e-8));
    CHECK(rel(fit.b, base.b, 1e-8));
    CHECK(rel(fit.c, base.c, 1e-8));
  }
}

TEST_CASE("fits are deterministic") {
  const std::vector<FlowPoint> pts{{2, 0.339}, {3, 0.612}, {4, 0.866}, {5, 1.112}};
  const auto a = fit_flow_vs_M(pts);
  const auto b = fit_flow_vs_M(pts);
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);
  CHECK(a.c == b.c);
  CHECK(std::abs(1 + a.c) > 0.1);
}

TEST_CASE("fit input checks") {
  CHECK_THROWS_AS(fit_flow_vs_M({{2, 1}, {3, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_flow_vs_M({{2, 1}, {3, 2}, {3, 2.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_flow_vs_M({{1, 0}, {3, 2}, {4, 2.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_flow_vs_M({{2, 1}, {3, std::nan("")}, {4, 2.5}}), std::invalid_argument);
}

TEST_CASE("power-law slope") {
  std::vector<TemperaturePoint> inv, sq;
  for (double t = 3; t <= 10; t += 1.4) {
    inv.push_back({t, 7 / t});
    sq.push_back({t, t * t});
  }
  CHECK(std::abs(powerlaw_slope(inv) + 1) < 1e-12);
  CHECK(std::abs(powerlaw_slope(sq) - 2) < 1e-12);
  CHECK_THROWS_AS(powerlaw_slope({{1, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(powerlaw_slope({{1, 1}, {2, -2}, {3, 1}}), std::domain_error);
  CHECK_THROWS_AS(powerlaw_slope({{0, 1}, {2, 2}, {3, 1}}), std::domain_error);
  CHECK_THROWS_AS(powerlaw_slope({{2, 1}, {2, 2}, {2, 1}}), std::domain_error);
}

}  // TEST_SUITE
