#include "latpin/dynamics.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "latpin/errors.hpp"
#include "latpin/predict.hpp"

namespace {

using namespace latpin;

LatticeProblem axis_problem(double s_hat, double r, int J = 200) {
  return make_problem(cubic_const_model(s_hat),
                      make_orientation(1, 0, LatticeKind::square), J, r);
}

TEST(FrontPositionNoise, StableUnderSmallPerturbations) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  LatticeProblem p = axis_problem(1.0, 0.0, 120);
  auto u = front_seed(p, 60.0);
  const double base = front_position(p, u, mx.u_minus, mx.u_plus);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> d(-1e-6, 1e-6);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = u;
    for (double& x : v) x += d(rng);
    const double pos = front_position(p, v, mx.u_minus, mx.u_plus);
    EXPECT_NEAR(pos, base, 1e-4 * p.spacing());
  }
}

TEST(Evolve, SteadyFrontStaysPut) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  LatticeProblem p = axis_problem(1.0, mx.r_M, 160);
  const auto u0 = newton(p, front_seed(p, 80.0));
  const auto traj = evolve(p, u0, 0.0, 1000.0);
  EXPECT_TRUE(traj.pinned);
  EXPECT_LT(std::abs(traj.drift_velocity), 1e-8);
  EXPECT_NEAR(traj.front_positions.back(), traj.front_positions.front(),
              1e-3 * p.spacing());
}

TEST(Evolve, FarOutsideRegionDrifts) {
  const double s_hat = 1.0;
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double W = pinning_width_unscaled(ModelId::cubic_const, o, s_hat, 2535.0);
  LatticeProblem p = axis_problem(s_hat, 2.0 * W, 160);
  LatticeProblem p0 = axis_problem(s_hat, 0.0, 160);
  const auto u0 = newton(p0, front_seed(p0, 80.0));
  const auto traj = evolve(p, u0, 0.0, 4000.0);
  EXPECT_FALSE(traj.pinned);
  // Monotone motion: positions never retreat by more than interpolation noise.
  for (std::size_t i = 1; i < traj.front_positions.size(); ++i) {
    EXPECT_GE(traj.front_positions[i] - traj.front_positions[i - 1],
              -1e-3 * p.spacing());
  }
  EXPECT_GE(std::abs(traj.front_positions.back() - traj.front_positions.front()),
            p.spacing());
}

TEST(Evolve, ConstantStateHasNoFront) {
  const auto spec = cubic_const_model(1.0);
  LatticeProblem p = axis_problem(1.0, 0.0, 60);
  std::vector<double> u(60, maxwell(spec).u_plus);
  EXPECT_THROW(evolve(p, u, 0.0, 10.0), Error);
}

TEST(Evolve, UnstableTimestepRejected) {
  LatticeProblem p = axis_problem(1.0, 0.0, 60);
  const auto u0 = front_seed(p, 30.0);
  try {
    evolve(p, u0, 10.0, 100.0);
    FAIL() << "expected Instability";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Instability);
  }
}

TEST(Depin, BracketMustStraddle) {
  LatticeProblem p = axis_problem(1.0, 0.0, 140);
  DepinOptions opts;
  opts.T_max = 200.0;
  // Both ends well inside the pinning region: invalid bracket.
  try {
    depinning_threshold(p, Side::right, {0.0, 1e-6}, opts);
    FAIL() << "expected BracketInvalid";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BracketInvalid);
  }
}

TEST(Depin, ThresholdNearAnalyticHalfWidth) {
  const double s_hat = 1.0;
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double W = pinning_width_unscaled(ModelId::cubic_const, o, s_hat, 2535.0);
  LatticeProblem p = axis_problem(s_hat, 0.0, 160);
  DepinOptions opts;
  opts.T_max = 3000.0;
  opts.tol = W / 25.0;
  const double thr = depinning_threshold(p, Side::right, {0.0, 2.0 * W}, opts);
  EXPECT_GT(thr, 0.5 * W);
  EXPECT_LT(thr, 2.0 * W);
}

TEST(Depin, VelocityGrowsWithDistance) {
  const double s_hat = 1.0;
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double W = pinning_width_unscaled(ModelId::cubic_const, o, s_hat, 2535.0);
  LatticeProblem p0 = axis_problem(s_hat, 0.0, 160);
  const auto u0 = newton(p0, front_seed(p0, 80.0));
  double prev = 0.0;
  for (double f : {2.0, 3.0, 5.0}) {
    LatticeProblem p = axis_problem(s_hat, f * W, 160);
    const auto traj = evolve(p, u0, 0.0, 1500.0);
    const double v = std::abs(traj.drift_velocity);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

}  // namespace
