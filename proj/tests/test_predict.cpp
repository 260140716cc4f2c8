#include "latpin/predict.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "latpin/errors.hpp"

namespace {

using namespace latpin;
constexpr double kPi = std::numbers::pi;

PredictParams params_for(ModelId id, double s_hat, double lambda_abs) {
  PredictParams p;
  p.eps = eps_for_s_hat(id, s_hat);
  p.lambda_abs = lambda_abs;
  p.lambda_arg = kPi;
  return p;
}

TEST(Width, CubicConstAxisAtOne) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double w = pinning_width_unscaled(ModelId::cubic_const, o, 1.0, 2535.0);
  // direct formula oracle: pi * 2535 * exp(-pi^2 sqrt 2)
  const double oracle = kPi * 2535.0 * std::exp(-kPi * kPi * std::sqrt(2.0));
  EXPECT_NEAR(w, oracle, 1e-12 * oracle);
  EXPECT_NEAR(w, 6.91e-3, 0.02e-3);
  (void)fa;
}

TEST(Width, CubicQuinticAxisSmall) {
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double w = pinning_width_unscaled(ModelId::cubic_quintic, o, 0.7, 89.0);
  const double oracle = (16.0 * kPi * 89.0 / (3.0 * 0.7)) *
                        std::exp(-4.0 * kPi * kPi * std::sqrt(3.0) / (3.0 * 0.7));
  EXPECT_NEAR(w, oracle, 1e-12 * oracle);
  EXPECT_NEAR(w, 1.5e-11, 0.1e-11);
}

TEST(Width, ScalingIdentity) {
  // The literal unscaled wrappers equal the scaled formula after
  // substituting each model's rescaling (two algebraic routes).
  const Orientation o = make_orientation(1, 1, LatticeKind::square);
  for (double s_hat : {0.4, 0.8, 1.3}) {
    {
      const auto fa = front_constants(cubic_const_model(1.0));
      const double eps = eps_for_s_hat(ModelId::cubic_const, s_hat);
      const double scaled = pinning_width(fa, o, eps, 2535.0) *
                            std::pow(eps, r_scale_power(ModelId::cubic_const));
      const double lit = pinning_width_unscaled(ModelId::cubic_const, o, s_hat, 2535.0);
      EXPECT_NEAR(scaled, lit, 1e-12 * lit);
    }
    {
      const auto fa = front_constants(cubic_quintic_model(1.0));
      const double eps = eps_for_s_hat(ModelId::cubic_quintic, s_hat);
      const double scaled = pinning_width(fa, o, eps, 89.0) *
                            std::pow(eps, r_scale_power(ModelId::cubic_quintic));
      const double lit = pinning_width_unscaled(ModelId::cubic_quintic, o, s_hat, 89.0);
      EXPECT_NEAR(scaled, lit, 1e-12 * lit);
    }
  }
}

TEST(Width, HexSubstitutesKappaOne) {
  // Replacing kappa1 by the hexagonal value reproduces the hex width formula
  // 2 pi |L| e^{-4 pi sqrt(m1^2+m1m2+m2^2) Im zeta / (sqrt3 eps)} / (eps^4 |intFr|).
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(2, 1, LatticeKind::hex);
  const double eps = 0.6, lam = 100.0;
  const double w = pinning_width(fa, o, eps, lam);
  const double q = std::sqrt(4.0 + 2.0 + 1.0);
  const double literal =
      2.0 * kPi * lam *
      std::exp(-4.0 * kPi * q * fa.zeta.imag() / (std::sqrt(3.0) * eps)) /
      (std::pow(eps, 4.0) * std::abs(fa.int_Fr));
  EXPECT_NEAR(w, literal, 1e-12 * literal);
}

TEST(Width, VanishesAlongRationalApproximants) {
  // Rational approximants of an irrational direction: width -> 0
  // monotonically as m1^2 + m2^2 grows at fixed s_hat.
  const std::vector<std::pair<int, int>> approximants{
      {1, 1}, {2, 1}, {3, 2}, {5, 3}, {8, 5}, {13, 8}};
  double prev = 1e300;
  for (auto [m1, m2] : approximants) {
    const Orientation o = make_orientation(m1, m2, LatticeKind::square);
    const double w = pinning_width_unscaled(ModelId::cubic_const, o, 1.0, 2535.0);
    EXPECT_LT(w, prev);
    prev = w;
  }
  EXPECT_LT(prev, 1e-40);
}

TEST(Origins, SymmetricAtMaxwell) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 1.0, 2535.0);
  const auto [za, zb] = pinning_origins(fa, o, p, 0.0);
  // cos = 0 roots: the two origins are spacing/2 apart, each spacing/4 from
  // the nearest extremum of the pinning cosine.
  EXPECT_NEAR(std::abs(zb - za), 0.5 * o.spacing, 1e-12);
  const double c = chi(fa, o, p.eps, p.lambda_arg);
  EXPECT_NEAR(std::cos(o.kappa1() * za + c), 0.0, 1e-12);
  EXPECT_NEAR(std::cos(o.kappa1() * zb + c), 0.0, 1e-12);
}

TEST(Origins, DoubleRootAtEdges) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 1.0, 2535.0);
  const double W = pinning_width(fa, o, p.eps, p.lambda_abs);
  for (double dr : {W, -W}) {
    const auto [za, zb] = pinning_origins(fa, o, p, dr);
    EXPECT_NEAR(za, zb, 1e-7 * o.spacing);
  }
}

TEST(Origins, BackSubstitution) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(2, 1, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 0.8, 2535.0);
  const double W = pinning_width(fa, o, p.eps, p.lambda_abs);
  const double dr = 0.5 * W;
  const auto [za, zb] = pinning_origins(fa, o, p, dr);
  const double c = chi(fa, o, p.eps, p.lambda_arg);
  for (double z0 : {za, zb}) {
    EXPECT_GE(z0, 0.0);
    EXPECT_LT(z0, o.spacing);
    EXPECT_NEAR(std::cos(o.kappa1() * z0 + c), -dr / W, 1e-12);
  }
}

TEST(Origins, OutsideRegionThrows) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 1.0, 2535.0);
  const double W = pinning_width(fa, o, p.eps, p.lambda_abs);
  try {
    pinning_origins(fa, o, p, 1.01 * W);
    FAIL() << "expected NoPinnedFront";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoPinnedFront);
  }
}

TEST(Snakes, EnvelopeAndSkew) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 1.0, 2535.0);
  const double W = pinning_width(fa, o, p.eps, p.lambda_abs);

  // L large enough that the skew term is below 1e-6 of the cosine amplitude.
  const double A = 0.5 * W * std::abs(fa.int_Fr);
  const double L_star = p.eps / fa.alpha_plus *
                        std::log(fa.alpha_plus * fa.alpha_plus * fa.D_plus *
                                 fa.D_plus / (1e-6 * A));
  std::vector<double> grid;
  for (int i = 0; i < 4000; ++i) grid.push_back(L_star + i * 1e-4);
  double max_abs = 0.0;
  for (auto parity : {Parity::even, Parity::odd}) {
    for (const auto& [L, dr] : snake_branch(fa, o, p, parity, grid)) {
      EXPECT_LE(std::abs(dr), W * (1.0 + 1e-6));
      max_abs = std::max(max_abs, std::abs(dr));
    }
  }
  EXPECT_GT(max_abs, 0.999 * W);  // envelope is attained

  // Skew: at small L the matching term pushes delta_r positive for the
  // built-ins (int_Fr < 0). The two parities share the skew and have
  // opposite cosines, so their mean at equal L is exactly the skew shift.
  std::vector<double> small_grid{0.2 * L_star};
  const double dr_site =
      snake_branch(fa, o, p, Parity::even, small_grid)[0].second;
  const double dr_bond =
      snake_branch(fa, o, p, Parity::odd, small_grid)[0].second;
  const double skew = fa.alpha_plus * fa.alpha_plus * fa.D_plus * fa.D_plus *
                      std::exp(-fa.alpha_plus * small_grid[0] / p.eps) *
                      (-2.0 / fa.int_Fr);
  EXPECT_GT(skew, 0.0);
  EXPECT_NEAR(0.5 * (dr_site + dr_bond), skew, 1e-10 * skew);
}

TEST(Rungs, EndpointsLieOnTheSnakes) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 0.9, 2535.0);
  const double W = pinning_width(fa, o, p.eps, p.lambda_abs);
  const double L_min = 0.5, L_max = 0.52;
  const auto rungs = ladder_rungs(fa, o, p, L_min, L_max, 64);
  ASSERT_FALSE(rungs.empty());
  for (const auto& rung : rungs) {
    const std::vector<double> grid{rung.L};
    const double site = snake_branch(fa, o, p, Parity::even, grid)[0].second;
    const double bond = snake_branch(fa, o, p, Parity::odd, grid)[0].second;
    const double at0 = rung.samples.front().second;
    // find the sample at z0 = spacing/2
    double at_half = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [z0, dr] : rung.samples) {
      if (std::abs(z0 - 0.5 * o.spacing) < 1e-12) at_half = dr;
    }
    ASSERT_FALSE(std::isnan(at_half));
    EXPECT_NEAR(at0, site, 1e-12 * W);
    EXPECT_NEAR(at_half, bond, 1e-12 * W);
  }
}

TEST(Rungs, TwoSolutionsPerInteriorLevel) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 0.9, 2535.0);
  const auto rungs = ladder_rungs(fa, o, p, 0.5, 0.51, 256);
  ASSERT_FALSE(rungs.empty());
  const auto& rung = rungs.front();
  // pick an interior level strictly between the endpoint values
  const double lo = std::min(rung.samples.front().second,
                             rung.samples[rung.samples.size() / 2].second);
  const double hi = std::max(rung.samples.front().second,
                             rung.samples[rung.samples.size() / 2].second);
  const double level = 0.5 * (lo + hi);
  int crossings = 0;
  for (std::size_t i = 1; i < rung.samples.size(); ++i) {
    const double a = rung.samples[i - 1].second - level;
    const double b = rung.samples[i].second - level;
    if (a * b < 0.0) ++crossings;
  }
  EXPECT_EQ(crossings, 2);
}

TEST(Rungs, CountMatchesWindow) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 0.9, 2535.0);
  const double step = p.eps * p.eps * o.spacing;  // rung spacing in L
  for (double delta : {2.3, 4.8, 7.1}) {
    const double L_min = 0.4;
    const double L_max = L_min + delta * step;
    const auto rungs = ladder_rungs(fa, o, p, L_min, L_max, 16);
    EXPECT_GE(static_cast<double>(rungs.size()), std::floor(delta));
    EXPECT_LE(static_cast<double>(rungs.size()), std::ceil(delta));
  }
}

TEST(Rungs, EmptyWindowThrows) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 0.9, 2535.0);
  const double step = p.eps * p.eps * o.spacing;
  try {
    ladder_rungs(fa, o, p, 0.4, 0.4 + 0.01 * step, 16);
    // A window much narrower than a rung spacing will usually be empty, but
    // can contain one rung; only the empty case throws.
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWindow);
  }
  // Deterministically empty: a window of width zero.
  EXPECT_THROW(ladder_rungs(fa, o, p, 0.4, 0.4, 16), Error);
}

TEST(Diagram, ComposesAllPieces) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const auto p = params_for(ModelId::cubic_const, 1.0, 2535.0);
  const auto pred = predict_diagram(fa, o, p, 0.4, 0.45, 50, 16);
  EXPECT_GT(pred.width, 0.0);
  EXPECT_EQ(pred.snake_site.size(), 50u);
  EXPECT_EQ(pred.snake_bond.size(), 50u);
  EXPECT_FALSE(pred.rungs.empty());
}

}  // namespace
