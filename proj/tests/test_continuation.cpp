#include "latpin/continuation.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "latpin/errors.hpp"
#include "latpin/predict.hpp"

namespace {

using namespace latpin;
constexpr double kPi = std::numbers::pi;

// Straightforward reference residual, independent of the library routine:
// direct double sum over the 2D stencil with reflected indices.
std::vector<double> reference_residual(const LatticeProblem& p,
                                       const std::vector<double>& u) {
  const auto proj = projections(stencil(p.o.kind), p.o);
  const Stencil st = stencil(p.o.kind);
  std::vector<double> out(p.J);
  auto fetch = [&](int idx) {
    while (idx < 0 || idx >= p.J) {
      if (idx < 0) idx = -idx;
      if (idx >= p.J) idx = 2 * (p.J - 1) - idx;
    }
    return u[idx];
  };
  for (int j = 0; j < p.J; ++j) {
    double acc = st.center_weight * u[j];
    for (const auto& pr : proj) acc += pr.weight * fetch(j + pr.index_offset);
    out[j] = acc - p.spec.f(u[j], p.r);
  }
  return out;
}

TEST(Residual, ConstantStateAtMaxwell) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 64, mx.r_M);
  std::vector<double> u(64, mx.u_plus), res(64);
  residual(p, u, res);
  for (double r : res) EXPECT_NEAR(r, 0.0, 1e-14);
}

TEST(Residual, MatchesReferenceImplementation) {
  for (auto [m1, m2] : {std::pair{1, 0}, {1, 1}, {2, 1}}) {
    const auto spec = cubic_const_model(0.9);
    const Orientation o = make_orientation(m1, m2, LatticeKind::square);
    LatticeProblem p = make_problem(spec, o, 50, 0.01);
    std::vector<double> u(50), res(50);
    for (int j = 0; j < 50; ++j) u[j] = std::sin(0.3 * j) * 0.7;
    residual(p, u, res);
    const auto ref = reference_residual(p, u);
    for (int j = 0; j < 50; ++j) EXPECT_NEAR(res[j], ref[j], 1e-13);
  }
}

TEST(Residual, ReflectionReadsIndexOne) {
  // Ghost -1 reads index 1: perturbing u[1] moves res[0] by the coupling
  // weight twice (the +1 and the reflected -1 legs).
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 32, 0.0);
  std::vector<double> u(32, 0.1), res0(32), res1(32);
  residual(p, u, res0);
  u[1] += 1e-6;
  residual(p, u, res1);
  EXPECT_NEAR((res1[0] - res0[0]) / 1e-6, 2.0, 1e-5);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  const auto spec = cubic_quintic_model(1.0);
  const Orientation o = make_orientation(2, 1, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 24, -0.18);
  std::vector<double> u(24);
  for (int j = 0; j < 24; ++j) u[j] = 0.4 + 0.3 * std::cos(0.7 * j);
  BandedMatrix J(24, p.bandwidth(), p.bandwidth());
  jacobian(p, u, J);
  std::vector<double> res0(24), res1(24);
  residual(p, u, res0);
  const double h = 1e-7;
  for (int k = 0; k < 24; ++k) {
    auto up = u;
    up[k] += h;
    residual(p, up, res1);
    for (int j = 0; j < 24; ++j) {
      const double fd = (res1[j] - res0[j]) / h;
      EXPECT_NEAR(J.get(j, k) + 0.0, fd, 1e-5) << j << "," << k;
    }
  }
}

TEST(Newton, ConstantBranch) {
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 40, 0.05);
  std::vector<double> u0(40, 1.1);
  const auto u = newton(p, u0);
  EXPECT_LT(residual_norm(p, u), 1e-10);
  for (int j = 1; j < 40; ++j) EXPECT_NEAR(u[j], u[0], 1e-12);
}

TEST(Newton, FrontSeedConvergesFast) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 300, mx.r_M);
  const auto seed = front_seed(p, 150.0);
  const auto u = newton(p, seed, 1e-10, 6);  // <= 6 iterations per the spec
  EXPECT_LT(residual_norm(p, u), 1e-10);
  EXPECT_NEAR(front_position(p, u, mx.u_minus, mx.u_plus), 150.0, 1.0);
}

TEST(Newton, NoSolutionBeyondTheBranch) {
  // Far outside the bistable range nothing is near the front seed.
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 60, 5.0);
  EXPECT_THROW(newton(p, front_seed(p, 30.0), 1e-10, 12), Error);
}

class BranchFixture : public ::testing::Test {
 protected:
  static const ContinuationBranch& branch() {
    static const ContinuationBranch b = [] {
      const auto spec = cubic_const_model(1.0);
      const Orientation o = make_orientation(1, 0, LatticeKind::square);
      LatticeProblem p = make_problem(spec, o, 300, 0.0);
      StopPolicy stop;
      stop.max_folds = 12;
      return continue_branch(p, front_seed(p, 20.0), 0.0, {}, stop, +1);
    }();
    return b;
  }
  static LatticeProblem problem() {
    return make_problem(cubic_const_model(1.0),
                        make_orientation(1, 0, LatticeKind::square), 300, 0.0);
  }
};

TEST_F(BranchFixture, CollectsFolds) {
  const auto& b = branch();
  EXPECT_GE(static_cast<int>(b.folds.size()), 8);
}

TEST_F(BranchFixture, EveryPointSatisfiesResidual) {
  const auto& b = branch();
  LatticeProblem p = problem();
  for (const auto& pt : b.points) {
    p.r = pt.r;
    const auto ref = reference_residual(p, pt.u);
    double norm = 0.0;
    for (double x : ref) norm = std::max(norm, std::abs(x));
    EXPECT_LT(norm, 1e-10);
  }
}

TEST_F(BranchFixture, FoldsAlternateAndAccumulate) {
  const auto& b = branch();
  // Sides alternate strictly.
  for (std::size_t i = 1; i < b.folds.size(); ++i) {
    EXPECT_NE(b.folds[i].side, b.folds[i - 1].side);
  }
  // Beyond the skew-dominated start, fold r-values on each side settle onto
  // an accumulation value: successive same-side folds differ by < 1% of the
  // measured width.
  const auto m = measure_pinning_width(b, 4);
  for (std::size_t i = 4; i + 2 < b.folds.size(); ++i) {
    const double diff = std::abs(b.folds[i + 2].r - b.folds[i].r);
    EXPECT_LT(diff, 0.01 * m.width);
  }
}

TEST_F(BranchFixture, WidthWithinThirtyPercentOfAnalytic) {
  const auto& b = branch();
  const auto m = measure_pinning_width(b, 4);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const double wa = pinning_width_unscaled(ModelId::cubic_const, o, 1.0, 2535.0);
  const double wn = 0.5 * m.width;
  EXPECT_NEAR(wn, wa, 0.3 * wa);
  EXPECT_GT(m.r_right, 0.0);
  EXPECT_LT(m.r_left, 0.0);
}

TEST_F(BranchFixture, HalfDomainReflectsOntoFullDomain) {
  const auto& b = branch();
  const auto& pt = b.points.back();
  // Reflect about j = 0 onto a domain of twice the size; the full-domain
  // residual of the patch must vanish to the same tolerance.
  const int J = 300;
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem full = make_problem(spec, o, 2 * J - 1, pt.r);
  std::vector<double> w(2 * J - 1);
  for (int j = 0; j < J; ++j) {
    w[J - 1 + j] = pt.u[j];
    w[J - 1 - j] = pt.u[j];
  }
  EXPECT_LT(residual_norm(full, w), 1e-10);
}

TEST(MeasureWidth, SyntheticFoldsRecoverExactly) {
  ContinuationBranch b;
  const double r_left = -3.25e-3, r_right = 2.75e-3;
  for (int i = 0; i < 12; ++i) {
    Fold f;
    f.side = (i % 2 == 0) ? +1 : -1;
    f.r = f.side > 0 ? r_right : r_left;
    if (i < 4) f.r += (4 - i) * 1e-4;  // skew-contaminated early folds
    f.point_index = i;
    b.folds.push_back(f);
  }
  const auto m = measure_pinning_width(b, 4);
  EXPECT_NEAR(m.r_right, r_right, 1e-15);
  EXPECT_NEAR(m.r_left, r_left, 1e-15);
  EXPECT_NEAR(m.width, r_right - r_left, 1e-15);
}

TEST(MeasureWidth, InsufficientFoldsThrows) {
  ContinuationBranch b;
  for (int i = 0; i < 6; ++i) b.folds.push_back({0.0, i, i % 2 ? -1 : 1});
  try {
    measure_pinning_width(b, 4);
    FAIL() << "expected InsufficientFolds";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientFolds);
  }
}

TEST(GridIndependence, WidthStableUnderRefinement) {
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  auto width_at = [&](int J) {
    LatticeProblem p = make_problem(spec, o, J, 0.0);
    StopPolicy stop;
    stop.max_folds = 10;
    const auto b = continue_branch(p, front_seed(p, 18.0), 0.0, {}, stop, +1);
    return 0.5 * measure_pinning_width(b, 4).width;
  };
  const double w300 = width_at(300);
  const double w600 = width_at(600);
  EXPECT_NEAR(w600, w300, 0.02 * w300);
}

TEST(FrontPosition, ExactAndShifted) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 100, 0.0);
  // front_seed is a down-front centred at z_front
  auto u = front_seed(p, 50.0);
  EXPECT_NEAR(front_position(p, u, mx.u_minus, mx.u_plus), 50.0,
              1e-3 * o.spacing);
  auto v = front_seed(p, 51.0);
  EXPECT_NEAR(front_position(p, v, mx.u_minus, mx.u_plus), 51.0,
              1e-3 * o.spacing);
}

TEST(FrontPosition, NoFrontCases) {
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, 60, 0.0);
  std::vector<double> constant(60, mx.u_plus);
  EXPECT_THROW(front_position(p, constant, mx.u_minus, mx.u_plus), Error);
  const auto patch = patch_seed(p, 20.0, 40.0);
  EXPECT_THROW(front_position(p, patch, mx.u_minus, mx.u_plus), Error);
}

TEST(Rung, AntisymmetricEigenvalueSignChange) {
  // Along the full-domain site-centred patch branch the antisymmetric
  // eigenvalue crosses zero between folds; switching there lands on the rung
  // branch, which terminates on the bond-centred branch.
  const auto spec = cubic_const_model(1.0);
  const auto mx = maxwell(spec);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const int J = 81;  // odd: site centre at j = 40
  LatticeProblem p = make_problem(spec, o, J, 0.0);
  const auto seed = patch_seed(p, 33.0, 47.0);

  StepPolicy step;
  StopPolicy stop;
  stop.max_folds = 4;
  const auto b = continue_branch(p, seed, 0.0, step, stop, +1);
  ASSERT_GE(b.folds.size(), 2u);

  // Scan for the crossing.
  int crossing = -1;
  double prev = 0.0;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    LatticeProblem q = p;
    q.r = b.points[i].r;
    const double lam = antisymmetric_eigenvalue(q, b.points[i].u);
    if (i > 0 && lam * prev < 0.0) {
      crossing = static_cast<int>(i);
      break;
    }
    prev = lam;
  }
  ASSERT_GT(crossing, 0) << "no rung bifurcation detected along the branch";

  // Switch onto the rung at the crossing and follow it to the other snake.
  const auto& at = b.points[crossing];
  LatticeProblem q = p;
  q.r = at.r;
  std::vector<double> v;
  antisymmetric_eigenvalue(q, at.u, &v);
  double unorm = 0.0;
  for (double x : at.u) unorm = std::max(unorm, std::abs(x));
  const auto [u_rung, r_rung] = branch_switch(q, at, v, 1e-3 * unorm);
  const double defect_site_start = symmetry_defect(at.u, J - 1);
  EXPECT_LT(defect_site_start, 1e-8);
  EXPECT_GT(symmetry_defect(u_rung, J - 1), 1e-5);

  // Continue the rung until it regains a bond-centred symmetry.
  std::vector<double> hint(J + 1, 0.0);
  for (int j = 0; j < J; ++j) hint[j] = u_rung[j] - at.u[j];
  hint[J] = r_rung - at.r;
  StopPolicy rstop;
  rstop.max_points = 4000;
  rstop.max_folds = 50;
  bool connected = false;
  for (int dir : {+1, -1}) {
    const auto rb = continue_branch(q, u_rung, r_rung, step, rstop, dir, &hint);
    for (const auto& pt : rb.points) {
      const double site = symmetry_defect(pt.u, J - 1);
      const double bond = std::min(symmetry_defect(pt.u, J),
                                   symmetry_defect(pt.u, J - 2));
      if (bond < 1e-7 && site > 1e-4) {
        connected = true;
        break;
      }
    }
    if (connected) break;
  }
  EXPECT_TRUE(connected)
      << "rung did not terminate on the bond-centred branch";
}

}  // namespace
