#include "latpin/banded.hpp"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "latpin/errors.hpp"

namespace {

using namespace latpin;

// Dense Gaussian elimination with partial pivoting, as the oracle.
std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (int j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int j = r + 1; j < n; ++j) acc -= A[r][j] * x[j];
    x[r] = acc / A[r][r];
  }
  return x;
}

TEST(Banded, MatchesDenseOracleOnRandomSystems) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 40;
    const int kl = 1 + trial % 4;
    const int ku = 1 + (trial / 3) % 4;
    BandedMatrix B(n, kl, ku);
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
        const double v = d(rng) + (i == j ? 3.0 : 0.0);
        A[i][j] = v;
        B.at(i, j) = v;
      }
    }
    std::vector<double> b(n);
    for (double& x : b) x = d(rng);
    const auto expected = dense_solve(A, b);
    B.factor();
    std::vector<double> got = b;
    B.solve(got);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(got[i], expected[i], 1e-10);
  }
}

TEST(Banded, PivotingHandlesSmallDiagonal) {
  // Leading diagonal entry is zero: partial pivoting must still factor.
  BandedMatrix B(4, 1, 1);
  B.at(0, 0) = 0.0;
  B.at(0, 1) = 1.0;
  B.at(1, 0) = 2.0;
  B.at(1, 1) = 1.0;
  B.at(1, 2) = -1.0;
  B.at(2, 1) = 3.0;
  B.at(2, 2) = 1.0;
  B.at(2, 3) = 0.5;
  B.at(3, 2) = 1.0;
  B.at(3, 3) = 2.0;
  B.factor();
  std::vector<double> b{1.0, 2.0, 3.0, 4.0};
  std::vector<double> x = b;
  B.solve(x);
  // residual check against the original entries
  std::vector<std::vector<double>> A = {{0, 1, 0, 0},
                                        {2, 1, -1, 0},
                                        {0, 3, 1, 0.5},
                                        {0, 0, 1, 2}};
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += A[i][j] * x[j];
    EXPECT_NEAR(acc, b[i], 1e-12);
  }
}

TEST(Banded, SingularMatrixThrows) {
  BandedMatrix B(3, 1, 1);
  B.at(0, 0) = 1.0;
  B.at(0, 1) = 2.0;
  B.at(1, 0) = 2.0;
  B.at(1, 1) = 4.0;  // row 1 = 2 x row 0 within the band
  B.at(2, 2) = 0.0;  // and a fully zero trailing column
  try {
    B.factor();
    FAIL() << "expected SingularJacobian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularJacobian);
  }
}

TEST(Banded, OutOfBandAccessThrows) {
  BandedMatrix B(6, 1, 1);
  EXPECT_THROW(B.at(0, 3), Error);
}

}  // namespace
