#pragma once

#include <vector>

namespace latpin {

/// General banded matrix with kl sub- and ku super-diagonals, LAPACK-style
/// band storage with kl extra superdiagonals of fill-in workspace for the
/// pivoted factorization.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int n() const noexcept { return n_; }
  int kl() const noexcept { return kl_; }
  int ku() const noexcept { return ku_; }

  void clear();
  double& at(int i, int j);        // requires -kl <= j - i <= ku
  double get(int i, int j) const;  // zero outside the band

  /// LU factorization with partial pivoting, in place.
  /// Throws Error(SingularJacobian) on a vanishing pivot.
  void factor();
  /// Solves A x = b using the factorization; b is overwritten with x.
  void solve(std::vector<double>& b) const;

 private:
  int n_, kl_, ku_;
  bool factored_ = false;
  std::vector<double> a_;    // (2 kl + ku + 1) x n, column-major bands
  std::vector<int> pivots_;

  double& band(int row, int col) { return a_[std::size_t(col) * ld_ + row]; }
  double band(int row, int col) const { return a_[std::size_t(col) * ld_ + row]; }
  int ld_;
};

}  // namespace latpin
