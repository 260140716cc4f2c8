#include "latpin/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latpin/errors.hpp"

namespace latpin {

// Storage layout (dgbtrf convention): entry (i,j) lives at band row
// kl + ku + i - j, column j; rows 0..kl-1 hold pivoting fill-in.

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1) {
  if (n <= 0 || kl < 0 || ku < 0) fail(ErrorCode::Config, "bad band sizes");
  a_.assign(std::size_t(ld_) * n_, 0.0);
  pivots_.assign(n_, 0);
}

void BandedMatrix::clear() {
  std::fill(a_.begin(), a_.end(), 0.0);
  factored_ = false;
}

double& BandedMatrix::at(int i, int j) {
  const int d = j - i;
  if (d < -kl_ || d > ku_) fail(ErrorCode::Config, "entry outside the band");
  factored_ = false;
  return band(kl_ + ku_ + i - j, j);
}

double BandedMatrix::get(int i, int j) const {
  const int d = j - i;
  if (d < -kl_ || d > ku_ + kl_) return 0.0;
  return band(kl_ + ku_ + i - j, j);
}

void BandedMatrix::factor() {
  const int kv = kl_ + ku_;  // effective superdiagonals after fill-in
  for (int j = 0; j < n_; ++j) {
    // Pivot search over the column segment within the band.
    const int last = std::min(kl_, n_ - 1 - j);
    int piv = 0;
    double vmax = std::abs(band(kv, j));
    for (int i = 1; i <= last; ++i) {
      const double v = std::abs(band(kv + i, j));
      if (v > vmax) {
        vmax = v;
        piv = i;
      }
    }
    pivots_[j] = j + piv;
    if (vmax == 0.0) {
      fail(ErrorCode::SingularJacobian,
           "zero pivot in banded LU at column " + std::to_string(j));
    }
    const int ncols = std::min(kv, n_ - 1 - j);  // columns touched by row ops
    if (piv != 0) {
      for (int c = 0; c <= ncols; ++c) {
        std::swap(band(kv - c + piv, j + c), band(kv - c, j + c));
      }
    }
    const double diag = band(kv, j);
    for (int i = 1; i <= last; ++i) {
      const double mult = band(kv + i, j) / diag;
      band(kv + i, j) = mult;
      for (int c = 1; c <= ncols; ++c) {
        band(kv + i - c, j + c) -= mult * band(kv - c, j + c);
      }
    }
  }
  factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
  if (!factored_) fail(ErrorCode::Config, "solve before factor");
  if (static_cast<int>(b.size()) != n_) fail(ErrorCode::Config, "rhs size");
  const int kv = kl_ + ku_;
  // Forward substitution with the recorded row interchanges.
  for (int j = 0; j < n_; ++j) {
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
    const int last = std::min(kl_, n_ - 1 - j);
    for (int i = 1; i <= last; ++i) {
      b[j + i] -= band(kv + i, j) * b[j];
    }
  }
  // Back substitution, column oriented.
  for (int j = n_ - 1; j >= 0; --j) {
    b[j] /= band(kv, j);
    const int first = std::max(0, j - kv);
    for (int i = first; i < j; ++i) {
      b[i] -= band(kv + i - j, j) * b[j];
    }
  }
}

}  // namespace latpin
