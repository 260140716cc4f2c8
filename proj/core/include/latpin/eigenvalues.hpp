#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "latpin/lattice.hpp"

namespace latpin {

/// Eigenvalues kappa of the symbol, sigma(kappa) = 0, for one orientation.
struct EigenvalueSet {
  std::vector<double> real_family;                  // ascending, M = 1..M_max
  std::vector<std::complex<double>> complex_roots;  // Re>0, Im>0, ascending modulus
  double re_max = 0.0;                              // search box used for the scan
  double im_max = 0.0;
};

/// Closed-form real eigenvalue family 2*M*pi/spacing, each verified through
/// the symbol to 1e-10.
std::vector<double> real_family(const Orientation& o, int M_max);

/// Asymptotic seed for the smallest-modulus complex eigenvalue on the square
/// lattice, valid in the sector 0 < m2 < m1. The regime with the smaller of
/// m2/m1 and 1 - m2/m1 selects the formula.
/// Throws Error(NoComplexBranch) on axes and diagonals (m2 = 0 or m2 = m1).
std::complex<double> complex_seed(const Orientation& o);

/// The complex eigenvalue of smallest modulus in the open quadrant
/// Re>0, Im>0, or nullopt when none exists there (square axes and diagonals,
/// hexagonal axes). Found by a damped Newton iteration from the asymptotic
/// seed where available, with a winding-number grid scan of the box
/// [0, box_factor*kappa1]^2 as fallback; the absence result and the
/// minimal-modulus property are certified by the argument principle, not by
/// search failure.
std::optional<std::complex<double>> complex_smallest(const Orientation& o,
                                                     double box_factor = 3.0);

struct JointScanReport {
  std::vector<std::complex<double>> joint_roots;  // expected empty
  std::vector<std::complex<double>> symbol_roots; // complex sigma-roots found in the box
  int grid_n = 0;
  double re_max = 0.0;
  double im_max = 0.0;
};

/// Scans the box (0,re_max] x (0,im_max] for simultaneous complex zeros of
/// the symbol and its derivative (equivalently the O(1) and O(eps S_N)
/// eigenvalue conditions), polishing from every grid cell. Real double roots
/// are excluded; the returned joint list is expected to be empty.
JointScanReport joint_solution_scan(const Orientation& o, double re_max,
                                    double im_max, int grid_n);

/// Convenience bundle: real family plus all complex quadrant roots found in
/// the default search box.
EigenvalueSet eigenvalue_set(const Orientation& o, int M_max, int grid_n = 160);

/// Number of zeros of the symbol strictly inside the rectangle
/// [re_lo,re_hi] x [im_lo,im_hi], by the argument principle with adaptive
/// phase tracking along the boundary. The symbol must not vanish on the
/// boundary.
int winding_zero_count(const Orientation& o, double re_lo, double re_hi,
                       double im_lo, double im_hi);

}  // namespace latpin
