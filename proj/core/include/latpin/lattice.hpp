#pragma once

#include <complex>
#include <vector>

namespace latpin {

enum class LatticeKind { square, hex };

const char* to_string(LatticeKind kind) noexcept;

/// Front orientation as a reduced integer direction (m1,m2) on a lattice.
/// Rational directions are kept exact; the derived direction cosines and the
/// effective one-dimensional lattice spacing follow from (m1,m2) alone.
struct Orientation {
  int m1 = 1;
  int m2 = 0;
  LatticeKind kind = LatticeKind::square;
  double cos_psi = 1.0;
  double sin_psi = 0.0;
  double spacing = 1.0;  // effective lattice spacing, dimensionless lattice units

  /// Smallest positive real eigenvalue of the lattice symbol, 2*pi/spacing.
  double kappa1() const noexcept;
};

/// Reduces (m1,m2) by gcd and fills in the derived fields.
/// Throws Error(ZeroDirection) for (0,0).
Orientation make_orientation(int m1, int m2, LatticeKind kind);

struct StencilOffset {
  double dx = 0.0;
  double dy = 0.0;
  double weight = 0.0;
};

/// A difference operator as weighted planar offsets plus a centre weight.
/// Offsets come in +- pairs with equal weights and the weights sum (with the
/// centre) to zero, so the operator annihilates constants and its symbol is
/// even.
struct Stencil {
  LatticeKind kind = LatticeKind::square;
  std::vector<StencilOffset> offsets;
  double center_weight = 0.0;

  double weight_sum() const noexcept;  // includes centre; zero by construction
};

/// Nearest-neighbour stencils: square (4 unit offsets, weight 1, centre -4)
/// and hexagonal (6 offsets, weight 2/3, centre -4).
Stencil stencil(LatticeKind kind);

struct Projection {
  double delta = 0.0;     // offset projected onto the rotated coordinate
  int index_offset = 0;   // delta / spacing, exact integer for rational psi
  double weight = 0.0;
};

/// Projects every stencil offset onto the front direction. Each projection
/// must be an integer multiple of the effective spacing to 1e-12; anything
/// larger is a commensurability violation, not round-off.
std::vector<Projection> projections(const Stencil& st, const Orientation& o);

/// The lattice symbol sigma(kappa) = sum_i w_i exp(i kappa delta_i) + centre.
/// Evaluated through cosines of the paired offsets, so sigma is exactly even
/// and conjugate-symmetric. For the square stencil this equals
/// 2[cos(kappa cos psi) + cos(kappa sin psi) - 2].
std::complex<double> symbol(const Stencil& st, const Orientation& o,
                            std::complex<double> kappa);

/// d(sigma)/d(kappa). Its zero set is the O(eps S_N) condition; real
/// eigenvalues are always double roots of the symbol.
std::complex<double> symbol_derivative(const Stencil& st, const Orientation& o,
                                       std::complex<double> kappa);

}  // namespace latpin
