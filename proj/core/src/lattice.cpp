#include "latpin/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

#include "latpin/errors.hpp"

namespace latpin {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kCommensurateTol = 1e-12;
}  // namespace

const char* to_string(LatticeKind kind) noexcept {
  return kind == LatticeKind::square ? "square" : "hex";
}

double Orientation::kappa1() const noexcept { return 2.0 * kPi / spacing; }

Orientation make_orientation(int m1, int m2, LatticeKind kind) {
  if (m1 == 0 && m2 == 0) {
    fail(ErrorCode::ZeroDirection, "orientation (0,0) has no direction");
  }
  const int g = std::gcd(std::abs(m1), std::abs(m2));
  m1 /= g;
  m2 /= g;

  Orientation o;
  o.m1 = m1;
  o.m2 = m2;
  o.kind = kind;
  if (kind == LatticeKind::square) {
    const double q = std::sqrt(double(m1) * m1 + double(m2) * m2);
    o.cos_psi = m1 / q;
    o.sin_psi = m2 / q;
    o.spacing = 1.0 / q;
  } else {
    const double q = std::sqrt(double(m1) * m1 + double(m1) * m2 + double(m2) * m2);
    o.cos_psi = 0.5 * std::sqrt(3.0) * m1 / q;
    o.sin_psi = 0.5 * (m1 + 2.0 * m2) / q;
    o.spacing = 0.5 * std::sqrt(3.0) / q;
  }
  return o;
}

double Stencil::weight_sum() const noexcept {
  double s = center_weight;
  for (const auto& off : offsets) s += off.weight;
  return s;
}

Stencil stencil(LatticeKind kind) {
  Stencil st;
  st.kind = kind;
  if (kind == LatticeKind::square) {
    st.offsets = {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, 1.0}, {0, -1, 1.0}};
    st.center_weight = -4.0;
  } else {
    const double h = 0.5 * std::sqrt(3.0);
    const double w = 2.0 / 3.0;
    st.offsets = {{1, 0, w},     {-1, 0, w},   {0.5, h, w},
                  {-0.5, -h, w}, {0.5, -h, w}, {-0.5, h, w}};
    st.center_weight = -4.0;
  }
  return st;
}

std::vector<Projection> projections(const Stencil& st, const Orientation& o) {
  std::vector<Projection> result;
  result.reserve(st.offsets.size());
  for (const auto& off : st.offsets) {
    Projection p;
    p.delta = off.dx * o.cos_psi + off.dy * o.sin_psi;
    p.weight = off.weight;
    p.index_offset = static_cast<int>(std::lround(p.delta / o.spacing));
    if (std::abs(p.delta - p.index_offset * o.spacing) > kCommensurateTol) {
      fail(ErrorCode::NonCommensurate,
           "offset (" + std::to_string(off.dx) + "," + std::to_string(off.dy) +
               ") does not project onto the effective lattice of (" +
               std::to_string(o.m1) + "," + std::to_string(o.m2) + ") " +
               to_string(o.kind));
    }
    result.push_back(p);
  }
  return result;
}

std::complex<double> symbol(const Stencil& st, const Orientation& o,
                            std::complex<double> kappa) {
  // sin parts cancel by the +- pair invariant, so summing cosines over all
  // offsets gives an exactly even, conjugate-symmetric symbol.
  std::complex<double> acc(st.center_weight, 0.0);
  for (const auto& off : st.offsets) {
    const double delta = off.dx * o.cos_psi + off.dy * o.sin_psi;
    acc += off.weight * std::cos(kappa * delta);
  }
  return acc;
}

std::complex<double> symbol_derivative(const Stencil& st, const Orientation& o,
                                       std::complex<double> kappa) {
  std::complex<double> acc(0.0, 0.0);
  for (const auto& off : st.offsets) {
    const double delta = off.dx * o.cos_psi + off.dy * o.sin_psi;
    acc -= off.weight * delta * std::sin(kappa * delta);
  }
  return acc;
}

}  // namespace latpin
