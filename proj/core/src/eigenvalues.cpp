#include "latpin/eigenvalues.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResidualTol = 1e-10;
using cd = std::complex<double>;

struct SymbolFn {
  Stencil st;
  Orientation o;
  cd operator()(cd kappa) const { return symbol(st, o, kappa); }
  cd deriv(cd kappa) const { return symbol_derivative(st, o, kappa); }
};

/// Damped Newton on the analytic symbol. Returns nullopt on stagnation or
/// derivative breakdown.
std::optional<cd> polish_root(const SymbolFn& f, cd kappa, int max_iter = 100,
                              double tol = kResidualTol) {
  cd x = kappa;
  double res = std::abs(f(x));
  for (int it = 0; it < max_iter; ++it) {
    if (res < tol) return x;
    const cd d = f.deriv(x);
    if (std::abs(d) < 1e-300) return std::nullopt;
    cd step = -f(x) / d;
    double damp = 1.0;
    for (int k = 0; k < 30; ++k) {
      const double trial = std::abs(f(x + damp * step));
      if (trial < res) {
        x += damp * step;
        res = trial;
        break;
      }
      damp *= 0.5;
      if (k == 29) return std::nullopt;
    }
  }
  return std::abs(f(x)) < tol ? std::optional<cd>(x) : std::nullopt;
}

/// Accumulated argument change of sigma along the straight segment [a,b].
/// Subdivides on large phase jumps and on strong magnitude swings: a zero
/// just off the segment turns the phase through nearly a full revolution
/// between samples while |sigma| dips, which a pure phase criterion cannot
/// see through the 2 pi ambiguity.
double arg_change_on_segment(const SymbolFn& f, cd a, cd b, int depth = 0) {
  const int n0 = 16;
  double total = 0.0;
  cd prev = f(a);
  for (int i = 1; i <= n0; ++i) {
    const cd z = a + (b - a) * (double(i) / n0);
    const cd cur = f(z);
    const double d = std::arg(cur / prev);
    const double ratio = std::abs(cur) / std::abs(prev);
    if ((std::abs(d) > 0.5 * kPi || ratio > 4.0 || ratio < 0.25) &&
        depth <= 40) {
      const cd za = a + (b - a) * (double(i - 1) / n0);
      total += arg_change_on_segment(f, za, z, depth + 1);
    } else {
      if (std::abs(d) > 0.5 * kPi) {
        fail(ErrorCode::SearchExhausted,
             "phase tracking failed: zero on or too close to the contour");
      }
      total += d;
    }
    prev = cur;
  }
  return total;
}

int winding_rectangle(const SymbolFn& f, double re_lo, double re_hi,
                      double im_lo, double im_hi) {
  const cd c1(re_lo, im_lo), c2(re_hi, im_lo), c3(re_hi, im_hi), c4(re_lo, im_hi);
  const double total = arg_change_on_segment(f, c1, c2) +
                       arg_change_on_segment(f, c2, c3) +
                       arg_change_on_segment(f, c3, c4) +
                       arg_change_on_segment(f, c4, c1);
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

/// Zero count in the open quarter disk of radius rho (origin indented; the
/// double root of sigma at kappa = 0 stays outside). Axis segments carry real
/// nonzero symbol values for rho below the first real eigenvalue.
int winding_quarter_disk(const SymbolFn& f, double rho, double rho0) {
  double total = 0.0;
  // real segment, arc, imaginary segment, closing arc around the origin
  total += arg_change_on_segment(f, cd(rho0, 0.0), cd(rho, 0.0));
  const int narc = 64;
  cd prev_pt(rho, 0.0);
  for (int i = 1; i <= narc; ++i) {
    const double th = 0.5 * kPi * i / narc;
    const cd pt = rho * cd(std::cos(th), std::sin(th));
    total += arg_change_on_segment(f, prev_pt, pt);
    prev_pt = pt;
  }
  total += arg_change_on_segment(f, cd(0.0, rho), cd(0.0, rho0));
  prev_pt = cd(0.0, rho0);
  for (int i = 1; i <= narc; ++i) {
    const double th = 0.5 * kPi * (1.0 - double(i) / narc);
    const cd pt = rho0 * cd(std::cos(th), std::sin(th));
    total += arg_change_on_segment(f, prev_pt, pt);
    prev_pt = pt;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

bool is_axis_or_diagonal(const Orientation& o) {
  if (o.kind != LatticeKind::square) return false;
  return o.m1 == 0 || o.m2 == 0 || std::abs(o.m1) == std::abs(o.m2);
}

/// Square-lattice symmetry: fold (m1,m2) into the sector 0 <= m2 <= m1.
Orientation fundamental_sector(const Orientation& o) {
  int a = std::abs(o.m1), b = std::abs(o.m2);
  if (b > a) std::swap(a, b);
  return make_orientation(a, b, o.kind);
}

void dedup_roots(std::vector<cd>& roots) {
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b)
                                      : a.real() < b.real();
  });
  std::vector<cd> out;
  for (const cd& r : roots) {
    bool dup = false;
    for (const cd& s : out) {
      if (std::abs(r - s) <= 1e-8 * std::max(1.0, std::abs(s))) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(r);
  }
  roots.swap(out);
}

/// Real eigenvalues are double roots of the symbol; Newton started near one
/// converges to a point within ~sqrt(tol) of it, which can leak past any
/// fixed imaginary-part floor. Genuine complex roots sit O(1) away from the
/// real family, so proximity to 2 M pi / spacing is the robust filter.
bool near_real_family(const Orientation& o, cd kappa) {
  const double kappa1 = o.kappa1();
  const double M = std::round(kappa.real() / kappa1);
  const cd family(M * kappa1, 0.0);
  return std::abs(kappa - family) < 1e-3 * kappa1;
}

/// All sigma-roots in the open quadrant box, by Newton polishing from every
/// cell of a grid_n x grid_n grid.
std::vector<cd> scan_quadrant_roots(const SymbolFn& f, double re_max,
                                    double im_max, int grid_n,
                                    double im_floor) {
  std::vector<cd> roots;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const cd seed((i + 0.5) * re_max / grid_n, (j + 0.5) * im_max / grid_n);
      const auto r = polish_root(f, seed, 40);
      if (!r) continue;
      if (r->real() <= 0.0 || r->real() > re_max * (1.0 + 1e-9)) continue;
      if (r->imag() < im_floor || r->imag() > im_max * (1.0 + 1e-9)) continue;
      if (near_real_family(f.o, *r)) continue;
      roots.push_back(*r);
    }
  }
  dedup_roots(roots);
  return roots;
}

}  // namespace

std::vector<double> real_family(const Orientation& o, int M_max) {
  if (M_max < 1) fail(ErrorCode::Config, "M_max must be >= 1");
  const SymbolFn f{stencil(o.kind), o};
  std::vector<double> family;
  family.reserve(M_max);
  for (int M = 1; M <= M_max; ++M) {
    const double kappa = 2.0 * M * kPi / o.spacing;
    if (std::abs(f(cd(kappa, 0.0))) > kResidualTol) {
      fail(ErrorCode::SearchExhausted,
           "closed-form real eigenvalue fails the symbol residual check");
    }
    family.push_back(kappa);
  }
  return family;
}

std::complex<double> complex_seed(const Orientation& o) {
  if (o.kind != LatticeKind::square) {
    fail(ErrorCode::Unsupported, "asymptotic seeds are square-lattice only");
  }
  const Orientation s = fundamental_sector(o);
  if (s.m2 == 0 || s.m2 == s.m1) {
    fail(ErrorCode::NoComplexBranch,
         "no complex eigenvalues on axes or diagonals");
  }
  const double t = double(s.m2) / s.m1;           // tan(psi) in [0,1]
  const double scale = std::sqrt(1.0 + t * t);
  if (t <= 1.0 - t) {
    return 2.0 * kPi * scale * cd(1.0, t);
  }
  return kPi * scale * (2.0 + cd(1.0, 1.0) * (1.0 - t));
}

std::optional<std::complex<double>> complex_smallest(const Orientation& o,
                                                     double box_factor) {
  const Orientation s =
      o.kind == LatticeKind::square ? fundamental_sector(o) : o;
  const SymbolFn f{stencil(s.kind), s};
  const double kappa1 = s.kappa1();
  const double box = box_factor * kappa1;

  std::vector<cd> candidates;
  if (s.kind == LatticeKind::square && !is_axis_or_diagonal(s)) {
    if (const auto r = polish_root(f, complex_seed(s))) {
      if (r->real() > 0.0 && r->imag() > 0.0) candidates.push_back(*r);
    }
  }
  if (candidates.empty()) {
    // Coarse scan; grid spacing well below 2*pi resolves every root of an
    // entire function whose zeros are separated on the kappa1 scale.
    const int grid_n = std::clamp(static_cast<int>(box / 0.5), 24, 400);
    candidates = scan_quadrant_roots(f, box, box, grid_n, 1e-9 * kappa1);
    if (candidates.empty()) {
      // Certify absence over the whole box rather than trusting the scan.
      if (winding_rectangle(f, 1e-7 * kappa1, box, 1e-7 * kappa1, box) == 0) {
        return std::nullopt;
      }
      fail(ErrorCode::SearchExhausted,
           "winding count is nonzero but no root was polished");
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](cd a, cd b) { return std::abs(a) < std::abs(b); });
  const cd best = candidates.front();

  // Certify minimality: no zero in the quarter disk strictly inside |best|.
  const double rho = std::abs(best) * (1.0 - 1e-3);
  const double rho0 = std::min(1e-3 * kappa1, 0.05 * std::abs(best));
  if (winding_quarter_disk(f, rho, rho0) != 0) {
    fail(ErrorCode::SearchExhausted,
         "a smaller-modulus root exists but was not located");
  }
  return best;
}

JointScanReport joint_solution_scan(const Orientation& o, double re_max,
                                    double im_max, int grid_n) {
  if (grid_n < 100) fail(ErrorCode::Config, "grid_n must be >= 100 per axis");
  const SymbolFn f{stencil(o.kind), o};
  const double kappa1 = o.kappa1();
  JointScanReport report;
  report.grid_n = grid_n;
  report.re_max = re_max;
  report.im_max = im_max;

  const double im_floor = 1e-9 * kappa1;
  report.symbol_roots = scan_quadrant_roots(f, re_max, im_max, grid_n, im_floor);

  // A joint root of (sigma, sigma') with Im != 0 is a complex double root of
  // sigma: check the derivative at every located complex root, then
  // additionally polish from cells where both residuals are already small.
  const double dscale = kappa1;  // |sigma'| ~ O(kappa) scale in the box
  for (const cd& r : report.symbol_roots) {
    if (std::abs(f.deriv(r)) < 1e-8 * dscale) report.joint_roots.push_back(r);
  }
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const cd z((i + 0.5) * re_max / grid_n, (j + 0.5) * im_max / grid_n);
      if (std::abs(f(z)) > 0.5 || std::abs(f.deriv(z)) > 0.5 * dscale) continue;
      const auto r = polish_root(f, z, 40);
      if (!r || r->imag() < im_floor) continue;
      if (near_real_family(o, *r)) continue;  // real double roots do not count
      if (std::abs(f.deriv(*r)) < 1e-8 * dscale) report.joint_roots.push_back(*r);
    }
  }
  dedup_roots(report.joint_roots);
  return report;
}

EigenvalueSet eigenvalue_set(const Orientation& o, int M_max, int grid_n) {
  EigenvalueSet set;
  set.real_family = real_family(o, M_max);
  const double box = 3.0 * o.kappa1();
  set.re_max = box;
  set.im_max = box;
  const SymbolFn f{stencil(o.kind), o};
  set.complex_roots =
      scan_quadrant_roots(f, box, box, grid_n, 1e-9 * o.kappa1());
  return set;
}

int winding_zero_count(const Orientation& o, double re_lo, double re_hi,
                       double im_lo, double im_hi) {
  const SymbolFn f{stencil(o.kind), o};
  return winding_rectangle(f, re_lo, re_hi, im_lo, im_hi);
}

}  // namespace latpin
