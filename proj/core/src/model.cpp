#include "latpin/model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

constexpr double kPi = std::numbers::pi;

// 20-point Gauss-Legendre nodes/weights on [-1,1]; composite over 8 panels
// gives residuals far below 1e-10 for smooth integrands.
constexpr std::array<double, 10> kGLx = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr std::array<double, 10> kGLw = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

double gauss_legendre(const std::function<double(double)>& g, double a,
                      double b) {
  const int panels = 8;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    double acc = 0.0;
    for (int i = 0; i < 10; ++i) {
      acc += kGLw[i] * (g(mid + half * kGLx[i]) + g(mid - half * kGLx[i]));
    }
    total += acc * half;
  }
  return total;
}

void validate_derivatives(const NonlinearitySpec& spec) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> du(-2.0, 2.0), dr(-1.0, 1.0);
  const double h = 1e-5;
  for (int i = 0; i < 64; ++i) {
    const double u = du(rng), r = dr(rng);
    const double fu_fd = (spec.f(u + h, r) - spec.f(u - h, r)) / (2 * h);
    const double fr_fd = (spec.F(u, r + h, spec.s) - spec.F(u, r - h, spec.s)) / (2 * h);
    const double su = std::max(1.0, std::abs(fu_fd));
    const double sr = std::max(1.0, std::abs(fr_fd));
    if (std::abs(spec.fu(u, r) - fu_fd) > 1e-6 * su ||
        std::abs(spec.fr(u, r) - fr_fd) > 1e-6 * sr) {
      fail(ErrorCode::Config,
           "custom nonlinearity derivatives disagree with finite differences");
    }
  }
}

}  // namespace

const char* to_string(ModelId id) noexcept {
  switch (id) {
    case ModelId::cubic_const: return "cubic_const";
    case ModelId::cubic_quintic: return "cubic_quintic";
    case ModelId::custom: return "custom";
  }
  return "unknown";
}

NonlinearitySpec cubic_const_model(double s) {
  if (!(s > 0)) fail(ErrorCode::Config, "bistability requires s > 0");
  NonlinearitySpec spec;
  spec.id = ModelId::cubic_const;
  spec.s = s;
  spec.F = [](double u, double r, double s_) { return -r - s_ * u + u * u * u; };
  spec.F_u = [](double u, double, double s_) { return -s_ + 3.0 * u * u; };
  spec.F_r = [](double, double, double) { return -1.0; };
  return spec;
}

NonlinearitySpec cubic_quintic_model(double s) {
  if (!(s > 0)) fail(ErrorCode::Config, "bistability requires s > 0");
  NonlinearitySpec spec;
  spec.id = ModelId::cubic_quintic;
  spec.s = s;
  spec.F = [](double u, double r, double s_) {
    const double u2 = u * u;
    return -r * u - s_ * u2 * u + u2 * u2 * u;
  };
  spec.F_u = [](double u, double r, double s_) {
    const double u2 = u * u;
    return -r - 3.0 * s_ * u2 + 5.0 * u2 * u2;
  };
  spec.F_r = [](double u, double, double) { return -u; };
  return spec;
}

NonlinearitySpec custom_model(std::function<double(double, double, double)> F,
                              std::function<double(double, double, double)> F_u,
                              std::function<double(double, double, double)> F_r,
                              double s) {
  NonlinearitySpec spec;
  spec.id = ModelId::custom;
  spec.s = s;
  spec.F = std::move(F);
  spec.F_u = std::move(F_u);
  spec.F_r = std::move(F_r);
  validate_derivatives(spec);
  return spec;
}

double integrate_F(const NonlinearitySpec& spec, double a, double b, double r) {
  return gauss_legendre([&](double v) { return spec.f(v, r); }, a, b);
}

double integrate_Fr(const NonlinearitySpec& spec, double a, double b, double r) {
  return gauss_legendre([&](double v) { return spec.fr(v, r); }, a, b);
}

MaxwellData maxwell(const NonlinearitySpec& spec) {
  const double s = spec.s;
  switch (spec.id) {
    case ModelId::cubic_const:
      return {0.0, -std::sqrt(s), std::sqrt(s)};
    case ModelId::cubic_quintic:
      return {-3.0 * s * s / 16.0, 0.0, 0.5 * std::sqrt(3.0 * s)};
    case ModelId::custom:
      fail(ErrorCode::Unsupported,
           "custom specs need explicit guesses; use maxwell_numeric");
  }
  fail(ErrorCode::Unsupported, "unreachable");
}

namespace {

/// Solves a 3x3 linear system in place. Returns false when effectively
/// singular (pivot below scale * 1e-13).
bool solve3(double A[3][3], double b[3], double x[3]) {
  int piv[3] = {0, 1, 2};
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(A[i][j]));
  if (scale == 0.0) return false;
  for (int c = 0; c < 3; ++c) {
    int best = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(A[piv[r]][c]) > std::abs(A[piv[best]][c])) best = r;
    }
    std::swap(piv[c], piv[best]);
    const double p = A[piv[c]][c];
    if (std::abs(p) < 1e-13 * scale) return false;
    for (int r = c + 1; r < 3; ++r) {
      const double f = A[piv[r]][c] / p;
      for (int j = c; j < 3; ++j) A[piv[r]][j] -= f * A[piv[c]][j];
      b[piv[r]] -= f * b[piv[c]];
    }
  }
  for (int c = 2; c >= 0; --c) {
    double acc = b[piv[c]];
    for (int j = c + 1; j < 3; ++j) acc -= A[piv[c]][j] * x[j];
    x[c] = acc / A[piv[c]][c];
  }
  return true;
}

}  // namespace

MaxwellData maxwell_numeric(const NonlinearitySpec& spec, double u_minus_guess,
                            double u_plus_guess, double r_guess) {
  double um = u_minus_guess, up = u_plus_guess, r = r_guess;
  const double tol = 1e-11;
  for (int it = 0; it < 80; ++it) {
    const double f1 = spec.f(um, r);
    const double f2 = spec.f(up, r);
    const double f3 = integrate_F(spec, um, up, r);
    if (std::abs(f1) < tol && std::abs(f2) < tol && std::abs(f3) < tol) {
      if (um >= up) fail(ErrorCode::NoMaxwellPoint, "u- >= u+ at the root");
      if (spec.fu(um, r) <= 0 || spec.fu(up, r) <= 0) {
        fail(ErrorCode::NoMaxwellPoint, "root states are not both stable");
      }
      // The root must be isolated: a singular Jacobian here means the
      // integral condition holds identically (no Maxwell point, as for
      // F = r sin u between 0 and 2 pi).
      double A[3][3] = {
          {spec.fu(um, r), 0.0, spec.fr(um, r)},
          {0.0, spec.fu(up, r), spec.fr(up, r)},
          {-spec.f(um, r), spec.f(up, r), integrate_Fr(spec, um, up, r)}};
      double bb[3] = {0.0, 0.0, 1.0};
      double xx[3];
      if (!solve3(A, bb, xx)) {
        fail(ErrorCode::NoMaxwellPoint, "root is not isolated in r");
      }
      return {r, um, up};
    }
    // Rows: d{F(u-), F(u+), int F}/d{u-, u+, r}.
    double A[3][3] = {
        {spec.fu(um, r), 0.0, spec.fr(um, r)},
        {0.0, spec.fu(up, r), spec.fr(up, r)},
        {-spec.f(um, r), spec.f(up, r), integrate_Fr(spec, um, up, r)}};
    double b[3] = {-f1, -f2, -f3};
    double dx[3];
    if (!solve3(A, b, dx)) {
      fail(ErrorCode::NoMaxwellPoint,
           "degenerate Maxwell system, no isolated root (e.g. the integral "
           "condition holds identically in r)");
    }
    // Step limiting keeps the bracket u- < u+ from collapsing early on.
    double lim = 1.0;
    const double span = std::max(1e-3, up - um);
    for (double d : {dx[0], dx[1]}) {
      if (std::abs(d) > 0.5 * span) lim = std::min(lim, 0.5 * span / std::abs(d));
    }
    um += lim * dx[0];
    up += lim * dx[1];
    r += lim * dx[2];
  }
  fail(ErrorCode::NoConvergence, "Maxwell Newton failed to converge");
}

double front_profile(const NonlinearitySpec& spec, double Z) {
  const double s = spec.s;
  switch (spec.id) {
    case ModelId::cubic_const:
      return std::sqrt(s) * std::tanh(std::sqrt(0.5 * s) * Z);
    case ModelId::cubic_quintic:
      return 0.5 * std::sqrt(3.0 * s /
                             (1.0 + std::exp(-0.5 * std::sqrt(3.0) * s * Z)));
    case ModelId::custom:
      fail(ErrorCode::Unsupported,
           "no closed-form front for custom specs; use the continuation module");
  }
  fail(ErrorCode::Unsupported, "unreachable");
}

FrontAsymptotics front_constants(const NonlinearitySpec& spec) {
  const double s = spec.s;
  FrontAsymptotics fa;
  switch (spec.id) {
    case ModelId::cubic_const:
      fa.alpha_plus = std::sqrt(2.0 * s);
      fa.alpha_minus = std::sqrt(2.0 * s);
      fa.D_plus = 2.0 * std::sqrt(s);
      fa.zeta = {0.0, kPi / std::sqrt(2.0 * s)};
      fa.gamma = 1.0;
      fa.int_Fr = -2.0 * std::sqrt(s);
      return fa;
    case ModelId::cubic_quintic:
      fa.alpha_plus = 0.5 * std::sqrt(3.0) * s;
      fa.alpha_minus = 0.25 * std::sqrt(3.0) * s;  // sqrt(F_u(0; r_M)) = sqrt(3 s^2/16)
      fa.D_plus = 0.25 * std::sqrt(3.0 * s);
      fa.zeta = {0.0, 2.0 * kPi / (std::sqrt(3.0) * s)};
      fa.gamma = 0.5;
      fa.int_Fr = -3.0 * s / 8.0;
      return fa;
    case ModelId::custom:
      fail(ErrorCode::Unsupported,
           "analytic constants exist only for the built-in models");
  }
  fail(ErrorCode::Unsupported, "unreachable");
}

FrontAsymptotics front_constants_numeric(const NonlinearitySpec& spec,
                                         std::span<const double> Z,
                                         std::span<const double> u,
                                         bool use_zeta_shortcut) {
  if (Z.size() != u.size() || Z.size() < 8) {
    fail(ErrorCode::FitFailed, "need matching Z/u samples");
  }
  MaxwellData mx = spec.id == ModelId::custom
                       ? maxwell_numeric(spec, u.front(), u.back(), 0.0)
                       : maxwell(spec);
  FrontAsymptotics fa;
  fa.alpha_plus = std::sqrt(spec.fu(mx.u_plus, mx.r_M));
  fa.alpha_minus = std::sqrt(spec.fu(mx.u_minus, mx.r_M));
  fa.int_Fr = integrate_Fr(spec, mx.u_minus, mx.u_plus, mx.r_M);

  // ln(u+ - u) over the trailing quarter: an unconstrained regression
  // supplies the R^2 linearity gate; D+ is then read off at the analytic
  // alpha+, i.e. ln D+ = mean(ln(u+ - u) + alpha+ Z).
  const std::size_t n = Z.size();
  const std::size_t lo = n - n / 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, s_int = 0;
  std::size_t m = 0;
  for (std::size_t i = lo; i < n; ++i) {
    const double gap = mx.u_plus - u[i];
    if (gap <= 0) continue;
    const double x = Z[i], y = std::log(gap);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    s_int += y + fa.alpha_plus * x;
    ++m;
  }
  if (m < 4) fail(ErrorCode::FitFailed, "tail has no usable samples");
  const double denom = m * sxx - sx * sx;
  const double r_num = m * sxy - sx * sy;
  const double r2 = r_num * r_num / (denom * (m * syy - sy * sy));
  if (!(r2 >= 0.999)) fail(ErrorCode::FitFailed, "tail regression R^2 < 0.999");
  fa.D_plus = std::exp(s_int / m);
  if (use_zeta_shortcut) {
    fa.zeta = {0.0, kPi / fa.alpha_plus};  // externally sourced default
  }
  return fa;
}

double linear_growth_rate(double k, const Orientation& o, double eps,
                          double Fu_at_uc) {
  const Stencil st = stencil(o.kind);
  const double s = symbol(st, o, std::complex<double>(k, 0.0)).real();
  return s - eps * eps * Fu_at_uc;
}

double chi(const FrontAsymptotics& fa, const Orientation& o, double eps,
           double lambda_arg) {
  double c = -0.5 * kPi + fa.gamma * kPi +
             o.kappa1() * fa.zeta.real() / eps + lambda_arg;
  c = std::fmod(c, 2.0 * kPi);
  if (c < 0) c += 2.0 * kPi;
  return c;
}

}  // namespace latpin
