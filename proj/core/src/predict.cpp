#include "latpin/predict.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

constexpr double kPi = std::numbers::pi;

/// Amplitude of the switched-on cosine term in delta_r:
/// A = pi |Lambda| e^{-kappa1 Im(zeta)/eps} / eps^{2 gamma + 2}.
double cosine_amplitude(const FrontAsymptotics& fa, const Orientation& o,
                        const PredictParams& p) {
  const double expo = -o.kappa1() * fa.zeta.imag() / p.eps;
  return kPi * p.lambda_abs * std::exp(expo) /
         std::pow(p.eps, 2.0 * fa.gamma + 2.0);
}

double skew_term(const FrontAsymptotics& fa, const PredictParams& p, double L) {
  const double a = fa.alpha_plus;
  return a * a * fa.D_plus * fa.D_plus * std::exp(-a * L / p.eps);
}

}  // namespace

double pinning_width(const FrontAsymptotics& fa, const Orientation& o,
                     double eps, double lambda_abs) {
  const double expo = -o.kappa1() * fa.zeta.imag() / eps;
  return 2.0 * kPi * lambda_abs * std::exp(expo) /
         (std::pow(eps, 2.0 * fa.gamma + 2.0) * std::abs(fa.int_Fr));
}

double pinning_width_unscaled(ModelId id, const Orientation& o, double s_hat,
                              double lambda_abs) {
  if (o.kind != LatticeKind::square) {
    fail(ErrorCode::Unsupported,
         "the literal unscaled formulas are square-lattice; use the scaled "
         "route with the hexagonal kappa1");
  }
  const double n2 = double(o.m1) * o.m1 + double(o.m2) * o.m2;
  switch (id) {
    case ModelId::cubic_const:
      return kPi * lambda_abs * std::exp(-kPi * kPi * std::sqrt(2.0 * n2 / s_hat)) /
             std::sqrt(s_hat);
    case ModelId::cubic_quintic:
      return (16.0 * kPi * lambda_abs / (3.0 * s_hat)) *
             std::exp(-4.0 * kPi * kPi * std::sqrt(3.0 * n2) / (3.0 * s_hat));
    case ModelId::custom:
      break;
  }
  fail(ErrorCode::Unsupported, "no unscaled wrapper for custom models");
}

double eps_for_s_hat(ModelId id, double s_hat) {
  switch (id) {
    case ModelId::cubic_const: return std::sqrt(s_hat);  // s_hat = eps^2 s, s = 1
    case ModelId::cubic_quintic: return s_hat;           // s_hat = eps s, s = 1
    case ModelId::custom: break;
  }
  fail(ErrorCode::Unsupported, "no rescaling for custom models");
}

double r_scale_power(ModelId id) {
  switch (id) {
    case ModelId::cubic_const: return 3.0;  // r_hat = eps^3 r
    case ModelId::cubic_quintic: return 2.0;
    case ModelId::custom: break;
  }
  fail(ErrorCode::Unsupported, "no rescaling for custom models");
}

std::pair<double, double> pinning_origins(const FrontAsymptotics& fa,
                                          const Orientation& o,
                                          const PredictParams& p,
                                          double delta_r) {
  const double width = pinning_width(fa, o, p.eps, p.lambda_abs);
  if (std::abs(delta_r) > width) {
    fail(ErrorCode::NoPinnedFront,
         "delta_r outside the pinning region (|delta_r| = " +
             std::to_string(std::abs(delta_r)) + " > width = " +
             std::to_string(width) + ")");
  }
  const double kappa1 = o.kappa1();
  const double c = chi(fa, o, p.eps, p.lambda_arg);
  const double target = -delta_r / width;  // cos(kappa1 z0 + chi) = target
  const double theta = std::acos(std::clamp(target, -1.0, 1.0));
  const double h = o.spacing;
  auto reduce = [&](double z0) {
    z0 = std::fmod(z0, h);
    if (z0 < 0) z0 += h;
    return z0;
  };
  double z_a = reduce((theta - c) / kappa1);
  double z_b = reduce((2.0 * kPi - theta - c) / kappa1);
  if (z_b < z_a) std::swap(z_a, z_b);
  return {z_a, z_b};  // coincide (double root) at delta_r = +-width
}

std::vector<std::pair<double, double>> snake_branch(
    const FrontAsymptotics& fa, const Orientation& o, const PredictParams& p,
    Parity parity, const std::vector<double>& L_grid) {
  const double A = cosine_amplitude(fa, o, p);
  const double c = chi(fa, o, p.eps, p.lambda_arg);
  const double kappa1 = o.kappa1();
  const double kpar = parity == Parity::even ? 0.0 : kPi;
  std::vector<std::pair<double, double>> out;
  out.reserve(L_grid.size());
  for (double L : L_grid) {
    if (!(L > 0)) fail(ErrorCode::Config, "L grid must be positive");
    const double phase = 0.5 * kappa1 * L / (p.eps * p.eps) + kpar - c;
    const double dr = -(2.0 / fa.int_Fr) *
                      (A * std::cos(phase) + skew_term(fa, p, L));
    out.emplace_back(L, dr);
  }
  return out;
}

std::vector<Rung> ladder_rungs(const FrontAsymptotics& fa, const Orientation& o,
                               const PredictParams& p, double L_min,
                               double L_max, int samples_per_rung) {
  if (!(L_max > L_min) || !(L_min > 0)) {
    fail(ErrorCode::Config, "need 0 < L_min < L_max");
  }
  const double A = cosine_amplitude(fa, o, p);
  const double c = chi(fa, o, p.eps, p.lambda_arg);
  const double kappa1 = o.kappa1();
  const double eps2 = p.eps * p.eps;
  // L_k = (chi/pi + k) eps^2 spacing, i.e. kappa1 L_k / (2 eps^2) = chi + k pi.
  const double step = eps2 * o.spacing;
  const int k_lo = static_cast<int>(std::ceil(L_min / step - c / kPi));
  const int k_hi = static_cast<int>(std::floor(L_max / step - c / kPi));
  std::vector<Rung> rungs;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double L = (c / kPi + k) * step;
    if (!(L > 0)) continue;
    Rung rung;
    rung.k = k;
    rung.L = L;
    rung.samples.reserve(samples_per_rung);
    const double B = skew_term(fa, p, L);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // cos(kappa1 z0 + k pi)
    // Half-open sampling of [0, spacing); an even count places z0 = spacing/2
    // (the far endpoint, on the other snake) exactly on the grid.
    const int n_s = samples_per_rung + (samples_per_rung % 2);
    for (int i = 0; i < n_s; ++i) {
      const double z0 = o.spacing * i / n_s;
      const double dr =
          -(2.0 / fa.int_Fr) * (A * sign * std::cos(kappa1 * z0) + B);
      rung.samples.emplace_back(z0, dr);
    }
    rungs.push_back(std::move(rung));
  }
  if (rungs.empty()) {
    fail(ErrorCode::EmptyWindow,
         "no admissible rung index k in the requested L window");
  }
  return rungs;
}

SnakingPrediction predict_diagram(const FrontAsymptotics& fa,
                                  const Orientation& o, const PredictParams& p,
                                  double L_min, double L_max, int L_points,
                                  int samples_per_rung) {
  SnakingPrediction pred;
  pred.width = pinning_width(fa, o, p.eps, p.lambda_abs);
  std::vector<double> grid(L_points);
  for (int i = 0; i < L_points; ++i) {
    grid[i] = L_min + (L_max - L_min) * i / (L_points - 1.0);
  }
  pred.snake_site = snake_branch(fa, o, p, Parity::even, grid);
  pred.snake_bond = snake_branch(fa, o, p, Parity::odd, grid);
  pred.rungs = ladder_rungs(fa, o, p, L_min, L_max, samples_per_rung);
  return pred;
}

}  // namespace latpin
