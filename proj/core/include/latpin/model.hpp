#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "latpin/lattice.hpp"

namespace latpin {

enum class ModelId { cubic_const, cubic_quintic, custom };

const char* to_string(ModelId id) noexcept;

/// A bistable nonlinearity F(u; r) with secondary parameter s > 0, in the
/// sign convention u_t = Delta u - eps^2 F(u; r). The same functional form
/// holds in the unscaled (hatted) variables with s playing the role of the
/// small parameter.
struct NonlinearitySpec {
  ModelId id = ModelId::cubic_const;
  double s = 1.0;
  std::function<double(double u, double r, double s)> F;
  std::function<double(double u, double r, double s)> F_u;
  std::function<double(double u, double r, double s)> F_r;

  double f(double u, double r) const { return F(u, r, s); }
  double fu(double u, double r) const { return F_u(u, r, s); }
  double fr(double u, double r) const { return F_r(u, r, s); }
};

/// F = -r - s u + u^3 (S-shaped bistability from a pair of saddle-nodes).
NonlinearitySpec cubic_const_model(double s);
/// F = -r u - s u^3 + u^5 (subcritical pitchfork plus saddle-node).
NonlinearitySpec cubic_quintic_model(double s);
/// User-supplied nonlinearity; F_u and F_r are validated against centred
/// finite differences of F on random samples.
NonlinearitySpec custom_model(std::function<double(double, double, double)> F,
                              std::function<double(double, double, double)> F_u,
                              std::function<double(double, double, double)> F_r,
                              double s);

struct MaxwellData {
  double r_M = 0.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
};

/// Maxwell point: F(u+-; r_M) = 0, F_u(u+-; r_M) > 0, integral of F from u-
/// to u+ vanishing. Closed form for the built-ins; a 3-unknown Newton solve
/// otherwise (initial guesses required through maxwell_numeric).
MaxwellData maxwell(const NonlinearitySpec& spec);
MaxwellData maxwell_numeric(const NonlinearitySpec& spec, double u_minus_guess,
                            double u_plus_guess, double r_guess);

/// Leading-order front profile u0(Z) at the Maxwell point (built-ins only).
double front_profile(const NonlinearitySpec& spec, double Z);

/// Far-field and singularity data of the leading-order front.
struct FrontAsymptotics {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double D_plus = 0.0;
  std::complex<double> zeta;  // dominant upper-half-plane singularity of u0
  double gamma = 0.0;         // singularity strength
  double int_Fr = 0.0;        // integral of F_{r,M} over [u-, u+]
  double chi = std::numeric_limits<double>::quiet_NaN();  // set via chi()
};

/// Closed-form constants for the built-in models.
FrontAsymptotics front_constants(const NonlinearitySpec& spec);

/// Numeric mode: alpha+ from sqrt(F_u(u+)), D+ by least-squares fit of
/// ln(u+ - u) against -alpha+ Z over the trailing quarter of the samples.
/// Throws Error(FitFailed) when the tail regression has R^2 < 0.999.
/// The singularity fields are filled with Im(zeta) = pi/alpha+ only when
/// use_zeta_shortcut is set (externally sourced default), gamma is left 0.
FrontAsymptotics front_constants_numeric(const NonlinearitySpec& spec,
                                         std::span<const double> Z,
                                         std::span<const double> u,
                                         bool use_zeta_shortcut = false);

/// Growth rate of e^{sigma t + i k z} perturbations of a constant state:
/// sigma = sigma_symbol(k) - eps^2 F_u(u_c; r). For the square stencil this
/// is -2[2 - cos(k cos psi) - cos(k sin psi)] - eps^2 F_u.
double linear_growth_rate(double k, const Orientation& o, double eps,
                          double Fu_at_uc);

/// Phase constant chi = -pi/2 + gamma pi + kappa1 Re(zeta)/eps + Arg(Lambda),
/// reduced to [0, 2 pi).
double chi(const FrontAsymptotics& fa, const Orientation& o, double eps,
           double lambda_arg);

/// Quadrature of F(.; r) over [a, b] at fixed s (Gauss-Legendre, used for the
/// Maxwell residual checks).
double integrate_F(const NonlinearitySpec& spec, double a, double b, double r);
double integrate_Fr(const NonlinearitySpec& spec, double a, double b, double r);

}  // namespace latpin
