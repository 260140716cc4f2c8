#pragma once

#include <utility>
#include <vector>

#include "latpin/lattice.hpp"
#include "latpin/model.hpp"

namespace latpin {

/// Inputs of the analytic prediction layer, in the scaled variables.
struct PredictParams {
  double eps = 0.0;         // effective small parameter
  double lambda_abs = 0.0;  // |Lambda_{1,psi}|
  double lambda_arg = 0.0;  // Arg(Lambda_{1,psi}); pi for both built-ins
};

/// Half-width of the pinning region in the scaled bifurcation parameter:
/// |delta r| <= 2 pi |Lambda| e^{-kappa1 Im(zeta)/eps} / (eps^{2 gamma + 2} |int_Fr|),
/// with kappa1 the smallest real eigenvalue of the chosen lattice.
double pinning_width(const FrontAsymptotics& fa, const Orientation& o,
                     double eps, double lambda_abs);

/// The unscaled formulas, written out literally for the two built-in models
/// on the square lattice (the scaled route must agree after substituting the
/// model's rescaling):
///   cubic_const:    pi |Lambda| e^{-pi^2 sqrt(2 (m1^2+m2^2)/s_hat)} / sqrt(s_hat)
///   cubic_quintic:  (16 pi |Lambda| / 3 s_hat) e^{-4 pi^2 sqrt(3 (m1^2+m2^2))/(3 s_hat)}
double pinning_width_unscaled(ModelId id, const Orientation& o, double s_hat,
                              double lambda_abs);

/// Model rescalings (u,r,s) -> (u_hat,r_hat,s_hat): effective eps at s = 1,
/// and the power of eps converting scaled delta-r to unscaled delta-r-hat.
double eps_for_s_hat(ModelId id, double s_hat);
double r_scale_power(ModelId id);

/// The two pinned-front origins solving
/// cos(kappa1 z0 + chi) = -delta_r / width, reduced to [0, spacing).
/// Throws Error(NoPinnedFront) for |delta_r| > width.
std::pair<double, double> pinning_origins(const FrontAsymptotics& fa,
                                          const Orientation& o,
                                          const PredictParams& p,
                                          double delta_r);

enum class Parity { even, odd };  // even: site-centred, odd: bond-centred

/// One snaking curve delta_r(L): the pinning cosine plus the front-matching
/// skew term alpha+^2 D+^2 e^{-alpha+ L / eps}, which leans the curves to the
/// right of the pinning region at small L.
std::vector<std::pair<double, double>> snake_branch(
    const FrontAsymptotics& fa, const Orientation& o, const PredictParams& p,
    Parity parity, const std::vector<double>& L_grid);

struct Rung {
  int k = 0;
  double L = 0.0;
  // (z0, delta_r) with z0 in [0, spacing) measured from the site-snake
  // meeting point; z0 = 0 and z0 = spacing/2 land on the two snakes.
  std::vector<std::pair<double, double>> samples;
};

/// Ladder rungs with admissible indices k (L_k > 0) inside [L_min, L_max].
/// Throws Error(EmptyWindow) when the window contains no admissible k.
std::vector<Rung> ladder_rungs(const FrontAsymptotics& fa, const Orientation& o,
                               const PredictParams& p, double L_min,
                               double L_max, int samples_per_rung = 64);

struct SnakingPrediction {
  double width = 0.0;
  std::vector<std::pair<double, double>> snake_site;
  std::vector<std::pair<double, double>> snake_bond;
  std::vector<Rung> rungs;
};

SnakingPrediction predict_diagram(const FrontAsymptotics& fa,
                                  const Orientation& o, const PredictParams& p,
                                  double L_min, double L_max, int L_points,
                                  int samples_per_rung = 64);

}  // namespace latpin
