#pragma once

#include <vector>

#include "latpin/lattice.hpp"
#include "latpin/model.hpp"

namespace latpin {

/// Continuum-limit Taylor coefficients of the difference operator:
/// c_p = sum_i w_i delta_i^{2p} / (2p)!, p = 1..p_max. For the square stencil
/// this reduces to 2 (cos^{2p} psi + sin^{2p} psi) / (2p)!; c_1 = 1 for every
/// discrete Laplacian handled here.
std::vector<double> taylor_coefficients(const Stencil& st, const Orientation& o,
                                        int p_max);

/// One iteration of a near-singularity recurrence, carried on the normalized
/// sequence V_n = U_n kappa1^{2n+beta} / Gamma(2n+beta) with beta = 2 gamma + 2.
/// The normalization keeps every intermediate within double range; Gamma
/// ratios are evaluated through log-Gamma differences.
struct RecurrenceRun {
  ModelId model = ModelId::cubic_const;
  Orientation o;
  int n_max = 0;
  double kappa1 = 0.0;
  double beta = 0.0;
  std::vector<double> V;  // V_0 .. V_{n_max}
};

/// Default iteration depths: alternation sets in more slowly on the diagonal
/// for the quintic model.
int default_n_max(ModelId id);

/// Iterates the printed recurrence for the model's late coefficients U_n
/// near the dominant singularity. Built-in models only; n_max <= 200.
/// Throws Error(Overflow) if any normalized intermediate leaves double range.
RecurrenceRun iterate_recurrence(const NonlinearitySpec& spec,
                                 const Orientation& o, int n_max);

enum class Dominance { real_dominant, complex_dominant };

struct LambdaEstimate {
  double value = 0.0;
  std::vector<double> estimates;  // per-n, prefactor applied
  int n_used = 0;
  bool converged = false;
  Dominance dominance = Dominance::real_dominant;
  double oscillation_period = 0.0;  // in n, only meaningful when complex_dominant
};

/// Per-model prefactor 1/|G-coefficient| relating the normalized tail to
/// Lambda: 5 sqrt(2) for the cubic model (G ~ -(sqrt2/10)(Z-zeta)^3) and
/// 12^{1/4} for the cubic-quintic model (G ~ -12^{-1/4}(Z-zeta)^{5/2}).
double lambda_prefactor(ModelId id);

/// Beyond-all-orders constant from the recurrence tail: per-n estimates
/// prefactor * (-1)^{n+1} V_n, Richardson-extrapolated in 1/n (order 2,
/// window of the trailing 12). For orientations away from the axes and
/// diagonals the complex eigenvalue dominates the tail and the estimate
/// sequence oscillates instead of converging; this is reported as
/// complex_dominant with the measured oscillation period.
LambdaEstimate extract_lambda(const RecurrenceRun& run,
                              const NonlinearitySpec& spec,
                              const Orientation& o);

/// Convenience: iterate + extract with the default depth. Throws
/// Error(ComplexDominance) when no converged value exists for the
/// orientation.
double lambda_value(const NonlinearitySpec& spec, const Orientation& o,
                    int n_max = 0);

}  // namespace latpin
