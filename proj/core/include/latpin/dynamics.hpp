#pragma once

#include <span>
#include <vector>

#include "latpin/continuation.hpp"

namespace latpin {

struct Trajectory {
  std::vector<double> times;
  std::vector<double> front_positions;  // z units
  double drift_velocity = 0.0;          // fit slope over the trailing half
  bool pinned = false;
};

struct EvolveOptions {
  double dt = 0.0;        // 0: use 0.8 * stable_dt_bound
  double sample_dt = 0.0; // 0: T / 400
  double v_tol = -1.0;    // pinned iff |drift| < v_tol; <0: 0.5 spacing / T
};

/// Explicit stability ceiling for du/dt = Delta u - F(u; r):
/// 1 / (2 sum|w_i|) shrunk by the nonlinear stiffness estimate.
double stable_dt_bound(const LatticeProblem& p, std::span<const double> u);

/// Classical fourth-order Runge-Kutta integration of the lattice equation,
/// sampling the front position each output step.
/// Throws Error(Instability) on norm blow-up and Error(NoFront) when the
/// state has no single mid-level crossing.
Trajectory evolve(const LatticeProblem& p, std::vector<double> u0, double dt,
                  double T, const EvolveOptions& opts = {});

enum class Side { left, right };

struct DepinOptions {
  double dt = 0.0;
  double T_max = 4000.0;   // classification horizon per bisection probe
  double hop_fraction = 1.0; // front move (in spacings) that counts as depinned
  double tol = 0.0;        // bisection target on r; 0: bracket span / 50
};

/// Bisection on r between a pinned and an unpinned state. The classification
/// runs in chunks and exits early once the front has hopped one lattice
/// spacing. Throws Error(BracketInvalid) when the bracket does not straddle
/// the boundary.
double depinning_threshold(const LatticeProblem& p, Side side,
                           std::pair<double, double> bracket,
                           const DepinOptions& opts = {});

/// Single classification probe at the problem's r.
bool stays_pinned(const LatticeProblem& p, std::vector<double> u0, double dt,
                  double T_max, double hop_z);

}  // namespace latpin
