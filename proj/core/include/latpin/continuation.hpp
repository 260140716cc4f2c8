#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latpin/banded.hpp"
#include "latpin/lattice.hpp"
#include "latpin/model.hpp"

namespace latpin {

/// Steady rotated lattice equation in unscaled (hatted) variables:
/// 0 = sum_k w_k u_{j+k} + w_0 u_j - F(u_j; r, s) on j = 0..J-1, with
/// symmetric boundary conditions (index -k reflects to k, J-1+k to J-1-k).
struct LatticeProblem {
  NonlinearitySpec spec;
  Orientation o;
  int J = 0;
  double r = 0.0;
  // Effective one-dimensional couplings: distinct positive index offsets with
  // summed weights (negative offsets are implied by symmetry); offsets that
  // project to zero fold into the centre weight.
  std::vector<std::pair<int, double>> couplings;
  double center_weight = 0.0;

  int bandwidth() const noexcept;
  double spacing() const noexcept { return o.spacing; }
};

LatticeProblem make_problem(const NonlinearitySpec& spec, const Orientation& o,
                            int J, double r);

/// res_j of the steady equation; out must have length J.
void residual(const LatticeProblem& p, std::span<const double> u,
              std::span<double> out);
double residual_norm(const LatticeProblem& p, std::span<const double> u);

/// Fills the banded Jacobian d(res)/d(u).
void jacobian(const LatticeProblem& p, std::span<const double> u,
              BandedMatrix& J);

/// Damped Newton with a banded direct solve.
/// Throws Error(SingularJacobian) or Error(NoConvergence).
std::vector<double> newton(const LatticeProblem& p, std::vector<double> u0,
                           double tol = 1e-10, int max_iter = 50);

/// Analytic front/patch seeds on the effective lattice (built-in models).
std::vector<double> front_seed(const LatticeProblem& p, double z_front);
std::vector<double> patch_seed(const LatticeProblem& p, double z_left,
                               double z_right);

struct BranchPoint {
  std::vector<double> u;
  double r = 0.0;
  double measure = 0.0;  // sum of u over the domain
  int tangent_r_sign = 0;
};

struct Fold {
  double r = 0.0;
  int point_index = 0;  // branch point just before the fold
  int side = 0;         // +1: local maximum of r, -1: local minimum
};

struct ContinuationBranch {
  std::vector<BranchPoint> points;
  std::vector<Fold> folds;
  std::string stop_reason;
};

struct StepPolicy {
  double ds0 = 1e-3;
  double ds_min = 1e-9;
  double ds_max = 1e-2;
  double grow = 1.3;
  double newton_tol = 1e-10;
  int newton_max_iter = 12;
  double fold_r_tol = 1e-12;  // bisection target on the fold's r bracket
};

struct StopPolicy {
  int max_points = 20000;
  int max_folds = 12;
  // Stop when the front core comes within margin_over_alpha / alpha_hat
  // effective-lattice z-units of either boundary.
  double margin_over_alpha = 10.0;
};

/// Pseudo-arclength continuation with a secant predictor, adaptive step,
/// and fold detection by sign change of the tangent r-component, each fold
/// refined by bisection. direction flips the initial tangent. tangent_hint
/// (size J+1, u-components then r) overrides the parameter-derivative
/// initial tangent; used when starting on a freshly switched branch.
ContinuationBranch continue_branch(const LatticeProblem& p,
                                   std::vector<double> start, double r_start,
                                   const StepPolicy& step = {},
                                   const StopPolicy& stop = {},
                                   int direction = +1,
                                   const std::vector<double>* tangent_hint = nullptr);

/// J v without forming the matrix.
void apply_jacobian(const LatticeProblem& p, std::span<const double> u,
                    std::span<const double> v, std::span<double> out);

/// Smallest-magnitude eigenvalue of the Jacobian restricted to the subspace
/// antisymmetric about the domain centre (odd J), by projected inverse
/// iteration. Rung branches bifurcate where this crosses zero between folds.
double antisymmetric_eigenvalue(const LatticeProblem& p,
                                std::span<const double> u,
                                std::vector<double>* eigvec = nullptr);

/// Relative reflection defect about the site or bond centre given as a
/// doubled index (center2 = 2c, so odd values are bond centres), over the
/// overlap window.
double symmetry_defect(std::span<const double> u, int center2);

/// Converges onto the symmetry-broken branch near a pitchfork by solving
/// {residual = 0, v.(u - u_ref) = delta} for (u, r), starting from
/// u_ref + delta v. Returns the state and its parameter value.
std::pair<std::vector<double>, double> branch_switch(
    const LatticeProblem& p, const BranchPoint& at,
    const std::vector<double>& v, double delta, double tol = 1e-10);

struct PinningMeasurement {
  double width = 0.0;
  double r_left = 0.0;
  double r_right = 0.0;
  int folds_used = 0;
};

/// Width from fold means after discarding the first skip_folds
/// skew-dominated turns.
PinningMeasurement measure_pinning_width(const ContinuationBranch& b,
                                         int skip_folds = 4);

/// Suggested J so the front core sits >= 12/alpha_hat z-units from both
/// boundaries at the paper's domain sizes (300 points at s_hat = 1 on the
/// axis of the cubic model).
int default_domain_size(const NonlinearitySpec& spec, const Orientation& o);

/// Mid-level crossing position of a front state, in z units.
/// Throws Error(NoFront) for zero or multiple crossings.
double front_position(const LatticeProblem& p, std::span<const double> u,
                      double u_minus, double u_plus);

}  // namespace latpin
