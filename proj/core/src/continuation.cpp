#include "latpin/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

int reflect_index(int idx, int J) {
  while (idx < 0 || idx >= J) {
    if (idx < 0) idx = -idx;                  // ghost -k reads k
    if (idx >= J) idx = 2 * (J - 1) - idx;    // ghost J-1+k reads J-1-k
  }
  return idx;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

int LatticeProblem::bandwidth() const noexcept {
  int bw = 0;
  for (const auto& [k, w] : couplings) bw = std::max(bw, k);
  return bw;
}

LatticeProblem make_problem(const NonlinearitySpec& spec, const Orientation& o,
                            int J, double r) {
  if (J < 8) fail(ErrorCode::Config, "domain too small");
  LatticeProblem p;
  p.spec = spec;
  p.o = o;
  p.J = J;
  p.r = r;
  p.center_weight = 0.0;
  std::map<int, double> acc;
  const Stencil st = stencil(o.kind);
  p.center_weight += st.center_weight;
  for (const auto& pr : projections(st, o)) {
    if (pr.index_offset == 0) {
      p.center_weight += pr.weight;
    } else {
      acc[std::abs(pr.index_offset)] += 0.5 * pr.weight;  // +- pair halves
    }
  }
  for (const auto& [k, w] : acc) p.couplings.emplace_back(k, 2.0 * w);
  return p;
}

void residual(const LatticeProblem& p, std::span<const double> u,
              std::span<double> out) {
  const int J = p.J;
  for (int j = 0; j < J; ++j) {
    double acc = p.center_weight * u[j];
    for (const auto& [k, w] : p.couplings) {
      acc += w * (u[reflect_index(j + k, J)] + u[reflect_index(j - k, J)]) * 0.5;
    }
    out[j] = acc - p.spec.f(u[j], p.r);
  }
}

double residual_norm(const LatticeProblem& p, std::span<const double> u) {
  std::vector<double> res(p.J);
  residual(p, u, res);
  return inf_norm(res);
}

void jacobian(const LatticeProblem& p, std::span<const double> u,
              BandedMatrix& J) {
  J.clear();
  const int n = p.J;
  for (int j = 0; j < n; ++j) {
    J.at(j, j) += p.center_weight - p.spec.fu(u[j], p.r);
    for (const auto& [k, w] : p.couplings) {
      J.at(j, reflect_index(j + k, n)) += 0.5 * w;
      J.at(j, reflect_index(j - k, n)) += 0.5 * w;
    }
  }
}

std::vector<double> newton(const LatticeProblem& p, std::vector<double> u,
                           double tol, int max_iter) {
  const int n = p.J;
  BandedMatrix J(n, p.bandwidth(), p.bandwidth());
  std::vector<double> res(n), step(n);
  residual(p, u, res);
  double rnorm = inf_norm(res);
  for (int it = 0; it < max_iter; ++it) {
    if (rnorm < tol) return u;
    jacobian(p, u, J);
    J.factor();
    step = res;
    J.solve(step);
    double damp = 1.0;
    std::vector<double> trial(n), tres(n);
    for (int k = 0;; ++k) {
      for (int i = 0; i < n; ++i) trial[i] = u[i] - damp * step[i];
      residual(p, trial, tres);
      const double tnorm = inf_norm(tres);
      if (tnorm < rnorm || tnorm < tol) {
        u.swap(trial);
        res.swap(tres);
        rnorm = tnorm;
        break;
      }
      damp *= 0.5;
      if (k >= 10) fail(ErrorCode::NoConvergence, "Newton stalled");
    }
  }
  if (rnorm < tol) return u;
  fail(ErrorCode::NoConvergence, "Newton did not reach tolerance");
}

std::vector<double> front_seed(const LatticeProblem& p, double z_front) {
  std::vector<double> u(p.J);
  const double h = p.spacing();
  for (int j = 0; j < p.J; ++j) {
    u[j] = front_profile(p.spec, z_front - j * h);  // down-front: u+ on the left
  }
  return u;
}

std::vector<double> patch_seed(const LatticeProblem& p, double z_left,
                               double z_right) {
  std::vector<double> u(p.J);
  const double h = p.spacing();
  const MaxwellData mx = maxwell(p.spec);
  for (int j = 0; j < p.J; ++j) {
    const double z = j * h;
    u[j] = front_profile(p.spec, z - z_left) + front_profile(p.spec, z_right - z) -
           mx.u_plus;
  }
  return u;
}

namespace {

struct ExtState {
  std::vector<double> u;
  double r = 0.0;
};

struct Stepper {
  const LatticeProblem* base;
  StepPolicy pol;
  BandedMatrix J;
  std::vector<double> res, rr, a, b, tu;

  explicit Stepper(const LatticeProblem& p, const StepPolicy& sp)
      : base(&p), pol(sp), J(p.J, p.bandwidth(), p.bandwidth()),
        res(p.J), rr(p.J), a(p.J), b(p.J), tu(p.J) {}

  /// dr/dr-column of the extended system: d(res)/dr = -F_r(u_j; r).
  void fill_dres_dr(const ExtState& x, std::vector<double>& out) {
    for (int j = 0; j < base->J; ++j) out[j] = -base->spec.fr(x.u[j], x.r);
  }

  /// One pseudo-arclength corrector from the predicted point. tangent is the
  /// unit tangent (t_u, t_r); the corrector stays on the hyperplane
  /// t . (x - x_pred) = 0. Returns the Newton iteration count, or -1 on
  /// failure.
  int correct(ExtState& x, const std::vector<double>& t_u, double t_r,
              const ExtState& x_pred) {
    LatticeProblem p = *base;
    for (int it = 0; it < pol.newton_max_iter; ++it) {
      p.r = x.r;
      residual(p, x.u, res);
      double N = -t_r * (x.r - x_pred.r);
      for (int j = 0; j < p.J; ++j) N -= t_u[j] * (x.u[j] - x_pred.u[j]);
      const double rnorm = inf_norm(res);
      if (rnorm < pol.newton_tol && std::abs(N) < pol.newton_tol * 1e2) {
        return it;
      }
      jacobian(p, x.u, J);
      try {
        J.factor();
      } catch (const Error&) {
        return -1;
      }
      // Block elimination of the bordered system:
      //   [J_u  dres_dr] [du]   [-res]
      //   [t_u^T   t_r ] [dr] = [ N  ]
      a = res;
      J.solve(a);  // J_u a = res  =>  du = -(a) - dr * b
      fill_dres_dr(x, rr);
      b = rr;
      J.solve(b);
      double ta = 0.0, tb = 0.0;
      for (int j = 0; j < p.J; ++j) {
        ta += t_u[j] * a[j];
        tb += t_u[j] * b[j];
      }
      const double denom = t_r - tb;
      if (std::abs(denom) < 1e-300) return -1;
      const double dr = (N + ta) / denom;
      for (int j = 0; j < p.J; ++j) x.u[j] += -a[j] - dr * b[j];
      x.r += dr;
      if (!std::isfinite(x.r)) return -1;
    }
    p.r = x.r;
    residual(p, x.u, res);
    return inf_norm(res) < pol.newton_tol ? pol.newton_max_iter : -1;
  }

  /// Predict + correct one step of size ds along tangent (t_u, t_r).
  /// Returns the corrector iteration count, or -1 on failure.
  int step(const ExtState& from, const std::vector<double>& t_u, double t_r,
           double ds, ExtState& out) {
    out = from;
    for (int j = 0; j < base->J; ++j) out.u[j] += ds * t_u[j];
    out.r += ds * t_r;
    const ExtState pred = out;
    return correct(out, t_u, t_r, pred);
  }
};

double state_distance(const ExtState& a, const ExtState& b) {
  double acc = (a.r - b.r) * (a.r - b.r);
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    acc += (a.u[j] - b.u[j]) * (a.u[j] - b.u[j]);
  }
  return std::sqrt(acc);
}

void secant_tangent(const ExtState& from, const ExtState& to,
                    std::vector<double>& t_u, double& t_r) {
  const double d = state_distance(from, to);
  for (std::size_t j = 0; j < from.u.size(); ++j) {
    t_u[j] = (to.u[j] - from.u[j]) / d;
  }
  t_r = (to.r - from.r) / d;
}

/// Bisection refinement of a fold bracketed by one arclength step of size ds
/// from `left`. Marches from the left endpoint with halved steps, keeping the
/// extremal r; terminates when the two sides of the vertex agree to r_tol.
double refine_fold(Stepper& st, ExtState left, std::vector<double> t_u,
                   double t_r, double ds, double r_other, int side,
                   double r_tol) {
  double r_best = side > 0 ? std::max(left.r, r_other) : std::min(left.r, r_other);
  double r_near = left.r;   // last sample on the rising side
  double r_far = r_other;   // last sample on the falling side
  std::vector<double> t2(t_u.size());
  double tr2 = 0.0;
  for (int it = 0; it < 60; ++it) {
    if (it >= 8 && std::abs(r_near - r_far) < r_tol) break;
    ds *= 0.5;
    if (ds < 1e-13) break;
    ExtState mid;
    if (st.step(left, t_u, t_r, ds, mid) < 0) continue;
    const int sgn = (mid.r - left.r) > 0 ? +1 : -1;
    r_best = side > 0 ? std::max(r_best, mid.r) : std::min(r_best, mid.r);
    if (sgn == side) {
      // still approaching the fold: advance the left endpoint
      secant_tangent(left, mid, t2, tr2);
      left = std::move(mid);
      t_u = t2;
      t_r = tr2;
      r_near = left.r;
    } else {
      r_far = mid.r;
    }
  }
  return r_best;
}

}  // namespace

ContinuationBranch continue_branch(const LatticeProblem& p,
                                   std::vector<double> start, double r_start,
                                   const StepPolicy& step,
                                   const StopPolicy& stop, int direction,
                                   const std::vector<double>* tangent_hint) {
  LatticeProblem prob = p;
  prob.r = r_start;
  start = newton(prob, std::move(start), step.newton_tol);

  ContinuationBranch branch;
  Stepper stepper(p, step);

  ExtState x{std::move(start), r_start};

  std::vector<double> t_u(p.J);
  double t_r = 0.0;
  if (tangent_hint != nullptr) {
    if (static_cast<int>(tangent_hint->size()) != p.J + 1) {
      fail(ErrorCode::Config, "tangent hint must have length J + 1");
    }
    double norm2 = 0.0;
    for (double v : *tangent_hint) norm2 += v * v;
    const double norm = std::sqrt(norm2) * (direction >= 0 ? 1.0 : -1.0);
    for (int j = 0; j < p.J; ++j) t_u[j] = (*tangent_hint)[j] / norm;
    t_r = tangent_hint->back() / norm;
  } else {
    // Initial tangent from the parameter derivative: J_u du = -d(res)/dr.
    BandedMatrix J(p.J, p.bandwidth(), p.bandwidth());
    LatticeProblem q = p;
    q.r = x.r;
    jacobian(q, x.u, J);
    J.factor();
    std::vector<double> dres_dr(p.J);
    for (int j = 0; j < p.J; ++j) dres_dr[j] = -p.spec.fr(x.u[j], x.r);
    std::vector<double> du = dres_dr;
    J.solve(du);  // du/dr = -J^{-1} dres_dr
    double norm2 = 1.0;
    for (int j = 0; j < p.J; ++j) {
      du[j] = -du[j];
      norm2 += du[j] * du[j];
    }
    const double norm = std::sqrt(norm2) * (direction >= 0 ? 1.0 : -1.0);
    for (int j = 0; j < p.J; ++j) t_u[j] = du[j] / norm;
    t_r = 1.0 / norm;
  }

  double u_minus = 0.0, u_plus = 0.0;
  bool have_levels = false;
  if (p.spec.id != ModelId::custom) {
    const MaxwellData mx = maxwell(p.spec);
    u_minus = mx.u_minus;
    u_plus = mx.u_plus;
    have_levels = true;
  }
  const double alpha_hat =
      have_levels ? std::sqrt(std::max(p.spec.fu(u_plus, x.r), 1e-12)) : 1.0;
  const double z_margin = stop.margin_over_alpha / alpha_hat;
  const double z_max = (p.J - 1) * p.spacing();

  auto push_point = [&](const ExtState& s, int sign) {
    BranchPoint bp;
    bp.u = s.u;
    bp.r = s.r;
    bp.measure = std::accumulate(s.u.begin(), s.u.end(), 0.0);
    bp.tangent_r_sign = sign;
    branch.points.push_back(std::move(bp));
  };
  push_point(x, t_r > 0 ? +1 : -1);

  double ds = step.ds0;
  int prev_sign = t_r > 0 ? +1 : -1;
  std::vector<double> t2(p.J);
  double tr2 = 0.0;

  while (static_cast<int>(branch.points.size()) < stop.max_points) {
    ExtState next;
    int iters = -1;
    while (iters < 0) {
      iters = stepper.step(x, t_u, t_r, ds, next);
      if (iters < 0) {
        ds *= 0.5;
        if (ds < step.ds_min) {
          fail(ErrorCode::StepUnderflow,
               "arclength step collapsed below ds_min");
        }
      }
    }

    secant_tangent(x, next, t2, tr2);
    const int sign = tr2 > 0 ? +1 : -1;

    if (sign != prev_sign) {
      const int side = prev_sign;
      const double r_fold = refine_fold(stepper, x, t_u, t_r, ds, next.r, side,
                                        step.fold_r_tol);
      branch.folds.push_back(
          {r_fold, static_cast<int>(branch.points.size()) - 1, side});
      if (static_cast<int>(branch.folds.size()) >= stop.max_folds) {
        x = std::move(next);
        push_point(x, sign);
        branch.stop_reason = "max_folds";
        return branch;
      }
    }

    x = std::move(next);
    t_u = t2;
    t_r = tr2;
    prev_sign = sign;
    push_point(x, sign);

    if (have_levels) {
      // Domain guard: every mid-level crossing must stay z_margin away from
      // both boundaries.
      const double mid = 0.5 * (u_minus + u_plus);
      double zmin = z_max, zmax_seen = 0.0;
      int crossings = 0;
      for (int j = 0; j + 1 < p.J; ++j) {
        const double a = x.u[j] - mid, b = x.u[j + 1] - mid;
        if (a == 0.0 || a * b < 0.0) {
          const double z = (j + a / (a - b)) * p.spacing();
          zmin = std::min(zmin, z);
          zmax_seen = std::max(zmax_seen, z);
          ++crossings;
        }
      }
      if (crossings == 0) {
        branch.stop_reason = "front_lost";
        return branch;
      }
      if (zmin < z_margin || zmax_seen > z_max - z_margin) {
        branch.stop_reason = "boundary";
        return branch;
      }
    }

    if (iters <= 3) ds = std::min(ds * step.grow, step.ds_max);
  }
  branch.stop_reason = "max_points";
  return branch;
}

void apply_jacobian(const LatticeProblem& p, std::span<const double> u,
                    std::span<const double> v, std::span<double> out) {
  const int J = p.J;
  for (int j = 0; j < J; ++j) {
    double acc = (p.center_weight - p.spec.fu(u[j], p.r)) * v[j];
    for (const auto& [k, w] : p.couplings) {
      acc += 0.5 * w * (v[reflect_index(j + k, J)] + v[reflect_index(j - k, J)]);
    }
    out[j] = acc;
  }
}

double antisymmetric_eigenvalue(const LatticeProblem& p,
                                std::span<const double> u,
                                std::vector<double>* eigvec) {
  const int J = p.J;
  if (J % 2 == 0) {
    fail(ErrorCode::Config, "antisymmetric tracking needs an odd domain size");
  }
  auto project = [&](std::vector<double>& v) {
    for (int j = 0; j < J / 2; ++j) {
      const double a = 0.5 * (v[j] - v[J - 1 - j]);
      v[j] = a;
      v[J - 1 - j] = -a;
    }
    v[J / 2] = 0.0;
  };
  auto normalize = [&](std::vector<double>& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    const double n = std::sqrt(n2);
    if (n == 0.0) fail(ErrorCode::NoConvergence, "zero antisymmetric iterate");
    for (double& x : v) x /= n;
  };

  BandedMatrix A(J, p.bandwidth(), p.bandwidth());
  jacobian(p, u, A);
  bool shifted = false;
  try {
    A.factor();
  } catch (const Error&) {
    // exactly at a crossing: fall back to a small diagonal shift
    jacobian(p, u, A);
    for (int j = 0; j < J; ++j) A.at(j, j) += 1e-10;
    A.factor();
    shifted = true;
  }
  (void)shifted;

  std::vector<double> v(J);
  for (int j = 0; j < J; ++j) v[j] = std::sin(2.7 * (j + 1)) + 0.3 * std::sin(0.31 * j * j);
  project(v);
  normalize(v);
  std::vector<double> w(J), prev(J);
  for (int it = 0; it < 200; ++it) {
    prev = v;
    w = v;
    A.solve(w);
    project(w);
    v = w;
    normalize(v);
    double dot = 0.0;
    for (int j = 0; j < J; ++j) dot += v[j] * prev[j];
    if (std::abs(std::abs(dot) - 1.0) < 1e-13 && it > 2) break;
  }
  std::vector<double> Jv(J);
  apply_jacobian(p, u, v, Jv);
  double num = 0.0;
  for (int j = 0; j < J; ++j) num += v[j] * Jv[j];
  if (eigvec != nullptr) *eigvec = v;
  return num;  // Rayleigh quotient with |v| = 1
}

double symmetry_defect(std::span<const double> u, int center2) {
  const int J = static_cast<int>(u.size());
  double num = 0.0, den = 0.0;
  for (int j = 0; j < J; ++j) {
    const int k = center2 - j;
    if (k < 0 || k >= J) continue;
    num += (u[j] - u[k]) * (u[j] - u[k]);
    den += u[j] * u[j] + u[k] * u[k];
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

std::pair<std::vector<double>, double> branch_switch(
    const LatticeProblem& p, const BranchPoint& at,
    const std::vector<double>& v, double delta, double tol) {
  StepPolicy pol;
  pol.newton_tol = tol;
  pol.newton_max_iter = 40;
  Stepper st(p, pol);
  ExtState x;
  x.u = at.u;
  for (int j = 0; j < p.J; ++j) x.u[j] += delta * v[j];
  x.r = at.r;
  const ExtState pred = x;
  // constraint v . (u - u_ref) = delta, i.e. tangent (v, 0) through pred
  if (st.correct(x, v, 0.0, pred) < 0) {
    fail(ErrorCode::NoConvergence, "branch switch corrector failed");
  }
  return {std::move(x.u), x.r};
}

PinningMeasurement measure_pinning_width(const ContinuationBranch& b,
                                         int skip_folds) {
  if (static_cast<int>(b.folds.size()) < skip_folds + 4) {
    fail(ErrorCode::InsufficientFolds,
         "need at least skip_folds + 4 folds, have " +
             std::to_string(b.folds.size()));
  }
  double sum_r = 0.0, sum_l = 0.0;
  int n_r = 0, n_l = 0;
  for (std::size_t i = skip_folds; i < b.folds.size(); ++i) {
    if (b.folds[i].side > 0) {
      sum_r += b.folds[i].r;
      ++n_r;
    } else {
      sum_l += b.folds[i].r;
      ++n_l;
    }
  }
  if (n_r < 2 || n_l < 2) {
    fail(ErrorCode::InsufficientFolds, "need two folds per side after skips");
  }
  PinningMeasurement m;
  m.r_right = sum_r / n_r;
  m.r_left = sum_l / n_l;
  m.width = m.r_right - m.r_left;
  m.folds_used = n_r + n_l;
  return m;
}

int default_domain_size(const NonlinearitySpec& spec, const Orientation& o) {
  const MaxwellData mx = maxwell(spec);
  const double alpha_hat = std::sqrt(spec.fu(mx.u_plus, mx.r_M));
  const int J = static_cast<int>(std::ceil(425.0 / (alpha_hat * o.spacing)));
  return std::clamp(J, 64, 6000);
}

double front_position(const LatticeProblem& p, std::span<const double> u,
                      double u_minus, double u_plus) {
  const double mid = 0.5 * (u_minus + u_plus);
  int count = 0;
  double pos = 0.0;
  for (int j = 0; j + 1 < p.J; ++j) {
    const double a = u[j] - mid, b = u[j + 1] - mid;
    if (a == 0.0 || a * b < 0.0) {
      pos = (j + a / (a - b)) * p.spacing();
      ++count;
    }
  }
  if (count != 1) {
    fail(ErrorCode::NoFront, count == 0 ? "no mid-level crossing"
                                        : "multiple mid-level crossings");
  }
  return pos;
}

}  // namespace latpin
