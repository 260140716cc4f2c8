#include "latpin/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

struct Rhs {
  const LatticeProblem* p;
  mutable LatticeProblem scratch;

  explicit Rhs(const LatticeProblem& prob) : p(&prob), scratch(prob) {}

  void operator()(std::span<const double> u, std::span<double> out) const {
    residual(scratch, u, out);  // du/dt = steady residual
  }
};

void rk4_step(const Rhs& f, std::vector<double>& u, double dt,
              std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp) {
  const std::size_t n = u.size();
  f(u, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
  f(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
  f(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
  f(tmp, k4);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

double blowup_ceiling(const LatticeProblem& p) {
  const MaxwellData mx = maxwell(p.spec);
  return 1e3 * (1.0 + std::max(std::abs(mx.u_minus), std::abs(mx.u_plus)));
}

}  // namespace

double stable_dt_bound(const LatticeProblem& p, std::span<const double> u) {
  double wsum = std::abs(p.center_weight);
  for (const auto& [k, w] : p.couplings) wsum += std::abs(w);
  double fu_max = 0.0;
  for (double x : u) fu_max = std::max(fu_max, std::abs(p.spec.fu(x, p.r)));
  return 1.0 / (2.0 * (wsum + fu_max));
}

Trajectory evolve(const LatticeProblem& p, std::vector<double> u0, double dt,
                  double T, const EvolveOptions& opts) {
  const double bound = stable_dt_bound(p, u0);
  if (dt <= 0.0) dt = 0.8 * bound;
  if (dt >= bound) {
    fail(ErrorCode::Instability,
         "dt exceeds the explicit stability bound " + std::to_string(bound));
  }
  const double sample_dt = opts.sample_dt > 0 ? opts.sample_dt : T / 400.0;
  const int steps_per_sample = std::max(1, static_cast<int>(sample_dt / dt));
  const MaxwellData mx = maxwell(p.spec);
  const double ceiling = blowup_ceiling(p);

  Rhs rhs(p);
  std::vector<double> k1(p.J), k2(p.J), k3(p.J), k4(p.J), tmp(p.J);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.front_positions.push_back(front_position(p, u0, mx.u_minus, mx.u_plus));

  double t = 0.0;
  while (t < T - 0.5 * dt) {
    for (int s = 0; s < steps_per_sample && t < T - 0.5 * dt; ++s) {
      rk4_step(rhs, u0, dt, k1, k2, k3, k4, tmp);
      t += dt;
    }
    for (double x : u0) {
      if (!std::isfinite(x) || std::abs(x) > ceiling) {
        fail(ErrorCode::Instability, "norm blow-up during time integration");
      }
    }
    traj.times.push_back(t);
    traj.front_positions.push_back(
        front_position(p, u0, mx.u_minus, mx.u_plus));
  }

  // Least-squares drift over the trailing half of the samples.
  const std::size_t n = traj.times.size();
  const std::size_t lo = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::size_t m = n - lo;
  for (std::size_t i = lo; i < n; ++i) {
    sx += traj.times[i];
    sy += traj.front_positions[i];
    sxx += traj.times[i] * traj.times[i];
    sxy += traj.times[i] * traj.front_positions[i];
  }
  const double denom = m * sxx - sx * sx;
  traj.drift_velocity = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  const double v_tol =
      opts.v_tol >= 0 ? opts.v_tol : 0.5 * p.spacing() / T;
  traj.pinned = std::abs(traj.drift_velocity) < v_tol;
  return traj;
}

bool stays_pinned(const LatticeProblem& p, std::vector<double> u0, double dt,
                  double T_max, double hop_z) {
  const double bound = stable_dt_bound(p, u0);
  if (dt <= 0.0) dt = 0.8 * bound;
  if (dt >= bound) fail(ErrorCode::Instability, "dt exceeds stability bound");
  const MaxwellData mx = maxwell(p.spec);
  const double ceiling = blowup_ceiling(p);
  const double z0 = front_position(p, u0, mx.u_minus, mx.u_plus);

  Rhs rhs(p);
  std::vector<double> k1(p.J), k2(p.J), k3(p.J), k4(p.J), tmp(p.J);
  const double chunk = std::min(T_max / 20.0, 50.0);
  const int steps_per_chunk = std::max(1, static_cast<int>(chunk / dt));
  double t = 0.0;
  while (t < T_max) {
    for (int s = 0; s < steps_per_chunk; ++s) rk4_step(rhs, u0, dt, k1, k2, k3, k4, tmp);
    t += steps_per_chunk * dt;
    for (double x : u0) {
      if (!std::isfinite(x) || std::abs(x) > ceiling) {
        fail(ErrorCode::Instability, "norm blow-up during classification");
      }
    }
    double z;
    try {
      z = front_position(p, u0, mx.u_minus, mx.u_plus);
    } catch (const Error&) {
      return false;  // front ran off the domain between samples: depinned
    }
    if (std::abs(z - z0) >= hop_z) return false;  // hopped: depinned
  }
  return true;
}

double depinning_threshold(const LatticeProblem& p, Side side,
                           std::pair<double, double> bracket,
                           const DepinOptions& opts) {
  double r_in = bracket.first;   // expected pinned
  double r_out = bracket.second; // expected depinned
  if (side == Side::left) std::swap(r_in, r_out);
  // For the left boundary the bracket is (r_lo depinned, r_hi pinned).

  const double hop_z = opts.hop_fraction * p.spacing();
  // One converged pinned front at the inner bracket end seeds every probe:
  // each classification then evolves that same state at the probe parameter.
  std::vector<double> seed;
  {
    LatticeProblem q = p;
    q.r = r_in;
    const double mid_z = 0.5 * (p.J - 1) * p.spacing();
    try {
      seed = newton(q, front_seed(q, mid_z));
    } catch (const Error&) {
      seed = front_seed(q, mid_z);
    }
  }
  auto classify = [&](double r) {
    LatticeProblem q = p;
    q.r = r;
    return stays_pinned(q, seed, opts.dt, opts.T_max, hop_z);
  };

  const bool in_pinned = classify(r_in);
  const bool out_pinned = classify(r_out);
  if (!in_pinned || out_pinned) {
    fail(ErrorCode::BracketInvalid,
         "bracket does not straddle the depinning boundary (inner " +
             std::string(in_pinned ? "pinned" : "unpinned") + ", outer " +
             std::string(out_pinned ? "pinned" : "unpinned") + ")");
  }
  const double tol =
      opts.tol > 0 ? opts.tol : std::abs(r_out - r_in) / 50.0;
  while (std::abs(r_out - r_in) > tol) {
    const double mid = 0.5 * (r_in + r_out);
    if (classify(mid)) {
      r_in = mid;
    } else {
      r_out = mid;
    }
  }
  return 0.5 * (r_in + r_out);
}

}  // namespace latpin
