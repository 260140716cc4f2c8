#include "latpin/driver.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "latpin/continuation.hpp"
#include "latpin/csv.hpp"
#include "latpin/dynamics.hpp"
#include "latpin/eigenvalues.hpp"
#include "latpin/errors.hpp"
#include "latpin/lateterms.hpp"
#include "latpin/predict.hpp"

namespace latpin {

namespace {

constexpr double kPi = std::numbers::pi;

void stamp_metadata(TableWriter& t, const RunConfig& cfg,
                    const char* schema_version) {
  t.add_meta("schema", std::string(cfg.command) + "/" + schema_version);
  std::ostringstream h;
  h << std::hex << config_hash(cfg);
  t.add_meta("config_fnv1a", h.str());
  t.add_meta("model", to_string(cfg.model));
  t.add_meta("lattice", to_string(cfg.lattice));
  t.add_meta("orientation",
             std::to_string(cfg.m1) + "," + std::to_string(cfg.m2));
  t.add_meta("newton_tol", cfg.newton_tol);
  t.add_meta("fold_r_tol", cfg.fold_r_tol);
}

void emit(const TableWriter& t, const RunConfig& cfg, std::ostream& fallback) {
  if (cfg.output.empty()) {
    t.write_csv(fallback, cfg.metadata);
  } else {
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) fail(ErrorCode::Config, "cannot open output " + cfg.output);
    t.write_csv(os, cfg.metadata);
  }
  if (cfg.json) {
    std::string path = cfg.output.empty() ? "out.json" : cfg.output;
    const auto dot = path.find_last_of('.');
    path = (dot == std::string::npos ? path : path.substr(0, dot)) + ".json";
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::Config, "cannot open output " + path);
    t.write_json(os);
  }
}

NonlinearitySpec model_at(const RunConfig& cfg, double s_hat) {
  return cfg.model == ModelId::cubic_const ? cubic_const_model(s_hat)
                                           : cubic_quintic_model(s_hat);
}

/// Lambda = |Lambda_{1,psi}| from the config override or the recurrence.
double lambda_abs_for(const RunConfig& cfg, const Orientation& o) {
  if (cfg.lambda_abs > 0) return cfg.lambda_abs;
  const NonlinearitySpec spec = model_at(cfg, 1.0);
  return std::abs(lambda_value(spec, o, cfg.n_max));
}

/// Unscaled pinning half-width through the scaled formula plus the model's
/// rescaling; valid on both lattices. The literal square-lattice wrappers
/// are the cross-check route, exercised in the tests.
double width_unscaled(ModelId id, const Orientation& o, double s_hat,
                      double lambda_abs) {
  const NonlinearitySpec spec_scaled =
      id == ModelId::cubic_const ? cubic_const_model(1.0)
                                 : cubic_quintic_model(1.0);
  const FrontAsymptotics fa = front_constants(spec_scaled);
  const double eps = eps_for_s_hat(id, s_hat);
  return pinning_width(fa, o, eps, lambda_abs) *
         std::pow(eps, r_scale_power(id));
}

int run_eigen(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const Stencil st = stencil(cfg.lattice);
  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("spacing", o.spacing);
  t.add_meta("kappa1", o.kappa1());
  t.set_columns({"type", "index", "re", "im", "abs", "residual"});

  const auto family = real_family(o, cfg.M_max);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double res = std::abs(symbol(st, o, {family[i], 0.0}));
    t.add_row({std::string("real"), (long long)(i + 1), family[i], 0.0,
               family[i], res});
  }
  const auto K = complex_smallest(o, cfg.box_factor);
  if (K) {
    const double res = std::abs(symbol(st, o, *K));
    t.add_row({std::string("complex"), 1ll, K->real(), K->imag(),
               std::abs(*K), res});
  }
  t.add_meta("complex_root_present", (long long)(K ? 1 : 0));

  if (cfg.scan_appendix) {
    const double box = cfg.box_factor * o.kappa1();
    const auto report = joint_solution_scan(o, box, box, cfg.grid_n);
    for (const auto& r : report.joint_roots) {
      const double res = std::abs(symbol(st, o, r));
      t.add_row({std::string("joint"), 0ll, r.real(), r.imag(), std::abs(r),
                 res});
    }
    t.add_meta("joint_roots_found", (long long)report.joint_roots.size());
    t.add_meta("scan_grid_n", (long long)report.grid_n);
    t.add_meta("scan_box", report.re_max);
    log << "appendix scan: " << report.joint_roots.size()
        << " joint roots in box " << report.re_max << " (expected 0)\n";
  }
  emit(t, cfg, out);
  return kExitOk;
}

int run_lambda(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const NonlinearitySpec spec = model_at(cfg, 1.0);
  const int n_max = cfg.n_max > 0 ? cfg.n_max : default_n_max(cfg.model);
  const RecurrenceRun rec = iterate_recurrence(spec, o, n_max);
  const LambdaEstimate est = extract_lambda(rec, spec, o);

  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("n_max", (long long)n_max);
  t.add_meta("kappa1", rec.kappa1);
  t.add_meta("beta", rec.beta);
  t.add_meta("prefactor", lambda_prefactor(cfg.model));
  t.add_meta("lambda", est.value);
  t.add_meta("converged", est.converged ? "true" : "false");
  t.add_meta("dominance", est.dominance == Dominance::real_dominant
                              ? "real_dominant"
                              : "complex_dominant");
  if (est.dominance == Dominance::complex_dominant) {
    t.add_meta("oscillation_period", est.oscillation_period);
  }
  t.set_columns({"n", "V", "estimate"});
  for (std::size_t n = 0; n < rec.V.size(); ++n) {
    t.add_row({(long long)n, rec.V[n], est.estimates[n]});
  }
  emit(t, cfg, out);
  log << "lambda = " << format_double(est.value)
      << (est.converged ? "" : " (NOT converged)") << "\n";
  return est.converged ? kExitOk : kExitNumerical;
}

int run_width(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const double lam = lambda_abs_for(cfg, o);
  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("lambda_abs", lam);
  t.set_columns({"model", "m1", "m2", "lattice", "s_hat", "r_maxwell_hat",
                 "width_analytic"});
  for (double s : cfg.s_hat) {
    const double w = width_unscaled(cfg.model, o, s, lam);
    const double r_M = maxwell(model_at(cfg, s)).r_M;
    t.add_row({std::string(to_string(cfg.model)), (long long)o.m1,
               (long long)o.m2, std::string(to_string(cfg.lattice)), s, r_M,
               w});
    log << "s_hat=" << format_double(s) << " width=" << format_double(w)
        << "\n";
  }
  emit(t, cfg, out);
  return kExitOk;
}

int run_diagram(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const double s_hat = cfg.s_hat.front();
  const double lam = lambda_abs_for(cfg, o);
  const NonlinearitySpec spec_scaled = model_at(cfg, 1.0);
  const FrontAsymptotics fa = front_constants(spec_scaled);
  PredictParams pp;
  pp.eps = eps_for_s_hat(cfg.model, s_hat);
  pp.lambda_abs = lam;
  pp.lambda_arg = kPi;  // Lambda < 0 for both built-in models

  const NonlinearitySpec spec_hat = model_at(cfg, s_hat);
  const MaxwellData mx = maxwell(spec_hat);
  const double alpha_hat = std::sqrt(spec_hat.fu(mx.u_plus, mx.r_M));
  double ell_min = cfg.ell_min, ell_max = cfg.ell_max;
  if (ell_min <= 0) ell_min = 12.0 / alpha_hat;
  if (ell_max <= ell_min) ell_max = ell_min + 8.0 * o.spacing;
  const double eps2 = pp.eps * pp.eps;
  const double r_pow = std::pow(pp.eps, r_scale_power(cfg.model));
  const int J = cfg.J > 0 ? cfg.J : default_domain_size(spec_hat, o);

  const SnakingPrediction pred =
      predict_diagram(fa, o, pp, ell_min * eps2, ell_max * eps2, cfg.L_points,
                      cfg.rung_samples);

  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("s_hat", s_hat);
  t.add_meta("lambda_abs", lam);
  t.add_meta("width_hat", pred.width * r_pow);
  t.add_meta("r_maxwell_hat", mx.r_M);
  t.add_meta("measure_note",
             "measure_proxy is a linear overlay proxy, not the paper's sum(u)");
  t.set_columns({"branch", "k", "ell", "z0", "delta_r_hat", "measure_proxy"});
  const auto proxy = [&](double ell) {
    return J * mx.u_minus + (mx.u_plus - mx.u_minus) * 0.5 * ell / o.spacing;
  };
  auto add_snake = [&](const char* name,
                       const std::vector<std::pair<double, double>>& pts) {
    for (const auto& [L, dr] : pts) {
      const double ell = L / eps2;
      t.add_row({std::string(name), -1ll, ell,
                 std::numeric_limits<double>::quiet_NaN(), dr * r_pow,
                 proxy(ell)});
    }
  };
  add_snake("snake_site", pred.snake_site);
  add_snake("snake_bond", pred.snake_bond);
  for (const auto& rung : pred.rungs) {
    const double ell = rung.L / eps2;
    for (const auto& [z0, dr] : rung.samples) {
      t.add_row({std::string("rung"), (long long)rung.k, ell, z0, dr * r_pow,
                 proxy(ell)});
    }
  }
  emit(t, cfg, out);
  log << "diagram: " << pred.rungs.size() << " rungs in ell window ["
      << format_double(ell_min) << ", " << format_double(ell_max) << "]\n";
  return kExitOk;
}

struct ContinueResult {
  ContinuationBranch branch;
  PinningMeasurement meas;
  int J = 0;
  double r_M = 0.0;
  bool measured = false;
};

ContinueResult run_continuation(const RunConfig& cfg, double s_hat,
                                std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const NonlinearitySpec spec = model_at(cfg, s_hat);
  const MaxwellData mx = maxwell(spec);
  const int J = cfg.J > 0 ? cfg.J : default_domain_size(spec, o);
  const double r0 = std::isnan(cfg.r_start) ? mx.r_M : cfg.r_start;

  LatticeProblem prob = make_problem(spec, o, J, r0);
  // Start just above the boundary margin and walk up the snake, so the fold
  // budget is limited by max_folds rather than by the domain. The seed phase
  // snaps to a half-multiple of the spacing: at small s_hat the translation
  // mode is exponentially soft and Newton needs the pinned phase.
  const double alpha_hat = std::sqrt(spec.fu(mx.u_plus, mx.r_M));
  double z_front = 10.0 / alpha_hat + std::max(6.0 / alpha_hat, 4.0 * o.spacing);
  z_front = std::round(2.0 * z_front / o.spacing) * 0.5 * o.spacing;
  std::vector<double> seed = front_seed(prob, z_front);

  StepPolicy step;
  step.ds0 = cfg.ds0;
  step.ds_max = cfg.ds_max;
  step.newton_tol = cfg.newton_tol;
  step.fold_r_tol = cfg.fold_r_tol;
  StopPolicy stop;
  stop.max_folds = cfg.max_folds;

  ContinueResult res;
  res.J = J;
  res.r_M = mx.r_M;
  // Probe the branch orientation. The measure oscillates with r through the
  // bulk levels, so the front position is the reliable indicator of which
  // way the separation grows; probe past the first fold before deciding.
  int dir = +1;
  {
    StopPolicy probe_stop = stop;
    probe_stop.max_points = 120;
    probe_stop.max_folds = 2;
    const auto probe = continue_branch(prob, seed, r0, step, probe_stop, +1);
    LatticeProblem q = prob;
    q.r = probe.points.back().r;
    const double z_end =
        front_position(q, probe.points.back().u, mx.u_minus, mx.u_plus);
    if (z_end < z_front) dir = -1;
  }
  res.branch = continue_branch(prob, std::move(seed), r0, step, stop, dir);
  log << "continuation (s_hat=" << format_double(s_hat) << ", J=" << J
      << "): " << res.branch.points.size() << " points, "
      << res.branch.folds.size() << " folds, stop=" << res.branch.stop_reason
      << "\n";
  if (static_cast<int>(res.branch.folds.size()) >= cfg.skip_folds + 4) {
    res.meas = measure_pinning_width(res.branch, cfg.skip_folds);
    res.measured = true;
  }
  return res;
}

int run_continue(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const double s_hat = cfg.s_hat.front();
  ContinueResult res = run_continuation(cfg, s_hat, log);

  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("s_hat", s_hat);
  t.add_meta("J", (long long)res.J);
  t.add_meta("r_maxwell_hat", res.r_M);
  t.add_meta("stop_reason", res.branch.stop_reason);
  t.add_meta("folds", (long long)res.branch.folds.size());
  if (res.measured) {
    t.add_meta("width_numeric", res.meas.width);
    t.add_meta("r_left", res.meas.r_left);
    t.add_meta("r_right", res.meas.r_right);
    t.add_meta("folds_used", (long long)res.meas.folds_used);
  }
  t.set_columns({"index", "r", "measure", "fold"});
  std::vector<bool> is_fold(res.branch.points.size(), false);
  for (const auto& f : res.branch.folds) is_fold[f.point_index] = true;
  for (std::size_t i = 0; i < res.branch.points.size(); ++i) {
    const auto& pt = res.branch.points[i];
    t.add_row({(long long)i, pt.r, pt.measure, (long long)(is_fold[i] ? 1 : 0)});
  }
  emit(t, cfg, out);

  // Final-state export j,z,u.
  if (!res.branch.points.empty()) {
    std::string spath = cfg.state_output;
    if (spath.empty() && !cfg.output.empty()) spath = cfg.output + ".state.csv";
    if (!spath.empty()) {
      TableWriter st;
      stamp_metadata(st, cfg, "1");
      st.set_columns({"j", "z", "u"});
      const auto& u = res.branch.points.back().u;
      const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
      for (std::size_t j = 0; j < u.size(); ++j) {
        st.add_row({(long long)j, j * o.spacing, u[j]});
      }
      std::ofstream os(spath, std::ios::binary);
      if (!os) fail(ErrorCode::Config, "cannot open output " + spath);
      st.write_csv(os, cfg.metadata);
    }
  }
  return kExitOk;
}

int run_depin(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const double s_hat = cfg.s_hat.front();
  const NonlinearitySpec spec = model_at(cfg, s_hat);
  const MaxwellData mx = maxwell(spec);
  const int J = cfg.J > 0 ? cfg.J : default_domain_size(spec, o);
  const double lam = lambda_abs_for(cfg, o);
  const double W = width_unscaled(cfg.model, o, s_hat, lam);

  LatticeProblem prob = make_problem(spec, o, J, mx.r_M);
  DepinOptions opts;
  opts.T_max = cfg.T_max;

  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("s_hat", s_hat);
  t.add_meta("J", (long long)J);
  t.add_meta("lambda_abs", lam);
  t.add_meta("width_analytic", W);
  t.add_meta("r_maxwell_hat", mx.r_M);
  t.add_meta("T_max", cfg.T_max);
  t.set_columns({"side", "threshold_r", "delta_from_maxwell",
                 "width_analytic", "ratio_to_width"});

  auto run_side = [&](Side side) {
    const double sgn = side == Side::right ? 1.0 : -1.0;
    const std::pair<double, double> bracket{
        mx.r_M, mx.r_M + sgn * cfg.depin_factor * W};
    const double thr = depinning_threshold(prob, side, bracket, opts);
    const double delta = thr - mx.r_M;
    t.add_row({std::string(side == Side::right ? "right" : "left"), thr, delta,
               W, std::abs(delta) / W});
    log << "depin " << (side == Side::right ? "right" : "left")
        << ": threshold=" << format_double(thr)
        << " |delta|/width=" << format_double(std::abs(delta) / W) << "\n";
  };
  if (cfg.side == "right" || cfg.side == "both") run_side(Side::right);
  if (cfg.side == "left" || cfg.side == "both") run_side(Side::left);
  emit(t, cfg, out);
  return kExitOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Orientation o = make_orientation(cfg.m1, cfg.m2, cfg.lattice);
  const double lam = lambda_abs_for(cfg, o);

  // Independent sweep points run concurrently; results assemble in sweep
  // order so the output is deterministic.
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int threads = cfg.threads > 0 ? cfg.threads : std::max(1, hw);
  std::vector<std::future<ContinueResult>> futures;
  std::vector<ContinueResult> results(cfg.s_hat.size());
  std::vector<std::ostringstream> logs(cfg.s_hat.size());
  std::size_t next = 0;
  while (next < cfg.s_hat.size()) {
    const std::size_t batch =
        std::min<std::size_t>(threads, cfg.s_hat.size() - next);
    futures.clear();
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t idx = next + b;
      futures.push_back(std::async(std::launch::async, [&, idx] {
        return run_continuation(cfg, cfg.s_hat[idx], logs[idx]);
      }));
    }
    for (std::size_t b = 0; b < batch; ++b) results[next + b] = futures[b].get();
    next += batch;
  }

  TableWriter t;
  stamp_metadata(t, cfg, "1");
  t.add_meta("lambda_abs", lam);
  t.set_columns({"s_hat", "width_analytic", "width_numeric", "rel_error",
                 "folds_used", "J", "r_left", "r_right"});
  for (std::size_t i = 0; i < cfg.s_hat.size(); ++i) {
    log << logs[i].str();
    const double s = cfg.s_hat[i];
    const double wa = width_unscaled(cfg.model, o, s, lam);
    const ContinueResult& res = results[i];
    if (!res.measured) {
      fail(ErrorCode::InsufficientFolds,
           "continuation at s_hat=" + format_double(s) +
               " produced too few folds for a width");
    }
    // The formula value corresponds to the full fold-to-fold span of the
    // pinning region, which is exactly what measure_pinning_width returns.
    const double wn = res.meas.width;
    const double rel = std::abs(wn - wa) / wa;
    t.add_row({s, wa, wn, rel, (long long)res.meas.folds_used,
               (long long)res.J, res.meas.r_left, res.meas.r_right});
    log << "compare s_hat=" << format_double(s)
        << ": analytic=" << format_double(wa)
        << " numeric=" << format_double(wn)
        << " rel_error=" << format_double(rel) << "\n";
  }
  emit(t, cfg, out);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    if (cfg.command == "eigen") return run_eigen(cfg, out, log);
    if (cfg.command == "lambda") return run_lambda(cfg, out, log);
    if (cfg.command == "width") return run_width(cfg, out, log);
    if (cfg.command == "diagram") return run_diagram(cfg, out, log);
    if (cfg.command == "continue") return run_continue(cfg, out, log);
    if (cfg.command == "depin") return run_depin(cfg, out, log);
    if (cfg.command == "compare") return run_compare(cfg, out, log);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) {
      log << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  log << "config error: unknown command\n";
  return kExitConfig;
}

}  // namespace latpin
