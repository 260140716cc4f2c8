#include "latpin/lateterms.hpp"

#include <cmath>
#include <numbers>

#include "latpin/errors.hpp"

namespace latpin {

namespace {

constexpr double kPi = std::numbers::pi;

double lg(double x) { return std::lgamma(x); }

struct RecurrenceTables {
  int n_max;
  double beta;
  double gamma;
  double U0;
  int conv_order;          // 3 for the cubic model, 5 for the quintic
  double ln_kappa;
  std::vector<double> lgB; // lg(2j + beta)
  std::vector<double> cp;  // taylor coefficients, cp[p-1] = c_p
};

/// Solves for V_n given V_0..V_{n-1}. The relation at index n in normalized
/// variables:
///   sum_{p=1}^{n+1} c_p R(n,p) V_{n-p+1} = (m-fold convolution of U)_n,
/// R(n,p) = Gamma(2n+2+gamma)/Gamma(2n-2p+2+gamma)
///          * Gamma(2(n-p+1)+beta)/Gamma(2n+beta) * kappa1^{2p-2}.
/// The convolution is evaluated with V_n treated as zero, which drops exactly
/// the m * U0^{m-1} V_n terms moved to the left-hand side.
double solve_step(const RecurrenceTables& t, const std::vector<double>& V,
                  int n) {
  const double g = t.gamma;
  const double lgt_top = lg(2.0 * n + 2.0 + g);
  const double lgB_n = t.lgB[n];

  double lhs = 0.0;
  for (int p = 2; p <= n + 1; ++p) {
    const int j = n - p + 1;
    if (t.cp[p - 1] == 0.0) continue;
    const double w = std::exp(lgt_top - lg(2.0 * (n - p) + 2.0 + g) +
                              t.lgB[j] - lgB_n + (2.0 * p - 2.0) * t.ln_kappa);
    lhs += t.cp[p - 1] * w * V[j];
  }

  double conv = 0.0;
  const double base = -lgB_n - (t.conv_order - 1) * t.beta * t.ln_kappa;
  if (t.conv_order == 3) {
    for (int p1 = 0; p1 <= n; ++p1) {
      if (V[p1] == 0.0) continue;
      const double l1 = t.lgB[p1];
      for (int p2 = 0; p2 <= n - p1; ++p2) {
        const int p3 = n - p1 - p2;
        if (V[p2] == 0.0 || V[p3] == 0.0) continue;
        conv += V[p1] * V[p2] * V[p3] *
                std::exp(base + l1 + t.lgB[p2] + t.lgB[p3]);
      }
    }
  } else {
    for (int p1 = 0; p1 <= n; ++p1) {
      if (V[p1] == 0.0) continue;
      const double l1 = t.lgB[p1];
      for (int p2 = 0; p2 <= n - p1; ++p2) {
        if (V[p2] == 0.0) continue;
        const double l2 = l1 + t.lgB[p2];
        for (int p3 = 0; p3 <= n - p1 - p2; ++p3) {
          if (V[p3] == 0.0) continue;
          const double l3 = l2 + t.lgB[p3];
          for (int p4 = 0; p4 <= n - p1 - p2 - p3; ++p4) {
            const int p5 = n - p1 - p2 - p3 - p4;
            if (V[p4] == 0.0 || V[p5] == 0.0) continue;
            conv += V[p1] * V[p2] * V[p3] * V[p4] * V[p5] *
                    std::exp(base + l3 + t.lgB[p4] + t.lgB[p5]);
          }
        }
      }
    }
  }

  // c_1 R(n,1) = (2n+gamma)(2n+1+gamma); the convolution contributes
  // m U0^{m-1} V_n on the other side.
  const double m = t.conv_order;
  const double diag = t.cp[0] * (2.0 * n + g) * (2.0 * n + 1.0 + g) -
                      m * std::pow(t.U0, m - 1.0);
  return (conv - lhs) / diag;
}

}  // namespace

std::vector<double> taylor_coefficients(const Stencil& st, const Orientation& o,
                                        int p_max) {
  if (p_max < 1) fail(ErrorCode::Config, "p_max must be >= 1");
  const auto proj = projections(st, o);
  std::vector<double> c(p_max, 0.0);
  for (int p = 1; p <= p_max; ++p) {
    const double lfac = lg(2.0 * p + 1.0);
    double acc = 0.0;
    for (const auto& pr : proj) {
      if (pr.delta == 0.0) continue;
      acc += pr.weight * std::exp(2.0 * p * std::log(std::abs(pr.delta)) - lfac);
    }
    c[p - 1] = acc;
  }
  return c;
}

int default_n_max(ModelId id) {
  return id == ModelId::cubic_const ? 80 : 120;
}

RecurrenceRun iterate_recurrence(const NonlinearitySpec& spec,
                                 const Orientation& o, int n_max) {
  if (spec.id == ModelId::custom) {
    fail(ErrorCode::Unsupported,
         "late-term recurrences are printed only for the built-in models");
  }
  if (n_max < 4 || n_max > 200) {
    fail(ErrorCode::Config, "n_max must lie in [4, 200]");
  }

  RecurrenceTables t;
  t.n_max = n_max;
  t.gamma = spec.id == ModelId::cubic_const ? 1.0 : 0.5;
  t.beta = 2.0 * t.gamma + 2.0;
  t.U0 = spec.id == ModelId::cubic_const ? std::sqrt(2.0)
                                         : std::pow(0.75, 0.25);
  t.conv_order = spec.id == ModelId::cubic_const ? 3 : 5;
  const double kappa1 = o.kappa1();
  t.ln_kappa = std::log(kappa1);
  t.lgB.resize(n_max + 1);
  for (int j = 0; j <= n_max; ++j) t.lgB[j] = lg(2.0 * j + t.beta);
  t.cp = taylor_coefficients(stencil(o.kind), o, n_max + 1);
  if (std::abs(t.cp[0] - 1.0) > 1e-12) {
    fail(ErrorCode::Overflow, "c_1 != 1: operator is not a discrete Laplacian");
  }

  RecurrenceRun run;
  run.model = spec.id;
  run.o = o;
  run.n_max = n_max;
  run.kappa1 = kappa1;
  run.beta = t.beta;
  run.V.reserve(n_max + 1);
  run.V.push_back(t.U0 * std::exp(t.beta * t.ln_kappa - t.lgB[0]));
  for (int n = 1; n <= n_max; ++n) {
    run.V.push_back(0.0);  // placeholder so the convolution skips V_n terms
    const double v = solve_step(t, run.V, n);
    if (!std::isfinite(v)) {
      fail(ErrorCode::Overflow,
           "normalized recurrence left double range (beta wiring is wrong)");
    }
    run.V.back() = v;
  }
  return run;
}

double lambda_prefactor(ModelId id) {
  switch (id) {
    case ModelId::cubic_const: return 5.0 * std::sqrt(2.0);
    case ModelId::cubic_quintic: return std::pow(12.0, 0.25);
    case ModelId::custom: break;
  }
  fail(ErrorCode::Unsupported, "no prefactor for custom models");
}

namespace {

/// Order-2 Richardson in 1/n over a trailing window: stage one removes the
/// 1/n correction, stage two the 1/n^2 one.
double richardson2(const std::vector<double>& est, int n_last, int window) {
  const int len = std::min<int>(window, est.size());
  std::vector<double> e(est.end() - len, est.end());
  std::vector<double> n(len);
  for (int i = 0; i < len; ++i) n[i] = n_last - (len - 1) + i;
  std::vector<double> a(len - 1);
  for (int i = 1; i < len; ++i) {
    a[i - 1] = (n[i] * e[i] - n[i - 1] * e[i - 1]) / (n[i] - n[i - 1]);
  }
  std::vector<double> b(len - 2);
  for (int i = 1; i < len - 1; ++i) {
    const double w1 = n[i + 1] * n[i + 1], w0 = n[i] * n[i];
    b[i - 1] = (w1 * a[i] - w0 * a[i - 1]) / (w1 - w0);
  }
  return b.back();
}

}  // namespace

LambdaEstimate extract_lambda(const RecurrenceRun& run,
                              const NonlinearitySpec& spec,
                              const Orientation& o) {
  if (spec.id != run.model) {
    fail(ErrorCode::Config, "recurrence run belongs to a different model");
  }
  const double pref = lambda_prefactor(run.model);
  LambdaEstimate out;
  out.n_used = run.n_max;
  out.estimates.resize(run.V.size());
  for (std::size_t n = 0; n < run.V.size(); ++n) {
    out.estimates[n] = pref * ((n % 2 == 0) ? -run.V[n] : run.V[n]);
  }

  // Tail sign changes signal a dominant complex eigenvalue: the estimates
  // then oscillate with n-period pi/Arg(K) instead of settling.
  const int tail_lo = run.n_max / 2;
  std::vector<int> flips;
  for (int n = tail_lo + 1; n <= run.n_max; ++n) {
    if (out.estimates[n] * out.estimates[n - 1] < 0.0) flips.push_back(n);
  }
  if (!flips.empty()) {
    out.dominance = Dominance::complex_dominant;
    out.converged = false;
    if (flips.size() >= 2) {
      out.oscillation_period =
          2.0 * double(flips.back() - flips.front()) / double(flips.size() - 1);
    }
    out.value = out.estimates.back();
    return out;
  }

  out.dominance = Dominance::real_dominant;
  out.value = richardson2(out.estimates, run.n_max, 12);
  bool settled = true;
  for (int n = run.n_max - 4; n <= run.n_max; ++n) {
    if (std::abs(out.estimates[n] - out.estimates[n - 1]) >
        1e-3 * std::abs(out.value)) {
      settled = false;
    }
  }
  out.converged = settled && std::isfinite(out.value);
  return out;
}

double lambda_value(const NonlinearitySpec& spec, const Orientation& o,
                    int n_max) {
  if (n_max <= 0) n_max = default_n_max(spec.id);
  const RecurrenceRun run = iterate_recurrence(spec, o, n_max);
  const LambdaEstimate est = extract_lambda(run, spec, o);
  if (!est.converged) {
    if (est.dominance == Dominance::complex_dominant) {
      fail(ErrorCode::ComplexDominance,
           "complex eigenvalue dominates the late terms for (" +
               std::to_string(o.m1) + "," + std::to_string(o.m2) +
               "); Lambda is not extractable by this recurrence");
    }
    fail(ErrorCode::NoConvergence, "Lambda estimates did not settle");
  }
  return est.value;
}

}  // namespace latpin
