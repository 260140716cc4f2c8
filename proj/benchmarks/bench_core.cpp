#include <benchmark/benchmark.h>

#include "latpin/continuation.hpp"
#include "latpin/eigenvalues.hpp"
#include "latpin/lateterms.hpp"
#include "latpin/predict.hpp"

namespace {

using namespace latpin;

void BM_symbol(benchmark::State& state) {
  const Orientation o = make_orientation(5, 2, LatticeKind::square);
  const Stencil st = stencil(LatticeKind::square);
  std::complex<double> kappa(6.4, 1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symbol(st, o, kappa));
    kappa += std::complex<double>(1e-9, 0.0);
  }
}
BENCHMARK(BM_symbol);

void BM_complex_smallest(benchmark::State& state) {
  const Orientation o =
      make_orientation(static_cast<int>(state.range(0)), 1, LatticeKind::square);
  for (auto _ : state) {
    benchmark::DoNotOptimize(complex_smallest(o));
  }
}
BENCHMARK(BM_complex_smallest)->Arg(5)->Arg(20)->Arg(59);

void BM_recurrence(benchmark::State& state) {
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_recurrence(spec, o, n_max));
  }
}
BENCHMARK(BM_recurrence)->Arg(40)->Arg(80)->Arg(160);

void BM_recurrence_quintic(benchmark::State& state) {
  const auto spec = cubic_quintic_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_recurrence(spec, o, n_max));
  }
}
BENCHMARK(BM_recurrence_quintic)->Arg(60)->Arg(120);

void BM_newton_front(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  LatticeProblem p = make_problem(spec, o, J, 0.0);
  const auto seed = front_seed(p, 0.5 * (J - 1) * p.spacing());
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton(p, seed));
  }
}
BENCHMARK(BM_newton_front)->Arg(300)->Arg(700);

void BM_arclength_steps(benchmark::State& state) {
  const auto spec = cubic_const_model(1.0);
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  const int J = 300;
  LatticeProblem p = make_problem(spec, o, J, 0.0);
  const auto seed = front_seed(p, 0.5 * (J - 1) * p.spacing());
  StopPolicy stop;
  stop.max_points = 50;
  stop.max_folds = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(continue_branch(p, seed, 0.0, {}, stop));
  }
}
BENCHMARK(BM_arclength_steps);

void BM_width_formula(benchmark::State& state) {
  const auto fa = front_constants(cubic_const_model(1.0));
  const Orientation o = make_orientation(1, 0, LatticeKind::square);
  double s = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pinning_width(fa, o, std::sqrt(s), 2535.0));
    s += 1e-9;
  }
}
BENCHMARK(BM_width_formula);

}  // namespace

BENCHMARK_MAIN();
