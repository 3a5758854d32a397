#include <benchmark/benchmark.h>

#include "spectral/epd.hpp"
#include "spectral/hooft.hpp"
#include "spectral/models.hpp"
#include "spectral/periods.hpp"
#include "spectral/scaling.hpp"
#include "spectral/scan.hpp"

using namespace spectral;

namespace {

CVec cubic_betas(double s) {
  const auto m = models::cubic_m1_curve(1.0, s, 0);
  return {m.beta1, m.beta2};
}

void BM_FindRoots(benchmark::State& state) {
  CVec c;
  for (int k = 0; k <= state.range(0); ++k) c.push_back(cplx(std::cos(1.3 * k), std::sin(0.7 * k)));
  const ComplexPoly p(c);
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(p));
}
BENCHMARK(BM_FindRoots)->Arg(4)->Arg(8)->Arg(16);

void BM_Discriminant(benchmark::State& state) {
  const ComplexPoly p = build_curve(Potential::cubic(1.0), CVec{0.4, -0.7}).P();
  for (auto _ : state) benchmark::DoNotOptimize(discriminant(p));
}
BENCHMARK(BM_Discriminant);

void BM_Classify(benchmark::State& state) {
  const SpectralCurve curve = build_curve(Potential::cubic(1.0), CVec{0.4, -0.7});
  for (auto _ : state) benchmark::DoNotOptimize(classify(curve));
}
BENCHMARK(BM_Classify);

void BM_SolveHooftCubic(benchmark::State& state) {
  const Potential W = Potential::cubic(1.0);
  // Seeded from a neighbouring charge so Newton has work to do.
  const CVec seed = cubic_betas(0.12);
  const CutSystem cs = CutSystem::default_for(seed);
  for (auto _ : state) benchmark::DoNotOptimize(solve_from_hooft(W, CVec{0.1}, cs, seed));
}
BENCHMARK(BM_SolveHooftCubic)->Unit(benchmark::kMillisecond);

void BM_Prepotential(benchmark::State& state) {
  const CVec b = cubic_betas(0.1);
  const CurveBranch br(Potential::cubic(1.0), CutGeometry(b, CutSystem::default_for(b)));
  for (auto _ : state) benchmark::DoNotOptimize(prepotential(br));
}
BENCHMARK(BM_Prepotential)->Unit(benchmark::kMicrosecond);

void BM_EpdValue(benchmark::State& state) {
  const CVec b = cubic_betas(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(epd_value(b, CVec{-0.4}, Potential::cubic(1.0)));
}
BENCHMARK(BM_EpdValue)->Unit(benchmark::kMicrosecond);

void BM_FlowT(benchmark::State& state) {
  const Potential W = Potential::cubic(1.0);
  const CVec b = cubic_betas(-0.3);
  for (auto _ : state) benchmark::DoNotOptimize(flow_t(W, b, {CVec{1.2}, CVec{1.5}}));
}
BENCHMARK(BM_FlowT)->Unit(benchmark::kMillisecond);

void BM_Painleve1(benchmark::State& state) {
  std::vector<double> grid;
  for (int k = 0; k <= 1600; ++k) grid.push_back(-16.0 + 0.01 * k);
  for (auto _ : state) benchmark::DoNotOptimize(painleve1(grid));
}
BENCHMARK(BM_Painleve1)->Unit(benchmark::kMillisecond);

void BM_ScanCubicPlane(benchmark::State& state) {
  ScanSpec sp;
  sp.W = Potential::cubic(1.0);
  sp.x = {"t2", 1, 1.0, -2.0, 1.0, 101};
  sp.y = {"s", 0, -4.0, -1.0, 1.0, 101};
  for (auto _ : state) benchmark::DoNotOptimize(scan_grid(sp, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ScanCubicPlane)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
