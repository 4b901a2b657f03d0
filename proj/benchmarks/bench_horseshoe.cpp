#include <benchmark/benchmark.h>

#include "rotlab/horseshoe.hpp"

using namespace rotlab;

namespace {

void BM_MarkovCheck(benchmark::State& state) {
  auto square = MarkedRectangle::axis_box(0, 0, 1, 1);
  auto thin = MarkedRectangle::axis_box(0.4, -0.5, 0.6, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(markovian_check(thin, square));
}
BENCHMARK(BM_MarkovCheck);

void BM_FixedPoint(benchmark::State& state) {
  auto square = MarkedRectangle::axis_box(0, 0, 1, 1);
  auto leg = [](Vec2 z) { return Vec2{z.x / 3 + 1.0 / 3, 3 * z.y - 1}; };
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_search(square, leg));
}
BENCHMARK(BM_FixedPoint)->Unit(benchmark::kMicrosecond);

void BM_HorseshoeAudit(benchmark::State& state) {
  auto m = linear_two_leg_model();
  auto cert = certify_horseshoe(m, MarkedRectangle::axis_box(0, 0, 1, 1));
  HorseshoeAuditOptions opt;
  opt.max_period = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(horseshoe_audit(m, cert, {0, 1}, opt));
}
BENCHMARK(BM_HorseshoeAudit)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
