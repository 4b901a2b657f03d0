#include <benchmark/benchmark.h>

#include "rotlab/rotation.hpp"

using namespace rotlab;

namespace {

std::shared_ptr<const SurfaceGroup> genus2() {
  static auto g = std::make_shared<const SurfaceGroup>(SurfaceGroup::build(2));
  return g;
}

LocatedPoint on_core() {
  auto f = axis_of(*genus2(), parse_word("A2", 2)).axis.frame();
  return locate(*genus2(), DiskPoint::from(f.point(0.05, 0.1)));
}

void BM_TwistStep(benchmark::State& state) {
  TwistSystem tw(genus2(), parse_word("A2", 2), 0.8, 0.3);
  LocatedPoint p = on_core();
  for (auto _ : state) {
    p = tw.step(p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_TwistStep);

void BM_IterateAndSample(benchmark::State& state) {
  TwistSystem tw(genus2(), parse_word("A2", 2), 0.8, 0.3);
  Direction core = axis_direction(*genus2(), parse_word("A2", 2));
  for (auto _ : state) {
    auto tr = iterate(tw, on_core(), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(rotation_sample(*genus2(), tr, core));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IterateAndSample)->RangeMultiplier(4)->Range(64, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ScanTwist(benchmark::State& state) {
  TwistSystem tw(genus2(), parse_word("A2", 2), 0.8, 0.3);
  auto seeds = tube_seeds(*genus2(), parse_word("A2", 2), {}, 0.3, static_cast<std::size_t>(state.range(0)), 1);
  ScanOptions opt;
  opt.n = 500;
  for (auto _ : state) benchmark::DoNotOptimize(scan_rotation_set(tw, seeds, opt));
}
BENCHMARK(BM_ScanTwist)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
