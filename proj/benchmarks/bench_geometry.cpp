#include <benchmark/benchmark.h>

#include <random>

#include "rotlab/geodesic_lab.hpp"
#include "rotlab/rotation.hpp"

using namespace rotlab;

namespace {

const SurfaceGroup& genus2() {
  static const SurfaceGroup g = SurfaceGroup::build(2);
  return g;
}

std::vector<DiskPoint> points(std::size_t count, double max_radius) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<DiskPoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    double r = max_radius * std::sqrt(u(rng)), a = 2 * M_PI * u(rng);
    out.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return out;
}

void BM_Distance(benchmark::State& state) {
  auto pts = points(1024, 0.99);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hyp_distance(pts[i % 1024], pts[(i + 1) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_Distance);

void BM_Project(benchmark::State& state) {
  auto pts = points(1024, 0.99);
  Geodesic g = Geodesic::from_angles(0.3, 2.9);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project_onto_geodesic(pts[i++ % 1024], g));
}
BENCHMARK(BM_Project);

void BM_Locate(benchmark::State& state) {
  const auto& g = genus2();
  double radius = 1 - std::pow(10.0, -static_cast<double>(state.range(0)));
  auto pts = points(256, radius);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(locate(g, pts[i++ % 256]));
}
BENCHMARK(BM_Locate)->Arg(1)->Arg(2)->Arg(3);

void BM_EvaluateMp(benchmark::State& state) {
  const auto& g = genus2();
  Word w;
  for (int k = 0; k < state.range(0); ++k) w.letters.push_back((3 * k + 1) % 8);
  w = reduce(w);
  MpPrecision digits(digits_for_words(g, w.size()));
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate_mp(w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvaluateMp)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_SelfIntersection(benchmark::State& state) {
  const auto& g = genus2();
  // A simple class, so the search exhausts the radius.
  Word w = parse_word("a1", 2);
  for (auto _ : state) benchmark::DoNotOptimize(self_intersection_witness(g, w, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SelfIntersection)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ClassifyCovering(benchmark::State& state) {
  const auto& g = genus2();
  for (auto _ : state)
    benchmark::DoNotOptimize(classify_covering(g, parse_word("a1", 2), parse_word("b1", 2), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ClassifyCovering)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
