#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "wfarey/farey.hpp"
#include "wfarey/limit_law.hpp"
#include "wfarey/quadrature.hpp"
#include "wfarey/section.hpp"

using namespace wfarey;

namespace {

const Unit& example() {
  static const Unit u = load_unit(std::string(WFAREY_DATA_DIR) + "/example1.unit");
  return u;
}

void BM_BruteForce(benchmark::State& state) {
  const Rational Q(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_farey(example(), Q).size());
}
BENCHMARK(BM_BruteForce)->Arg(200)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_BruteForceThreads(benchmark::State& state) {
  const Rational Q(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_farey(example(), Q, {kDefaultEnumerationCap, 4}).size());
}
BENCHMARK(BM_BruteForceThreads)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Recurrence(benchmark::State& state) {
  const Rational Q(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_farey(example(), Q).size());
}
BENCHMARK(BM_Recurrence)->Arg(200)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_QuadratureKink(benchmark::State& state) {
  const double kink = 1.0 / std::numbers::pi;
  std::vector<double> knots;
  if (state.range(0)) knots.push_back(kink);
  auto f = [kink](double s) { return std::abs(s - kink); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(QuadratureRequest{f, 0.0, 1.0, knots, 1e-12}).value);
}
BENCHMARK(BM_QuadratureKink)->Arg(0)->Arg(1);

void BM_WeightedPdf(benchmark::State& state) {
  static const LimitLaw law(example());
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(law.pdf(z));
    z = z < 3.0 ? z + 0.01 : 0.1;
  }
}
BENCHMARK(BM_WeightedPdf);

void BM_SampleP(benchmark::State& state) {
  static const LimitLaw law(example());
  for (auto _ : state) benchmark::DoNotOptimize(sample_limit_P(law, 10000, 1).size());
}
BENCHMARK(BM_SampleP)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
