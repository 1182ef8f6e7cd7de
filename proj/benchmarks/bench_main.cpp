#include <benchmark/benchmark.h>

#include <cmath>

#include "relcount/counting.hpp"
#include "relcount/fuchsian.hpp"
#include "relcount/huber.hpp"
#include "relcount/special_functions.hpp"

using namespace relcount;

namespace {

const GroupPresentation& demo() {
  static const GroupPresentation pres = parse_group_file(std::string(RELCOUNT_DATA_DIR) + "/demo_group.txt");
  return pres;
}

void BM_LogGamma(benchmark::State& state) {
  const cplx z(0.3, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(log_gamma(z));
}
BENCHMARK(BM_LogGamma)->Arg(1)->Arg(100)->Arg(10000);

void BM_Hyp2f1(benchmark::State& state) {
  const double s = 0.75;
  const double z = -std::pow(10.0, static_cast<double>(state.range(0)) / 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(hyp2f1((1.0 - s) / 2.0, s / 2.0, 0.5, z));
}
BENCHMARK(BM_Hyp2f1)->DenseRange(-2, 6, 2);

void BM_HuberClosed(benchmark::State& state) {
  const auto ind = SmoothedIndicator::with_default_width(100.0, Sign::kPlus);
  const auto sp = SpectralParameter::from_t(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(huber_closed(ind, sp));
}
BENCHMARK(BM_HuberClosed)->Arg(2)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_HuberNumeric(benchmark::State& state) {
  const auto ind = SmoothedIndicator::with_default_width(100.0, Sign::kPlus);
  const auto sp = SpectralParameter::from_t(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(huber_numeric(ind, sp));
}
BENCHMARK(BM_HuberNumeric)->Arg(2)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_CosetInventory(benchmark::State& state) {
  const double X = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const Inventory inv = coset_inventory(demo(), X, 30);
    benchmark::DoNotOptimize(inv.reps.size());
  }
}
BENCHMARK(BM_CosetInventory)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_MomentScan(benchmark::State& state) {
  const Inventory inv = coset_inventory(demo(), 800.0, 30);
  const auto spectral = constant_spectrum(demo());
  for (auto _ : state) benchmark::DoNotOptimize(moment_scan(inv, spectral, 400.0, 64).mean_square);
}
BENCHMARK(BM_MomentScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
