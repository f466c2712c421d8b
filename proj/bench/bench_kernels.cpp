#include <benchmark/benchmark.h>

#include "statlab/kernels.hpp"
#include "statlab/zoo.hpp"

namespace {

using namespace statlab;

const PureEval& spiral() {
  static const SpiralCounterexample sp(1.0);
  static const PureEval f = [](const Vector& x) { return spiral_eval(sp, x); };
  return f;
}

const PureEval& channel(std::size_t d) {
  static const ChannelInstance c(Vector::basis(d, 0) * 0.3);
  static const PureEval f = [](const Vector& x) { return channel_eval(c, x); };
  return f;
}

void BM_norm_sweep(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Rng rng(1);
  for (auto _ : state) {
    NormSweep s = gradient_norm_sweep(
        spiral(), [](std::size_t, Rng& r) { return sample_ball(2, 2.0, r); }, n, rng, false, exec);
    benchmark::DoNotOptimize(s.min_norm);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_smoothed_channel(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 200;
  const PureEval& f = channel(d);
  const Vector x = Vector::basis(d, 1);
  const Rng rng(2);
  for (auto _ : state) {
    SmoothedEstimate e = smoothed_estimate(f, x, 0.1, n, rng, exec);
    benchmark::DoNotOptimize(e.mean_value);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_lipschitz_spiral(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ValueEval f = [](const Vector& x) { return spiral()(x).value; };
  const Rng rng(3);
  for (auto _ : state) {
    LipschitzSweep s = lipschitz_ratio_sweep(
        f, [](std::size_t, Rng& r) { return std::make_pair(sample_ball(2, 2.0, r), sample_ball(2, 2.0, r)); }, n,
        rng, exec);
    benchmark::DoNotOptimize(s.max_ratio);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

}  // namespace

BENCHMARK_CAPTURE(BM_norm_sweep, serial, Exec::serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_norm_sweep, omp, Exec::parallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_smoothed_channel, serial, Exec::serial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_smoothed_channel, omp, Exec::parallel)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_lipschitz_spiral, serial, Exec::serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_lipschitz_spiral, omp, Exec::parallel)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
