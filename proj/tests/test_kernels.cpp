#include <doctest.h>

#include <atomic>

#include "statlab/error.hpp"
#include "statlab/kernels.hpp"
#include "statlab/zoo.hpp"

using namespace statlab;

namespace {

const SpiralCounterexample kSpiral(1.0);
const PureEval kF = [](const Vector& x) { return spiral_eval(kSpiral, x); };
const ValueEval kV = [](const Vector& x) { return spiral_eval(kSpiral, x).value; };

}  // namespace

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  const Rng rng(17);
  const PointSampler sample = [](std::size_t, Rng& s) { return sample_ball(2, 2.0, s); };
  const NormSweep a = serial::gradient_norm_sweep(kF, sample, 50000, rng, false);
  const NormSweep b = omp::gradient_norm_sweep(kF, sample, 50000, rng, false);
  CHECK(a.min_norm == b.min_norm);
  CHECK(a.max_norm == b.max_norm);
  CHECK(a.evaluated == b.evaluated);

  const PairSampler pairs = [](std::size_t, Rng& s) { return std::make_pair(sample_ball(2, 3.0, s), sample_ball(2, 3.0, s)); };
  CHECK(serial::lipschitz_ratio_sweep(kV, pairs, 50000, rng).max_ratio ==
        omp::lipschitz_ratio_sweep(kV, pairs, 50000, rng).max_ratio);

  const SmoothedEstimate sa = serial::smoothed_estimate(kF, {0.2, -0.1}, 0.5, 20000, rng);
  const SmoothedEstimate sb = omp::smoothed_estimate(kF, {0.2, -0.1}, 0.5, 20000, rng);
  CHECK(sa.mean_grad == sb.mean_grad);
  CHECK(sa.mean_value == sb.mean_value);
  CHECK(sa.grad_stderr == sb.grad_stderr);
  CHECK(serial::smoothed_value(kV, {0.2, -0.1}, 0.5, 20000, rng) ==
        omp::smoothed_value(kV, {0.2, -0.1}, 0.5, 20000, rng));
  // smoothed value shares the directions of the gradient estimate
  CHECK(serial::smoothed_value(kV, {0.2, -0.1}, 0.5, 20000, rng) == sa.mean_value);

  std::vector<Vector> pts;
  Rng s = rng.derive("batch");
  for (int i = 0; i < 1000; ++i) pts.push_back(sample_ball(2, 1.0, s));
  const auto ea = serial::evaluate_batch(kF, pts);
  const auto eb = omp::evaluate_batch(kF, pts);
  CHECK(ea == eb);
}

TEST_CASE("differentiable-only sweep skips kinks") {
  const PureEval f = [](const Vector& x) { return warga_eval(x); };
  const PointSampler sample = [](std::size_t i, Rng& s) {
    return (i % 10 == 0) ? Vector::zeros(2) : sample_ball(2, 1.0, s);
  };
  const NormSweep n = gradient_norm_sweep(f, sample, 1000, Rng(1), true);
  CHECK(n.skipped >= 100);
  CHECK(n.evaluated + n.skipped == 1000);
}

TEST_CASE("exceptions inside parallel regions reach the caller") {
  const PureEval bad = [](const Vector& x) -> FirstOrderReply {
    if (x[0] > 0.9) throw DegenerateInput("too far right");
    return {0.0, x, true};
  };
  const PointSampler sample = [](std::size_t, Rng& s) { return sample_ball(2, 1.0, s); };
  CHECK_THROWS_AS(omp::gradient_norm_sweep(bad, sample, 10000, Rng(2), false), DegenerateInput);
  CHECK_THROWS_AS(serial::gradient_norm_sweep(bad, sample, 10000, Rng(2), false), DegenerateInput);
}

TEST_CASE("for_each_index visits every index once") {
  std::vector<std::atomic<int>> hits(10000);
  omp::for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) REQUIRE(h.load() == 1);
}

TEST_CASE("smoothing directions are common random numbers") {
  const Rng rng(3);
  CHECK(smoothing_direction(3, 7, rng) == smoothing_direction(3, 7, rng));
  CHECK_FALSE(smoothing_direction(3, 7, rng) == smoothing_direction(3, 8, rng));
  CHECK(norm(smoothing_direction(3, 7, rng)) <= 1.0);
}
