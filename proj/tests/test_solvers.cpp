#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statlab/adversary.hpp"
#include "statlab/error.hpp"
#include "statlab/kernels.hpp"
#include "statlab/solvers.hpp"
#include "test_util.hpp"

using namespace statlab;

namespace {

FunctionOracle shifted_quadratic(Vector a, double scale) {
  const std::size_t d = a.dim();
  return FunctionOracle(d, [a, scale](const Vector& x) {
    const Vector z = x - a;
    return FirstOrderReply{scale * norm_squared(z), z * (2.0 * scale), true};
  });
}

Transcript play_chain(const AlgorithmDescriptor& alg, int T) {
  const auto hq = std::make_shared<const HardQuadratic>(T, 2 * static_cast<std::size_t>(T));
  ChainQuadraticOracle o(ChainGeometry::natural(hq));
  return play(alg, o, static_cast<std::size_t>(T), hq->d(), Rng(0));
}

double chain_distance(const Transcript& t, int T) {
  return min_distance_to(t, HardQuadratic(T, 2 * static_cast<std::size_t>(T)).x_star());
}

}  // namespace

TEST_CASE("subgradient method hand iteration") {
  const Vector a{1.0, -2.0, 4.0};
  FunctionOracle o = shifted_quadratic(a, 1.0);
  const Transcript t = play(subgradient_method({StepKind::constant, 0.25}), o, 2, 3, Rng(0));
  CHECK(t[1].query == a * 0.5);
}

TEST_CASE("steepest descent solves an isotropic quadratic in one step") {
  const Vector a{0.5, -1.5};
  FunctionOracle o = shifted_quadratic(a, 0.5);
  const Transcript t = play(steepest_descent_exact(), o, 3, 2, Rng(0));
  REQUIRE(t.size() == 3);
  CHECK(norm_inf(t[2].query - a) <= 1e-15);
}

TEST_CASE("span solvers on the chain quadratic") {
  for (int T : {5, 10, 15}) {
    for (const auto& alg : {subgradient_method(), steepest_descent_exact()}) {
      const Transcript t = play_chain(alg, T);
      CHECK(validate_span(t).ok);
      CHECK(chain_distance(t, T) >= std::exp(-static_cast<double>(T)));
    }
  }
}

TEST_CASE("steepest descent at T = 2 beats exp(-T) but respects q^T") {
  // the probe x_1 - g_1 = e1 / 4 lies 0.0838 from x*, below exp(-2) = 0.135
  const Transcript t = play_chain(steepest_descent_exact(), 2);
  const double dist = chain_distance(t, 2);
  CHECK(dist == doctest::Approx(std::hypot(0.25 - HardQuadratic::chain_q(), std::pow(HardQuadratic::chain_q(), 2))));
  CHECK(dist < std::exp(-2.0));
  CHECK(dist >= std::pow(HardQuadratic::chain_q(), 2));
}

TEST_CASE("inverse square-root schedule respects q^T and undercuts exp(-T)") {
  const auto alg = subgradient_method({StepKind::inverse_sqrt, 1.0});
  for (int T : {2, 5, 10}) {
    const Transcript t = play_chain(alg, T);
    const double dist = chain_distance(t, T);
    CHECK(validate_span(t).ok);
    CHECK(dist >= std::pow(HardQuadratic::chain_q(), T));
    CHECK(dist < std::exp(-static_cast<double>(T)));
  }
}

TEST_CASE("smoothed estimator on a linear function is exact") {
  const Vector c{1.0, 0.5, -0.25};
  const PureEval f = [c](const Vector& x) { return FirstOrderReply{inner(c, x), c, true}; };
  for (double delta : {0.01, 1.0, 7.0}) {
    const SmoothedEstimate e = smoothed_estimate(f, {1.0, 2.0, 3.0}, delta, 64, Rng(1));
    CHECK(e.mean_grad == c);
  }
}

TEST_CASE("smoothed method steps along the averaged gradient") {
  const Vector c{2.0, -1.0};
  FunctionOracle o(2, [c](const Vector& x) { return FirstOrderReply{inner(c, x), c, true}; });
  const auto alg = smoothed_gradient_method(0.1, 4, {StepKind::constant, 0.5});
  const Transcript t = play(alg, o, 8, 2, Rng(3));
  REQUIRE(t.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) CHECK(norm(t[i].query) <= 0.1);
  for (std::size_t i = 4; i < 8; ++i) CHECK(distance(t[i].query, c * -0.5) <= 0.1 + 1e-15);
  CHECK(play(alg, o, 8, 2, Rng(3)) == t);
  CHECK_FALSE(play(alg, o, 8, 2, Rng(4)) == t);
}

TEST_CASE("Goldstein stops at the spiral origin with the two-point stencil") {
  const SpiralCounterexample s(1.0);
  FunctionOracle o(2, [s](const Vector& x) { return spiral_eval(s, x); });
  GoldsteinOptions opts;
  opts.delta = 1.0;
  opts.stencil = {{0.0, 1.0}, {0.0, -1.0}};
  const Transcript t = play(goldstein_descent(opts), o, 30, 2, Rng(0));
  CHECK(t.size() == 3);
}

TEST_CASE("Goldstein on a linear function steps along -c") {
  const Vector c{3.0, 4.0};
  FunctionOracle o(2, [c](const Vector& x) { return FirstOrderReply{inner(c, x), c, true}; });
  GoldsteinOptions opts;
  opts.stencil = {{0.1, 0.0}};
  opts.schedule = {StepKind::constant, 0.5};
  const Transcript t = play(goldstein_descent(opts), o, 4, 2, Rng(0));
  REQUIRE(t.size() == 4);
  CHECK(t[2].query == c * -0.5);
}

TEST_CASE("solver registry") {
  CHECK(make_solver("subgrad", {}).class_tag == AlgorithmClass::linear_span);
  CHECK(make_solver("steepest", {}).class_tag == AlgorithmClass::linear_span);
  CHECK(make_solver("smoothed", {}).uses_randomness);
  CHECK(make_solver("goldstein", {{"delta", 0.2}}).class_tag == AlgorithmClass::randomized);
  CHECK(make_solver("subgrad", {{"schedule", {{"kind", "inverse_sqrt"}, {"scale", 2.0}}}}).params.dump().find("inverse_sqrt") !=
        std::string::npos);
  CHECK_THROWS_AS(make_solver("newton", {}), ConfigError);
  CHECK_THROWS_AS(step_kind_from_string("bogus"), ConfigError);
  const StepSchedule s(StepKind::inverse_sqrt, 2.0);
  CHECK(s.eta(4) == 1.0);
}
