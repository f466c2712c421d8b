#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statlab/chain.hpp"
#include "statlab/error.hpp"
#include "statlab/stationarity.hpp"
#include "test_util.hpp"

using namespace statlab;

TEST_CASE("spiral origin is (delta, 0)-stationary via the two-point stencil") {
  const SpiralCounterexample s(1.0);
  FunctionOracle o(2, [s](const Vector& x) { return spiral_eval(s, x); });
  Rng rng(0);
  const auto c = certify_delta_eps(o, {0.0, 0.0}, 1.0, 1e-8, Sampling::stencil({{0.0, 1.0}, {0.0, -1.0}}), rng);
  CHECK(c.kind == CertificateKind::delta_eps_witness);
  CHECK(c.value <= 1e-8);
  REQUIRE(c.witness.has_value());
  CHECK(norm(c.witness->combination()) == doctest::Approx(c.value).epsilon(1e-12));
  for (const Vector& p : c.witness->points) CHECK(norm(p) <= 1.0);
  // the single gradient at the origin is far from stationary
  CHECK(certify_eps(o, {0.0, 0.0}, 1e-8).value == doctest::Approx(std::numbers::pi));
}

TEST_CASE("clamped channel origin is (delta, 0)-stationary") {
  const double delta = 0.05;
  const Vector w{delta / 2.0, 0.0, 0.0};
  const Vector v{0.0, delta, 0.0};
  const ChannelInstance gt = ChannelInstance::clamped_at_origin_gap(w);
  FunctionOracle o(3, [gt](const Vector& x) { return channel_eval(gt, x); });
  Rng rng(0);
  const auto c = certify_delta_eps(o, Vector::zeros(3), delta, 1e-12, Sampling::stencil({v, -v}), rng);
  CHECK(c.value <= 1e-12);
  CHECK(c.witness.has_value());
}

TEST_CASE("unit-gradient region gives no witness") {
  FunctionOracle o(2, [](const Vector& x) { return FirstOrderReply{norm(x), normalize(x), true}; });
  Rng rng(1);
  const auto c = certify_delta_eps(o, {10.0, 0.0}, 1.0, 0.5, Sampling::ball_uniform(200), rng);
  CHECK(c.value > 0.99);
  CHECK(c.value <= 1.0 + 1e-12);
  CHECK_FALSE(c.witness.has_value());
  CHECK(c.sound_direction == "stationarity_only");
}

TEST_CASE("Warga origin has a sampled witness") {
  FunctionOracle o(2, [](const Vector& x) { return warga_eval(x); });
  Rng rng(2);
  const auto c = certify_delta_eps(o, {0.0, 0.0}, 0.01, 1e-6, Sampling::ball_uniform(1000), rng);
  CHECK(c.value <= 1e-6);
}

TEST_CASE("stencil points must lie in the ball") {
  FunctionOracle o(2, [](const Vector& x) { return warga_eval(x); });
  Rng rng(0);
  CHECK_THROWS_AS(certify_delta_eps(o, {0.0, 0.0}, 0.1, 1e-6, Sampling::stencil({{0.2, 0.0}}), rng), Error);
}

TEST_CASE("ball sampling advances the caller's stream and is reproducible") {
  FunctionOracle o(2, [](const Vector& x) { return warga_eval(x); });
  Rng a(5);
  Rng b(5);
  const auto c1 = certify_delta_eps(o, {0.3, 0.1}, 0.05, 1e-9, Sampling::ball_uniform(50), a);
  const auto c2 = certify_delta_eps(o, {0.3, 0.1}, 0.05, 1e-9, Sampling::ball_uniform(50), b, Exec::serial);
  CHECK(c1.value == c2.value);
  CHECK(a.next_u64() == b.next_u64());
  Rng fresh(5);
  Rng advanced(5);
  certify_delta_eps(o, {0.3, 0.1}, 0.05, 1e-9, Sampling::ball_uniform(50), advanced);
  CHECK(fresh.next_u64() != advanced.next_u64());
}

TEST_CASE("subdifferential norm lower bounds") {
  const ChannelInstance c(Vector{0.3, 0.0});
  CHECK(subdiff_norm_lower_bound(c, {0.0, 1.0}).value == 1.0);
  CHECK(subdiff_norm_lower_bound(c, {0.0, 0.0}).value == 1.0);
  const Vector z = Vector{-0.3, 0.0} + Vector{0.5, std::sqrt(3.0) / 2.0} * 2.0;
  REQUIRE(region_classify(c, z) == ChannelRegion::hinge_boundary);
  CHECK(subdiff_norm_lower_bound(c, z).value == doctest::Approx(1.0 / std::numbers::sqrt2));
  const ChannelInstance clamped(Vector{0.3, 0.0}, -1.0);
  CHECK_THROWS_AS(subdiff_norm_lower_bound(clamped, {3.0, 0.0}), PreconditionViolation);

  const auto hq = std::make_shared<const HardQuadratic>(3, 6);
  const auto geom = ChainGeometry::natural(hq);
  const ChannelInstance h = ChannelInstance::hard(Vector::basis(6, 5) * 1e-4, {geom, hq->x_star()});
  CHECK(subdiff_norm_lower_bound(h, Vector::zeros(6)).value == doctest::Approx(1.0 / std::numbers::sqrt2));
}

TEST_CASE("near-stationarity distance bound from the value gap") {
  const ChannelInstance c(Vector{0.3, 0.0}, -1.0);
  // g(-t, 0) = 3t - 0.6 for t < 0.3, t beyond
  const auto at = [&](const Vector& x) { return near_stationarity_distance_lb(c, x).value; };
  CHECK(at({-0.2, 0.0}) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(at({3.0, 0.0}) == 0.0);
  CHECK(at({-0.5, 0.0}) == doctest::Approx(3.0 / 14.0).epsilon(1e-14));
  CHECK(near_stationarity_distance_lb(c, {-0.5, 0.0}).kind == CertificateKind::near_distance_lower_bound);
}

TEST_CASE("property: sampled subgradient norms never fall below the analytic bound") {
  Rng rng(9);
  for (int i = 0; i < 20000; ++i) {
    const std::size_t d = 2 + rng.next_u32() % 3;
    const ChannelInstance c(sample_sphere(d, 0.05 + rng.uniform(), rng));
    const Vector x = (i % 3 == 0) ? -c.w() + sample_ball(d, 1e-8, rng) : sample_ball(d, 2.0, rng);
    REQUIRE(norm(channel_eval(c, x).subgrad) >= subdiff_norm_lower_bound(c, x).value - 1e-9);
  }
}

TEST_CASE("constants table") {
  const ConstantsTable& t = ConstantsTable::standard();
  CHECK(t.lipschitz_channel == 7.0);
  CHECK(t.stationarity_threshold == doctest::Approx(1.0 / (2.0 * std::numbers::sqrt2)));
  CHECK(t.distance_bound == doctest::Approx(1.0 / 7.0));
  CHECK(t.to_json().contains("value_gap"));
}
