#include <doctest.h>

#include <cmath>

#include "statlab/error.hpp"
#include "statlab/oracle.hpp"
#include "statlab/solvers.hpp"
#include "test_util.hpp"

using namespace statlab;

namespace {

class ConstantPlayer final : public Player {
 public:
  explicit ConstantPlayer(std::size_t d) : x_(Vector::zeros(d)) {}
  std::optional<Vector> propose() override { return x_; }
  void observe(const Vector&, const FirstOrderReply&) override {}

 private:
  Vector x_;
};

AlgorithmDescriptor constant_algorithm() {
  AlgorithmDescriptor a;
  a.name = "constant";
  a.factory = [](std::size_t d, Rng) { return std::make_unique<ConstantPlayer>(d); };
  return a;
}

FunctionOracle squared_norm(std::size_t d, Vector a) {
  return FunctionOracle(d, [a](const Vector& x) {
    const Vector z = x - a;
    return FirstOrderReply{norm_squared(z), z * 2.0, true};
  });
}

TranscriptEntry entry(Vector q, Vector g) { return {std::move(q), {0.0, std::move(g), true}}; }

Transcript make(std::vector<TranscriptEntry> es) {
  Transcript t(es.size(), es.front().query.dim());
  for (auto& e : es) t.append(e.query, e.reply);
  return t;
}

}  // namespace

TEST_CASE("constant algorithm queries the same point") {
  FunctionOracle o = squared_norm(2, {1.0, 1.0});
  const Transcript t = play(constant_algorithm(), o, 3, 2, Rng(0));
  REQUIRE(t.size() == 3);
  CHECK(t[0].query == t[1].query);
  CHECK(t[1].query == t[2].query);
}

TEST_CASE("subgradient method from a stationary start stays put") {
  FunctionOracle o = squared_norm(3, Vector::zeros(3));
  const Transcript t = play(subgradient_method({StepKind::constant, 0.5}), o, 2, 3, Rng(0));
  CHECK(t[1].query == Vector::zeros(3));
}

TEST_CASE("deterministic replay is bit-identical") {
  FunctionOracle o = squared_norm(4, {1.0, -2.0, 0.5, 3.0});
  const auto alg = subgradient_method({StepKind::inverse_sqrt, 0.3});
  CHECK(play(alg, o, 20, 4, Rng(1)) == play(alg, o, 20, 4, Rng(99)));
}

TEST_CASE("validate_span examples") {
  const Vector g1{1.0, 2.0, 0.0};
  CHECK(validate_span(make({entry(Vector::zeros(3), g1), entry(g1 * -0.1, g1)})).ok);

  const SpanCheck bad = validate_span(make({entry(Vector::zeros(3), g1), entry(g1 * -0.1 + Vector{0, 0, 0.5}, g1)}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.first_violation == 2);
  CHECK(bad.max_residual == doctest::Approx(0.5));

  CHECK(validate_span(make({entry(Vector::zeros(3), Vector::zeros(3)), entry(Vector::zeros(3), g1)})).ok);
  CHECK_FALSE(validate_span(make({entry({1.0, 0.0, 0.0}, g1)})).ok);
}

TEST_CASE("property: span membership is detected") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 6 + rng.next_u32() % 10;
    const std::size_t n = 2 + rng.next_u32() % 4;
    std::vector<Vector> grads;
    std::vector<TranscriptEntry> es;
    Vector x = Vector::zeros(d);
    for (std::size_t t = 0; t < n; ++t) {
      const Vector g = testutil::gaussian(d, rng);
      es.push_back(entry(x, g));
      grads.push_back(g);
      x = Vector::zeros(d);
      for (const Vector& h : grads) axpy(rng.normal(), h, x);
    }
    CHECK(validate_span(make(es)).ok);
    // push the last query off the span of the gradients it may use
    std::vector<Vector> ortho;
    for (std::size_t t = 0; t + 1 < n; ++t) {
      Vector u = grads[t];
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& o : ortho) axpy(-inner(o, u), o, u);
      }
      ortho.push_back(normalize(u));
    }
    Vector off = testutil::gaussian(d, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& o : ortho) axpy(-inner(o, off), o, off);
    }
    es.back().query += normalize(off) * 0.5;
    const SpanCheck c = validate_span(make(es));
    CHECK_FALSE(c.ok);
    CHECK(c.first_violation == n);
  }
}

TEST_CASE("min_distance_to examples") {
  CHECK(min_distance_to(make({entry({1.0, 2.0}, {0.0, 0.0})}), {1.0, 2.0}) == 0.0);
  CHECK(min_distance_to(make({entry({1.0, 0.0}, {0.0, 0.0}), entry({0.0, 2.0}, {0.0, 0.0})}), {0.0, 0.0}) == 1.0);
}

TEST_CASE("transcript guards budget and dimension") {
  Transcript t(1, 2);
  t.append({0.0, 0.0}, {0.0, {0.0, 0.0}, true});
  CHECK_THROWS_AS(t.append({0.0, 0.0}, {0.0, {0.0, 0.0}, true}), BudgetExceeded);
  Transcript u(2, 2);
  CHECK_THROWS_AS(u.append({0.0, 0.0, 0.0}, {0.0, {0.0, 0.0, 0.0}, true}), DimensionMismatch);
}

TEST_CASE("oracle errors surface as OracleFailure with the query") {
  int calls = 0;
  FunctionOracle o(2, [&calls](const Vector& x) -> FirstOrderReply {
    if (++calls == 2) throw DegenerateInput("boom");
    return {0.0, Vector{1.0, 0.0}, true};
  });
  try {
    play(subgradient_method(), o, 5, 2, Rng(0));
    FAIL("expected OracleFailure");
  } catch (const OracleFailure& e) {
    CHECK(e.index() == 2);
    CHECK(e.query() == std::vector<double>{-0.1, 0.0});
  }
}
