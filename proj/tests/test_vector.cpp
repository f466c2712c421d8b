#include <doctest.h>

#include "statlab/error.hpp"
#include "statlab/vector.hpp"
#include "test_util.hpp"

using namespace statlab;

TEST_CASE("inner product examples") {
  CHECK(inner({1.0, 0.0}, {0.0, 1.0}) == 0.0);
  CHECK(inner({1.0, 0.0}, {1.0, 0.0}) == 1.0);
  CHECK(inner({2.0, 3.0}, {4.0, -1.0}) == 5.0);
  CHECK_THROWS_AS(inner({1.0, 0.0}, {1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("normalize") {
  const Vector n = normalize({3.0, 4.0});
  CHECK(n[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(normalize({1.0, 0.0, 0.0}) == Vector{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(normalize({0.0, 0.0}), DegenerateInput);
}

TEST_CASE("extend_orthonormal examples") {
  {
    OrthonormalFrame f(2);
    CHECK(extend_orthonormal(f, {{1.0, 0.0}}) == Vector{0.0, 1.0});
  }
  {
    OrthonormalFrame f(3);
    f.append({1.0, 0.0, 0.0});
    CHECK(extend_orthonormal(f, {}) == Vector{0.0, 1.0, 0.0});
  }
  {
    OrthonormalFrame f(2);
    f.append({1.0, 0.0});
    CHECK_THROWS_AS(extend_orthonormal(f, {{0.0, 1.0}}), DegenerateInput);
  }
}

TEST_CASE("frame rejects non-orthonormal vectors") {
  OrthonormalFrame f(3);
  f.append({1.0, 0.0, 0.0});
  CHECK_THROWS(f.append({1.0, 1.0, 0.0}));
  CHECK_THROWS(f.append({0.0, 2.0, 0.0}));
  CHECK_THROWS_AS(f.append({0.0, 1.0}), DimensionMismatch);
}

TEST_CASE("property: extend_orthonormal is unit and orthogonal to frame and avoid set") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + rng.next_u32() % 12;
    const std::size_t m = rng.next_u32() % d;
    const std::size_t k = (d - m > 1) ? rng.next_u32() % (d - m) : 0;
    OrthonormalFrame frame(d);
    for (const Vector& u : testutil::random_orthonormal(d, m, rng)) frame.append(u);
    std::vector<Vector> avoid;
    for (std::size_t i = 0; i < k; ++i) avoid.push_back(testutil::gaussian(d, rng));
    const Vector u = extend_orthonormal(frame, avoid);
    CHECK(std::abs(norm(u) - 1.0) <= 1e-12);
    for (const Vector& f : frame.vectors()) CHECK(std::abs(inner(u, f)) <= 1e-10);
    for (const Vector& a : avoid) CHECK(std::abs(inner(u, a)) <= 1e-10 * norm(a));
    frame.append(u);
  }
}

TEST_CASE("norms and arithmetic") {
  const Vector a{3.0, -4.0};
  CHECK(norm(a) == 5.0);
  CHECK(norm_squared(a) == 25.0);
  CHECK(norm_inf(a) == 4.0);
  CHECK(distance(a, Vector{0.0, 0.0}) == 5.0);
  Vector y{1.0, 1.0};
  axpy(2.0, a, y);
  CHECK(y == Vector{7.0, -7.0});
  CHECK((a * 2.0 - a) == a);
  CHECK(Vector::basis(3, 1) == Vector{0.0, 1.0, 0.0});
}
