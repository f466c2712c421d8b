#include <doctest.h>

#include <cmath>
#include <set>

#include "statlab/rng.hpp"

using namespace statlab;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and role-separated") {
  const Rng master(42);
  Rng a1 = master.derive("algorithm");
  Rng a2 = master.derive("algorithm");
  Rng b = master.derive("adversary");
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a1.next_u64();
    CHECK(x == a2.next_u64());
    differs = differs || x != b.next_u64();
  }
  CHECK(differs);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng s = master.stream(i);
    firsts.insert(s.next_u64());
  }
  CHECK(firsts.size() == 1000);
}

TEST_CASE("uniform range") {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double o = r.uniform_open();
    REQUIRE(o > 0.0);
    REQUIRE(o < 1.0);
  }
}

TEST_CASE("sample_ball") {
  Rng r(2);
  CHECK(sample_ball(3, 0.0, r) == Vector::zeros(3));
  double mean_norm = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vector v = sample_ball(2, 1.0, r);
    REQUIRE(norm(v) <= 1.0);
    mean_norm += norm(v);
  }
  // E||u|| = dim / (dim + 1)
  CHECK(std::abs(mean_norm / n - 2.0 / 3.0) <= 0.01);
}

TEST_CASE("sample_sphere") {
  Rng r(3);
  CHECK(std::abs(norm(sample_sphere(3, 1.0, r)) - 1.0) <= 1e-12);
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += sample_sphere(2, 1.0, r)[0];
  CHECK(std::abs(mean / n) <= 0.01);
  Rng s1(9);
  Rng s2(9);
  CHECK(sample_sphere(5, 2.0, s1) == sample_sphere(5, 2.0, s2));
}

TEST_CASE("normal moments") {
  Rng r(4);
  double m1 = 0.0;
  double m2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    m1 += x;
    m2 += x * x;
  }
  CHECK(std::abs(m1 / n) <= 0.01);
  CHECK(std::abs(m2 / n - 1.0) <= 0.02);
}
