#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statlab/chain.hpp"
#include "statlab/error.hpp"
#include "test_util.hpp"

using namespace statlab;

namespace {

// Dense d x d M = (A + 4I) / 8 on the chain block, 1/2 elsewhere.
std::vector<double> dense_m(int T, std::size_t d) {
  const double k = (std::numbers::sqrt2 + 3.0) / (std::numbers::sqrt2 + 1.0);
  std::vector<double> m(d * d, 0.0);
  const auto Tz = static_cast<std::size_t>(T);
  for (std::size_t i = 0; i < Tz; ++i) {
    m[i * d + i] = ((i + 1 == Tz ? k : 2.0) + 4.0) / 8.0;
    if (i + 1 < Tz) {
      m[i * d + i + 1] = -1.0 / 8.0;
      m[(i + 1) * d + i] = -1.0 / 8.0;
    }
  }
  for (std::size_t i = Tz; i < d; ++i) m[i * d + i] = 0.5;
  return m;
}

Vector mv(const std::vector<double>& m, const Vector& x) { return Vector(testutil::matvec(m, x.raw())); }

}  // namespace

TEST_CASE("chain constants") {
  const double q = HardQuadratic::chain_q();
  const double k = HardQuadratic::chain_k();
  CHECK(q == doctest::Approx(3.0 - 2.0 * std::numbers::sqrt2).epsilon(1e-15));
  CHECK(std::abs(1.0 - 6.0 * q + q * q) <= 1e-14);
  CHECK(std::abs((k + 4.0) * q - 1.0) <= 1e-14);
  // q^T drops below exp(-T): the minimizer's last coordinate is smaller than the stated floor
  CHECK(q < std::exp(-1.0));
}

TEST_CASE("minimizer solves (A + 4I) x* = e1 against a dense oracle") {
  for (int T : {2, 3, 5, 10, 15}) {
    const HardQuadratic hq(T, 2 * static_cast<std::size_t>(T));
    const auto m = dense_m(T, hq.d());
    const Vector r = mv(m, hq.x_star()) * 8.0 - Vector::basis(hq.d(), 0);
    CHECK(norm_inf(r) <= 1e-15);
    CHECK(hq.b() == doctest::Approx(inner(hq.x_star(), mv(m, hq.x_star()))).epsilon(1e-14));
    CHECK(hq.b() == doctest::Approx(hq.q() / 8.0).epsilon(1e-14));
    CHECK(norm(hq.x_star()) <= std::sqrt((std::numbers::sqrt2 - 1.0) / 2.0) + 1e-12);
    for (int i = 0; i < T; ++i) CHECK(hq.x_star()[i] == doctest::Approx(std::pow(hq.q(), i + 1)).epsilon(1e-13));
  }
}

TEST_CASE("quadratic value and gradient match the dense form") {
  Rng rng(21);
  for (int T : {2, 5, 10}) {
    const std::size_t d = 2 * static_cast<std::size_t>(T);
    const auto hq = std::make_shared<const HardQuadratic>(T, d);
    const auto geom = ChainGeometry::natural(hq);
    const auto m = dense_m(T, d);
    for (int i = 0; i < 50; ++i) {
      const Vector x = testutil::gaussian(d, rng);
      const Vector z = x - hq->x_star();
      const FirstOrderReply r = geom->quadratic(x);
      CHECK(r.value == doctest::Approx(inner(z, mv(m, z))).epsilon(1e-12));
      CHECK(norm_inf(r.subgrad - mv(m, z) * 2.0) <= 1e-12 * std::max(1.0, norm(x)));
    }
    const FirstOrderReply at = geom->quadratic(hq->x_star());
    CHECK(std::abs(at.value) <= 1e-12);
    CHECK(norm_inf(at.subgrad) <= 1e-12);
    CHECK(geom->quadratic(Vector::zeros(d)).value == doctest::Approx(hq->b()).epsilon(1e-15));
  }
}

TEST_CASE("T = 2 gradient at the origin") {
  const auto hq = std::make_shared<const HardQuadratic>(2, 2);
  const FirstOrderReply r = ChainGeometry::natural(hq)->quadratic({0.0, 0.0});
  CHECK(norm_inf(r.subgrad - Vector{-0.25, 0.0}) <= 1e-16);
  const Vector dense = mv(dense_m(2, 2), hq->x_star()) * -2.0;
  CHECK(norm_inf(r.subgrad - dense) <= 1e-15);
}

TEST_CASE("chain part gradient matches finite differences") {
  const HardQuadratic hq(6, 6);
  Rng rng(3);
  const Vector y = testutil::gaussian(6, rng);
  const auto f = [&](const Vector& v) { return hq.chain_part(v.raw()); };
  const Vector g(hq.chain_part_gradient(y.raw()));
  CHECK(norm_inf(g - testutil::fd_gradient(f, y)) <= 1e-8);
}

TEST_CASE("spectrum of M: QL, bisection, dense residual") {
  for (int T : {2, 5, 10, 30}) {
    const HardQuadratic hq(T, static_cast<std::size_t>(T));
    const auto [diag, off] = hq.m_block_tridiagonal();
    const TridiagonalEigen eig = tridiagonal_eigen(diag, off);
    const auto m = dense_m(T, hq.d());
    for (std::size_t j = 0; j < eig.n; ++j) {
      CHECK(eig.values[j] == doctest::Approx(tridiagonal_eigenvalue_bisection(diag, off, j)).epsilon(1e-12));
      Vector v = Vector::zeros(eig.n);
      for (std::size_t i = 0; i < eig.n; ++i) v[i] = eig.vectors[i * eig.n + j];
      CHECK(norm(mv(m, v) - v * eig.values[j]) <= 1e-12);
      CHECK(std::abs(norm(v) - 1.0) <= 1e-12);
    }
    const SpectrumBounds sb = chain_spectrum_check(hq);
    CHECK(sb.lambda_min >= 0.5 - 1e-9);
    CHECK(sb.lambda_max <= 1.0 + 1e-9);
  }
}

TEST_CASE("property: A is positive semidefinite") {
  const HardQuadratic hq(10, 10);
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const Vector y = testutil::gaussian(10, rng);
    REQUIRE(inner(y, Vector(hq.apply_block(y.raw()))) >= -1e-12);
  }
}

TEST_CASE("root of M: squares to M, singular values in [1/sqrt 2, 1]") {
  Rng rng(5);
  const int T = 10;
  const std::size_t d = 20;
  const auto hq = std::make_shared<const HardQuadratic>(T, d);
  const auto natural = ChainGeometry::natural(hq);
  const auto rotated = ChainGeometry::rotated(hq, testutil::random_orthonormal(d, T, rng));
  for (const auto& g : {natural, rotated}) {
    for (int i = 0; i < 200; ++i) {
      const Vector x = testutil::gaussian(d, rng);
      const Vector mm = g->apply_sqrt(g->apply_sqrt(x));
      CHECK(norm(mm - g->apply(x)) <= 1e-10 * norm(g->apply(x)));
      const double ratio = norm(g->apply_sqrt(x)) / norm(x);
      CHECK(ratio >= 1.0 / std::numbers::sqrt2 - 1e-12);
      CHECK(ratio <= 1.0 + 1e-12);
    }
  }
  const ScaledIdentityMap c(3, 4.0);
  CHECK(c.apply_sqrt({1.0, 2.0, 3.0}) == Vector{2.0, 4.0, 6.0});
}

TEST_CASE("rotated quadratic equals the natural one after an orthogonal change of basis") {
  Rng rng(6);
  const int T = 5;
  const std::size_t d = 10;
  const auto hq = std::make_shared<const HardQuadratic>(T, d);
  const auto basis = testutil::random_orthonormal(d, d, rng);
  const auto rotated = ChainGeometry::rotated(hq, {basis.begin(), basis.begin() + T});
  const auto natural = ChainGeometry::natural(hq);
  for (int i = 0; i < 50; ++i) {
    const Vector x = testutil::gaussian(d, rng);
    Vector ux = Vector::zeros(d);
    for (std::size_t j = 0; j < d; ++j) ux[j] = inner(basis[j], x);
    CHECK(rotated->quadratic(x).value == doctest::Approx(natural->quadratic(ux).value).epsilon(1e-12));
  }
  CHECK(std::abs(rotated->quadratic(rotated->x_star()).value) <= 1e-14);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(HardQuadratic(1, 4), PreconditionViolation);
  CHECK_THROWS_AS(HardQuadratic(5, 4), PreconditionViolation);
  const auto hq = std::make_shared<const HardQuadratic>(3, 6);
  const auto partial = ChainGeometry::rotated(hq, {Vector::basis(6, 0)});
  CHECK_FALSE(partial->complete());
  CHECK_THROWS(partial->x_star());
}
