#include "statlab/rng.hpp"

#include <cmath>
#include <numbers>

#include "statlab/error.hpp"

namespace statlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Rng::Rng(std::uint64_t seed) noexcept : key_(splitmix64(seed)) {}

Rng::Rng(std::uint64_t key, int) noexcept : key_(key) {}

Rng Rng::derive(std::string_view role) const noexcept {
  return Rng(splitmix64(key_ ^ splitmix64(fnv1a(role))), 0);
}

Rng Rng::stream(std::uint64_t index) const noexcept {
  return Rng(splitmix64(key_ + splitmix64(index + 0x632BE59BD9B4E019ull)), 0);
}

void Rng::refill() noexcept {
  const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter_),
                                            static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key_),
                                            static_cast<std::uint32_t>(key_ >> 32)};
  buffer_ = philox4x32_10(ctr, key);
  ++counter_;
  buffer_pos_ = 0;
}

std::uint32_t Rng::next_u32() noexcept {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector sample_sphere(std::size_t dim, double radius, Rng& rng) {
  if (dim == 0) throw PreconditionViolation("sample_sphere: dim must be >= 1");
  if (!(radius >= 0.0)) throw PreconditionViolation("sample_sphere: negative radius");
  Vector g = Vector::zeros(dim);
  double n2 = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i) g[i] = rng.normal();
    n2 = norm_squared(g);
  } while (n2 == 0.0);
  g *= radius / std::sqrt(n2);
  return g;
}

Vector sample_ball(std::size_t dim, double radius, Rng& rng) {
  if (!(radius >= 0.0)) throw PreconditionViolation("sample_ball: negative radius");
  Vector s = sample_sphere(dim, 1.0, rng);
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  s *= scale;
  return s;
}

}  // namespace statlab
