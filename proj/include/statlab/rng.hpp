#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "statlab/vector.hpp"

namespace statlab {

/// Philox4x32-10 block: maps (counter, key) to four 32-bit outputs.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Seedable counter-based generator.
///
/// A stream is identified by a 64-bit key; draws walk a 64-bit block counter.
/// derive() and stream() give statistically independent child streams, so
/// parallel loops can hand sample i the stream stream(i) and stay
/// bit-reproducible regardless of scheduling. A single Rng is single-owner.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  /// Child stream keyed by a role name ("algorithm", "adversary", ...).
  Rng derive(std::string_view role) const noexcept;
  /// Child stream keyed by an index.
  Rng stream(std::uint64_t index) const noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t block_counter() const noexcept { return counter_; }

 private:
  Rng(std::uint64_t key, int) noexcept;
  void refill() noexcept;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Uniform point on the sphere of the given radius (normalized Gaussian).
Vector sample_sphere(std::size_t dim, double radius, Rng& rng);

/// Uniform point in the closed ball of the given radius: sphere sample scaled by r * U^(1/d).
Vector sample_ball(std::size_t dim, double radius, Rng& rng);

}  // namespace statlab
