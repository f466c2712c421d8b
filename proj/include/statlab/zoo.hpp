#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "statlab/vector.hpp"

namespace statlab {

/// One oracle answer: value, one element of the Clarke subdifferential, and
/// whether the function is differentiable at the query.
struct FirstOrderReply {
  double value;
  Vector subgrad;
  bool differentiable;

  bool operator==(const FirstOrderReply&) const = default;
};

/// A symmetric positive-definite map M, available as M and as its root M^{1/2}.
class PositiveDefiniteMap {
 public:
  virtual ~PositiveDefiniteMap() = default;
  virtual std::size_t dim() const = 0;
  virtual Vector apply(const Vector& x) const = 0;
  virtual Vector apply_sqrt(const Vector& x) const = 0;
};

/// M = c I.
class ScaledIdentityMap final : public PositiveDefiniteMap {
 public:
  ScaledIdentityMap(std::size_t dim, double scale);
  std::size_t dim() const override { return dim_; }
  Vector apply(const Vector& x) const override;
  Vector apply_sqrt(const Vector& x) const override;

 private:
  std::size_t dim_;
  double scale_;
  double root_;
};

// ---------------------------------------------------------------------------
// Two-dimensional counterexample f(u, v) = (2 delta + u) sin(pi v / (2 delta)).

struct SpiralCounterexample {
  double delta;
  /// Radial decay to zero outside the 2*delta ball, making f globally Lipschitz.
  bool extended = false;

  explicit SpiralCounterexample(double delta, bool extended = false);

  /// 2*pi on the 2*delta ball for the plain variant; 2*sqrt(1 + pi^2) globally for the extended one.
  double lipschitz() const;
  /// Radius of the ball on which lipschitz() holds (infinity when global).
  double lipschitz_radius() const;
};

FirstOrderReply spiral_eval(const SpiralCounterexample& s, const Vector& x);

// ---------------------------------------------------------------------------
// Channel function g_w(x) = ||x|| - [4 wbar'(x + w) - 2 ||x + w||]_+ and its
// clamped / affinely composed variants.

enum class ChannelRegion {
  origin,
  minus_w,
  hinge_boundary,
  hinge_inactive,
  hinge_active,
  clamp_active,
  clamp_boundary,
};

std::string_view to_string(ChannelRegion r);

/// x -> M^{1/2}(x - x_star)
struct AffineComposition {
  std::shared_ptr<const PositiveDefiniteMap> map;
  Vector x_star;
};

class ChannelInstance {
 public:
  static constexpr double kBoundaryTol = 1e-12;
  static constexpr double kLipschitz = 7.0;

  explicit ChannelInstance(Vector w, std::optional<double> clamp = std::nullopt,
                           std::optional<AffineComposition> affine = std::nullopt);

  /// max{g_w(0) - 1, g_w(x)}: the (delta, 0)-stationary-origin strengthening.
  static ChannelInstance clamped_at_origin_gap(Vector w);
  /// max{-1, g_w(M^{1/2}(x - x_star))}
  static ChannelInstance hard(Vector w, AffineComposition affine);

  std::size_t dim() const noexcept { return w_.dim(); }
  const Vector& w() const noexcept { return w_; }
  const Vector& w_bar() const noexcept { return w_bar_; }
  const std::optional<double>& clamp() const noexcept { return clamp_; }
  const std::optional<AffineComposition>& affine() const noexcept { return affine_; }

  /// The point fed to g_w: M^{1/2}(x - x_star), or x itself without composition.
  Vector inner_point(const Vector& x) const;
  /// Unclamped g_w at an inner point.
  double raw_value(const Vector& z) const;

 private:
  Vector w_;
  Vector w_bar_;
  std::optional<double> clamp_;
  std::optional<AffineComposition> affine_;
};

FirstOrderReply channel_eval(const ChannelInstance& c, const Vector& x);
ChannelRegion region_classify(const ChannelInstance& c, const Vector& x);

/// Distance from the inner point z to the nearest non-differentiable set of the
/// unclamped g_w (origin, -w, hinge cone), lower-bounded via the 6-Lipschitz hinge argument.
double channel_kink_clearance(const ChannelInstance& c, const Vector& z);

// ---------------------------------------------------------------------------
// f~(x) = ||M^{1/2}(x - x_star)||

struct NormDistance {
  std::shared_ptr<const PositiveDefiniteMap> map;
  Vector x_star;

  NormDistance(std::shared_ptr<const PositiveDefiniteMap> map, Vector x_star);
  std::size_t dim() const noexcept { return x_star.dim(); }
};

FirstOrderReply norm_distance_eval(const NormDistance& n, const Vector& x);

/// (f, grad f) of a nonnegative quadratic -> (sqrt f, grad f / (2 sqrt f)); zero maps to (0, 0, false).
FirstOrderReply sqrt_oracle_transform(const FirstOrderReply& quadratic_reply, const Vector& query);

// ---------------------------------------------------------------------------
// f(u, v) = ||u| + v| + u / 2

struct WargaFunction {
  static constexpr double kLipschitz = 1.8027756377319946;  // sqrt(1.5^2 + 1)
};

FirstOrderReply warga_eval(const Vector& x);

/// Direction used by several evaluators: z / ||z|| given the precomputed norm.
Vector unit_direction(const Vector& z, double z_norm);

}  // namespace statlab
