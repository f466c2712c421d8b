#include "statlab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "statlab/error.hpp"

namespace statlab {

using std::numbers::pi;

Vector unit_direction(const Vector& z, double z_norm) { return z / z_norm; }

ScaledIdentityMap::ScaledIdentityMap(std::size_t dim, double scale)
    : dim_(dim), scale_(scale), root_(std::sqrt(scale)) {
  if (dim == 0) throw PreconditionViolation("ScaledIdentityMap: dim must be >= 1");
  if (!(scale > 0.0)) throw PreconditionViolation("ScaledIdentityMap: scale must be positive");
}

Vector ScaledIdentityMap::apply(const Vector& x) const {
  if (x.dim() != dim_) throw DimensionMismatch(dim_, x.dim(), "ScaledIdentityMap::apply");
  return x * scale_;
}

Vector ScaledIdentityMap::apply_sqrt(const Vector& x) const {
  if (x.dim() != dim_) throw DimensionMismatch(dim_, x.dim(), "ScaledIdentityMap::apply_sqrt");
  return x * root_;
}

// ---------------------------------------------------------------------------
// spiral

SpiralCounterexample::SpiralCounterexample(double delta_, bool extended_)
    : delta(delta_), extended(extended_) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw PreconditionViolation("SpiralCounterexample: delta must be positive");
  }
}

double SpiralCounterexample::lipschitz() const {
  return extended ? 2.0 * std::sqrt(1.0 + pi * pi) : 2.0 * pi;
}

double SpiralCounterexample::lipschitz_radius() const {
  return extended ? std::numeric_limits<double>::infinity() : 2.0 * delta;
}

namespace {

struct PlainSpiral {
  double value;
  double du;
  double dv;
};

PlainSpiral plain_spiral(double delta, double u, double v) {
  const double a = pi / (2.0 * delta);
  const double s = std::sin(a * v);
  const double c = std::cos(a * v);
  return {(2.0 * delta + u) * s, s, a * (2.0 * delta + u) * c};
}

}  // namespace

FirstOrderReply spiral_eval(const SpiralCounterexample& sp, const Vector& x) {
  if (x.dim() != 2) throw DimensionMismatch(2, x.dim(), "spiral_eval");
  const double delta = sp.delta;
  if (!sp.extended) {
    const PlainSpiral f = plain_spiral(delta, x[0], x[1]);
    return {f.value, Vector{f.du, f.dv}, true};
  }

  const double r = norm(x);
  const double seam_tol = 1e-12 * delta;
  const double inner_radius = 2.0 * delta;
  const double outer_radius = 4.0 * delta;
  if (r <= inner_radius + seam_tol) {
    const PlainSpiral f = plain_spiral(delta, x[0], x[1]);
    return {f.value, Vector{f.du, f.dv}, r < inner_radius - seam_tol};
  }
  if (r > outer_radius + seam_tol) return {0.0, Vector::zeros(2), true};

  // annulus: phi(r) * f(2 delta x / r), phi(r) = max{0, 2 - r / (2 delta)}
  const double phi = std::max(0.0, 2.0 - r / (2.0 * delta));
  const double shrink = inner_radius / r;
  const Vector xbar = unit_direction(x, r);
  const PlainSpiral f = plain_spiral(delta, shrink * x[0], shrink * x[1]);
  const Vector grad_f{f.du, f.dv};
  Vector tangential = grad_f;
  axpy(-inner(grad_f, xbar), xbar, tangential);
  Vector grad = xbar * (-f.value / (2.0 * delta));
  axpy(phi * shrink, tangential, grad);
  const bool on_seam = std::abs(r - outer_radius) <= seam_tol;
  return {phi * f.value, std::move(grad), !on_seam};
}

// ---------------------------------------------------------------------------
// channel

std::string_view to_string(ChannelRegion r) {
  switch (r) {
    case ChannelRegion::origin: return "origin";
    case ChannelRegion::minus_w: return "minus_w";
    case ChannelRegion::hinge_boundary: return "hinge_boundary";
    case ChannelRegion::hinge_inactive: return "hinge_inactive";
    case ChannelRegion::hinge_active: return "hinge_active";
    case ChannelRegion::clamp_active: return "clamp_active";
    case ChannelRegion::clamp_boundary: return "clamp_boundary";
  }
  return "unknown";
}

ChannelInstance::ChannelInstance(Vector w, std::optional<double> clamp,
                                 std::optional<AffineComposition> affine)
    : w_(std::move(w)), w_bar_(w_), clamp_(clamp), affine_(std::move(affine)) {
  const double wn = norm(w_);
  if (wn == 0.0) throw DegenerateInput("ChannelInstance: w must be nonzero");
  w_bar_ = unit_direction(w_, wn);
  if (clamp_ && !std::isfinite(*clamp_)) throw PreconditionViolation("ChannelInstance: clamp must be finite");
  if (affine_) {
    if (!affine_->map) throw PreconditionViolation("ChannelInstance: affine map missing");
    if (affine_->map->dim() != w_.dim()) {
      throw DimensionMismatch(w_.dim(), affine_->map->dim(), "ChannelInstance affine map");
    }
    require_same_dim(w_, affine_->x_star, "ChannelInstance x_star");
  }
}

ChannelInstance ChannelInstance::clamped_at_origin_gap(Vector w) {
  ChannelInstance pure(w);
  const double level = pure.raw_value(Vector::zeros(w.dim())) - 1.0;
  return ChannelInstance(std::move(w), level);
}

ChannelInstance ChannelInstance::hard(Vector w, AffineComposition affine) {
  return ChannelInstance(std::move(w), -1.0, std::move(affine));
}

Vector ChannelInstance::inner_point(const Vector& x) const {
  if (x.dim() != w_.dim()) throw DimensionMismatch(w_.dim(), x.dim(), "ChannelInstance");
  if (!affine_) return x;
  return affine_->map->apply_sqrt(x - affine_->x_star);
}

namespace {

struct ChannelParts {
  double z_norm;
  Vector shifted;       // z + w
  double shifted_norm;  // ||z + w||
  double hinge;         // 4 wbar'(z + w) - 2 ||z + w||
  double value;         // unclamped g_w(z)
};

ChannelParts channel_parts(const ChannelInstance& c, const Vector& z) {
  const double zn = norm(z);
  Vector shifted = z + c.w();
  const double sn = norm(shifted);
  const double hinge = 4.0 * inner(c.w_bar(), shifted) - 2.0 * sn;
  const double value = zn - std::max(hinge, 0.0);
  return {zn, std::move(shifted), sn, hinge, value};
}

ChannelRegion classify_parts(const ChannelInstance& c, const ChannelParts& p) {
  constexpr double tol = ChannelInstance::kBoundaryTol;
  if (c.clamp()) {
    if (p.value < *c.clamp() - tol) return ChannelRegion::clamp_active;
    if (std::abs(p.value - *c.clamp()) <= tol) return ChannelRegion::clamp_boundary;
  }
  if (p.z_norm <= tol) return ChannelRegion::origin;
  if (p.shifted_norm <= tol) return ChannelRegion::minus_w;
  // wbar'(overline{z + w}) = 1/2
  const double ratio = inner(c.w_bar(), p.shifted) / p.shifted_norm;
  if (std::abs(ratio - 0.5) <= tol) return ChannelRegion::hinge_boundary;
  return ratio > 0.5 ? ChannelRegion::hinge_active : ChannelRegion::hinge_inactive;
}

// Canonical element of the unclamped g_w subdifferential at z.
Vector channel_element(const ChannelInstance& c, const ChannelParts& p, const Vector& z,
                       ChannelRegion unclamped_region) {
  switch (unclamped_region) {
    case ChannelRegion::origin:
      return c.w_bar() * -2.0;
    case ChannelRegion::minus_w:
      return c.w_bar() * -3.0;
    case ChannelRegion::hinge_active: {
      Vector g = unit_direction(z, p.z_norm);
      g -= c.w_bar() * 4.0;
      axpy(2.0, unit_direction(p.shifted, p.shifted_norm), g);
      return g;
    }
    default:
      return unit_direction(z, p.z_norm);
  }
}

}  // namespace

double ChannelInstance::raw_value(const Vector& z) const { return channel_parts(*this, z).value; }

ChannelRegion region_classify(const ChannelInstance& c, const Vector& x) {
  const Vector z = c.inner_point(x);
  return classify_parts(c, channel_parts(c, z));
}

FirstOrderReply channel_eval(const ChannelInstance& c, const Vector& x) {
  const Vector z = c.inner_point(x);
  const ChannelParts p = channel_parts(c, z);
  const ChannelRegion region = classify_parts(c, p);
  const double value = c.clamp() ? std::max(*c.clamp(), p.value) : p.value;

  if (region == ChannelRegion::clamp_active) return {value, Vector::zeros(c.dim()), true};

  ChannelRegion branch = region;
  if (region == ChannelRegion::clamp_boundary) {
    ChannelInstance unclamped(c.w());
    branch = classify_parts(unclamped, p);
  }
  Vector g = channel_element(c, p, z, branch);
  if (c.affine()) g = c.affine()->map->apply_sqrt(g);
  const bool smooth = region == ChannelRegion::hinge_inactive || region == ChannelRegion::hinge_active;
  return {value, std::move(g), smooth};
}

double channel_kink_clearance(const ChannelInstance& c, const Vector& z) {
  const ChannelParts p = channel_parts(c, z);
  // the hinge argument is 6-Lipschitz in z
  return std::min({p.z_norm, p.shifted_norm, std::abs(p.hinge) / 6.0});
}

// ---------------------------------------------------------------------------
// norm distance and the square-root reduction

NormDistance::NormDistance(std::shared_ptr<const PositiveDefiniteMap> map_, Vector x_star_)
    : map(std::move(map_)), x_star(std::move(x_star_)) {
  if (!map) throw PreconditionViolation("NormDistance: map missing");
  if (map->dim() != x_star.dim()) throw DimensionMismatch(x_star.dim(), map->dim(), "NormDistance");
}

FirstOrderReply norm_distance_eval(const NormDistance& n, const Vector& x) {
  if (x.dim() != n.dim()) throw DimensionMismatch(n.dim(), x.dim(), "norm_distance_eval");
  const Vector z = n.map->apply_sqrt(x - n.x_star);
  const double zn = norm(z);
  if (zn == 0.0) return {0.0, Vector::zeros(n.dim()), false};
  // M (x - x*) / ||M^{1/2}(x - x*)|| computed as M^{1/2} zbar
  return {zn, n.map->apply_sqrt(unit_direction(z, zn)), true};
}

FirstOrderReply sqrt_oracle_transform(const FirstOrderReply& q, const Vector& query) {
  if (q.value < 0.0) {
    throw PreconditionViolation("sqrt_oracle_transform: negative quadratic value " + std::to_string(q.value));
  }
  require_same_dim(q.subgrad, query, "sqrt_oracle_transform");
  if (q.value == 0.0) return {0.0, Vector::zeros(query.dim()), false};
  const double root = std::sqrt(q.value);
  return {root, q.subgrad / (2.0 * root), true};
}

// ---------------------------------------------------------------------------
// Warga

FirstOrderReply warga_eval(const Vector& x) {
  if (x.dim() != 2) throw DimensionMismatch(2, x.dim(), "warga_eval");
  constexpr double tol = 1e-12;
  const double u = x[0];
  const double v = x[1];
  const double inner_sum = std::abs(u) + v;
  const double value = std::abs(inner_sum) + 0.5 * u;

  const bool on_axis = std::abs(u) <= tol;
  const bool on_fold = std::abs(inner_sum) <= tol;
  if (on_axis && on_fold) return {value, Vector::zeros(2), false};
  if (on_axis) {
    // midpoint of the limits (s + 1/2, s) and (-s + 1/2, s), s = sign(v)
    const double s = inner_sum > 0.0 ? 1.0 : -1.0;
    return {value, Vector{0.5, s}, false};
  }
  if (on_fold) {
    // midpoint of (sign(u) + 1/2, 1) and (-sign(u) + 1/2, -1)
    return {value, Vector{0.5, 0.0}, false};
  }
  const double outer_sign = inner_sum > 0.0 ? 1.0 : -1.0;
  const double u_sign = u > 0.0 ? 1.0 : -1.0;
  return {value, Vector{outer_sign * u_sign + 0.5, outer_sign}, true};
}

}  // namespace statlab
