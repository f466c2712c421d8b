#include "statlab/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "statlab/error.hpp"

namespace statlab {

const ConstantsTable& ConstantsTable::standard() {
  static const ConstantsTable table{ChannelInstance::kLipschitz, 1.0 / (2.0 * std::numbers::sqrt2), 1.5, 1.0 / 7.0,
                                    2.0 * std::numbers::pi};
  return table;
}

nlohmann::json ConstantsTable::to_json() const {
  return {{"lipschitz_channel", lipschitz_channel},
          {"stationarity_threshold", stationarity_threshold},
          {"value_gap", value_gap},
          {"distance_bound", distance_bound},
          {"lipschitz_spiral_ball", lipschitz_spiral_ball}};
}

namespace {

StationarityCertificate make_certificate(CertificateKind kind, double value) {
  StationarityCertificate c;
  c.kind = kind;
  c.value = value;
  return c;
}

}  // namespace

std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::eps_stationary_witness: return "eps_stationary_witness";
    case CertificateKind::delta_eps_witness: return "delta_eps_witness";
    case CertificateKind::near_distance_lower_bound: return "near_distance_lower_bound";
    case CertificateKind::subdiff_norm_lower_bound: return "subdiff_norm_lower_bound";
  }
  return "?";
}

Vector Witness::combination() const {
  if (subgradients.empty()) throw PreconditionViolation("Witness: empty");
  Vector out = Vector::zeros(subgradients.front().dim());
  for (std::size_t i = 0; i < subgradients.size(); ++i) axpy(coefficients[i], subgradients[i], out);
  return out;
}

nlohmann::json StationarityCertificate::to_json() const {
  nlohmann::json j = {{"kind", to_string(kind)}, {"value", value}, {"constants", constants->to_json()}};
  if (!sound_direction.empty()) j["sound_direction"] = sound_direction;
  if (witness) {
    nlohmann::json pts = nlohmann::json::array();
    nlohmann::json grads = nlohmann::json::array();
    for (const Vector& p : witness->points) pts.push_back(vector_to_json(p));
    for (const Vector& g : witness->subgradients) grads.push_back(vector_to_json(g));
    j["witness"] = {{"points", pts}, {"subgradients", grads}, {"coefficients", witness->coefficients}};
  } else {
    j["witness"] = nullptr;
  }
  if (!details.empty()) j["details"] = details;
  return j;
}

StationarityCertificate certify_eps(Oracle& oracle, const Vector& x, double eps) {
  const FirstOrderReply r = oracle.query(x);
  StationarityCertificate c = make_certificate(CertificateKind::eps_stationary_witness, norm(r.subgrad));
  c.details = {{"eps", eps}, {"differentiable", r.differentiable}, {"function_value", r.value}};
  if (c.value <= eps) c.witness = Witness{{x}, {r.subgrad}, {1.0}};
  return c;
}

Sampling Sampling::ball_uniform(std::size_t n) {
  if (n == 0) throw PreconditionViolation("Sampling: need at least one sample");
  return {Kind::ball_uniform, n, {}};
}

Sampling Sampling::stencil(std::vector<Vector> offsets) {
  if (offsets.empty()) throw PreconditionViolation("Sampling: empty stencil");
  const std::size_t n = offsets.size();
  return {Kind::stencil, n, std::move(offsets)};
}

StationarityCertificate certify_delta_eps(Oracle& oracle, const Vector& x, double delta, double eps,
                                          const Sampling& sampling, Rng& rng, Exec exec) {
  if (!(delta > 0.0)) throw PreconditionViolation("certify_delta_eps: delta must be positive");
  std::vector<Vector> points;
  if (sampling.kind == Sampling::Kind::stencil) {
    for (const Vector& off : sampling.offsets) {
      if (off.dim() != x.dim()) throw DimensionMismatch(x.dim(), off.dim(), "certify_delta_eps stencil");
      points.push_back(x + off);
    }
  } else {
    const Rng base = rng.derive("certifier");
    for (std::size_t i = 0; i < sampling.samples; ++i) {
      Rng s = base.stream(i);
      points.push_back(x + sample_ball(x.dim(), delta, s));
    }
    rng.next_u64();  // advance the caller's state
  }
  for (const Vector& p : points) {
    if (distance(p, x) > delta * (1.0 + 1e-12)) {
      throw Error("certify_delta_eps: sample point outside the closed delta-ball");
    }
  }

  std::vector<FirstOrderReply> replies;
  if (oracle.is_pure() && exec == Exec::parallel) {
    replies = evaluate_batch([&oracle](const Vector& p) { return oracle.query(p); }, points, Exec::parallel);
  } else {
    for (const Vector& p : points) replies.push_back(oracle.query(p));
  }
  std::vector<Vector> grads;
  for (const auto& r : replies) grads.push_back(r.subgrad);

  const MinNormResult mn = min_norm_point(grads);
  StationarityCertificate c = make_certificate(CertificateKind::delta_eps_witness, mn.norm);
  c.sound_direction = "stationarity_only";
  c.details = {{"delta", delta},
               {"eps", eps},
               {"samples", points.size()},
               {"min_norm_converged", mn.converged},
               {"min_norm_iterations", mn.iterations},
               {"sampling", sampling.kind == Sampling::Kind::stencil ? "stencil" : "ball_uniform"}};
  if (mn.norm <= eps) c.witness = Witness{std::move(points), std::move(grads), mn.coefficients};
  return c;
}

StationarityCertificate subdiff_norm_lower_bound(const ChannelInstance& inst, const Vector& x) {
  const ChannelRegion region = region_classify(inst, x);
  double bound = 1.0;
  switch (region) {
    case ChannelRegion::clamp_active:
    case ChannelRegion::clamp_boundary:
      throw PreconditionViolation("subdiff_norm_lower_bound: no bound in the clamp region");
    case ChannelRegion::hinge_boundary: bound = 1.0 / std::numbers::sqrt2; break;
    case ChannelRegion::origin:
    case ChannelRegion::minus_w:
    case ChannelRegion::hinge_inactive:
    case ChannelRegion::hinge_active: bound = 1.0; break;
  }
  const bool composed = inst.affine().has_value();
  // singular values of M^{1/2} are at least 1/sqrt 2
  if (composed) bound /= std::numbers::sqrt2;
  StationarityCertificate c = make_certificate(CertificateKind::subdiff_norm_lower_bound, bound);
  c.details = {{"region", to_string(region)}, {"composed", composed}};
  return c;
}

StationarityCertificate near_stationarity_distance_lb(const ChannelInstance& inst, const Vector& x) {
  if (!inst.clamp()) throw PreconditionViolation("near_stationarity_distance_lb: instance has no clamp");
  const double clamp = *inst.clamp();
  const FirstOrderReply r = channel_eval(inst, x);
  const ConstantsTable& k = ConstantsTable::standard();
  const double bound = std::max(0.0, (r.value - clamp) / k.lipschitz_channel);
  StationarityCertificate c = make_certificate(CertificateKind::near_distance_lower_bound, bound);
  const double eps_below = inst.affine() ? k.stationarity_threshold : 1.0 / std::numbers::sqrt2;
  c.details = {{"function_value", r.value}, {"clamp", clamp}, {"applies_for_eps_below", eps_below}};
  return c;
}

}  // namespace statlab
