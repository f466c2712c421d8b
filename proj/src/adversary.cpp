#include "statlab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "statlab/error.hpp"

namespace statlab {

ChainQuadraticOracle::ChainQuadraticOracle(std::shared_ptr<const ChainGeometry> geometry)
    : geometry_(std::move(geometry)) {
  if (!geometry_) throw PreconditionViolation("ChainQuadraticOracle: geometry missing");
  if (!geometry_->complete()) throw PreconditionViolation("ChainQuadraticOracle: frame incomplete");
}

RotationOracle::RotationOracle(std::shared_ptr<const HardQuadratic> base)
    : base_(std::move(base)), frame_(base_ ? base_->d() : 1) {
  if (!base_) throw PreconditionViolation("RotationOracle: base quadratic missing");
  if (base_->d() < 2 * static_cast<std::size_t>(base_->T())) {
    throw PreconditionViolation("RotationOracle: needs d >= 2T");
  }
}

FirstOrderReply RotationOracle::query(const Vector& x) {
  if (x.dim() != dim()) throw DimensionMismatch(dim(), x.dim(), "RotationOracle");
  if (seen_.size() >= static_cast<std::size_t>(base_->T())) {
    throw BudgetExceeded("RotationOracle: more than T queries");
  }
  std::vector<Vector> avoid = seen_;
  avoid.push_back(x);
  frame_.append(extend_orthonormal(frame_, avoid));
  seen_.push_back(x);

  // only u_1..u_t exist so far; the missing coordinates are zero by construction
  const std::size_t n = static_cast<std::size_t>(base_->T());
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < frame_.size(); ++i) y[i] = inner(frame_[i], x);
  const double value = base_->chain_part(y) + 0.5 * norm_squared(x) + base_->b();
  const std::vector<double> c = base_->chain_part_gradient(y);
  Vector grad = x;
  for (std::size_t i = 0; i < frame_.size(); ++i) axpy(c[i], frame_[i], grad);
  return {value, std::move(grad), true};
}

std::shared_ptr<const ChainGeometry> RotationOracle::materialize() const {
  OrthonormalFrame full = frame_;
  while (full.size() < static_cast<std::size_t>(base_->T())) full.append(extend_orthonormal(full, seen_));
  return ChainGeometry::rotated(base_, full.vectors());
}

std::string_view to_string(ChannelMode m) {
  return m == ChannelMode::deterministic_orthogonal ? "deterministic_orthogonal" : "randomized_sphere";
}

std::string_view to_string(BaseGeometry g) {
  switch (g) {
    case BaseGeometry::automatic: return "auto";
    case BaseGeometry::natural: return "natural";
    case BaseGeometry::rotation: return "rotation";
  }
  return "?";
}

double ChannelAdversaryConfig::resolved_w_norm(int T) const {
  const double v = w_norm.value_or(std::exp(-static_cast<double>(T)) / 300.0);
  if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionViolation("channel adversary: w_norm must be positive");
  if (v < kMinWNorm) {
    throw PreconditionViolation("channel adversary: w_norm below the 1e-11 underflow guard (T too large)");
  }
  return v;
}

double almosthard2_threshold(int T, double dist) {
  return 1.0 / (2.0 * std::numbers::sqrt2) - std::exp(-static_cast<double>(T)) / (100.0 * dist);
}

bool ChannelBuild::all_almosthard2() const {
  return std::all_of(almosthard2.begin(), almosthard2.end(), [](bool b) { return b; });
}

nlohmann::json ChannelBuild::diagnostics() const {
  nlohmann::json iterates = nlohmann::json::array();
  for (const auto& e : f_transcript) iterates.push_back(vector_to_json(e.query));
  double route_gap = 0.0;
  const std::size_t n = std::min(f_transcript.size(), sqrt_route_transcript.size());
  for (std::size_t i = 0; i < n; ++i) {
    route_gap = std::max(route_gap, distance(f_transcript[i].query, sqrt_route_transcript[i].query));
  }
  return {{"mode", to_string(mode)},
          {"geometry", to_string(geometry_kind)},
          {"w_norm", w_norm},
          {"w", vector_to_json(instance.w())},
          {"iterates", iterates},
          {"distances", distances},
          {"alignments", alignments},
          {"almosthard2", almosthard2},
          {"all_almosthard2", all_almosthard2()},
          {"max_alignment", max_alignment},
          {"replay_identical", replay_identical},
          {"sqrt_route_max_query_gap", route_gap},
          {"sqrt_route_length", sqrt_route_transcript.size()}};
}

ChannelBuild build_channel_instance(const ChannelAdversaryConfig& cfg, const AlgorithmDescriptor& algorithm, int T,
                                    std::size_t d, const Rng& rng) {
  if (T < 2) throw PreconditionViolation("build_channel_instance: T must be >= 2");
  const double w_norm = cfg.resolved_w_norm(T);
  BaseGeometry kind = cfg.geometry;
  if (kind == BaseGeometry::automatic) {
    kind = algorithm.class_tag == AlgorithmClass::linear_span ? BaseGeometry::natural : BaseGeometry::rotation;
  }
  const auto Tz = static_cast<std::size_t>(T);
  if (kind == BaseGeometry::rotation && d < 2 * Tz) {
    throw PreconditionViolation("build_channel_instance: rotation geometry needs d >= 2T");
  }
  if (cfg.mode == ChannelMode::deterministic_orthogonal && d <= Tz) {
    throw PreconditionViolation("build_channel_instance: deterministic mode needs d > T");
  }

  auto hq = std::make_shared<const HardQuadratic>(T, d);

  // the algorithm on sqrt(quadratic oracle); for rotation this is where U gets committed
  std::shared_ptr<const ChainGeometry> geometry;
  std::optional<Transcript> sqrt_route;
  if (kind == BaseGeometry::natural) {
    geometry = ChainGeometry::natural(hq);
    ChainQuadraticOracle quad(geometry);
    SqrtOracle root(quad);
    sqrt_route = play(algorithm, root, Tz, d, rng);
  } else {
    RotationOracle rot(hq);
    SqrtOracle root(rot);
    sqrt_route = play(algorithm, root, Tz, d, rng);
    geometry = rot.materialize();
  }

  const Vector x_star = geometry->x_star();
  NormDistance f_tilde(geometry, x_star);
  FunctionOracle direct(d, [f_tilde](const Vector& x) { return norm_distance_eval(f_tilde, x); });
  Transcript f_run = play(algorithm, direct, Tz, d, rng);

  if (algorithm.class_tag == AlgorithmClass::linear_span) {
    const SpanCheck span = validate_span(f_run);
    if (!span.ok) {
      throw ConstructionFailure("build_channel_instance: algorithm tagged linear_span left its span at query " +
                                std::to_string(span.first_violation));
    }
  }

  const double floor = std::exp(-static_cast<double>(T));
  std::vector<double> distances;
  std::vector<Vector> inner_points;
  for (std::size_t t = 0; t < f_run.size(); ++t) {
    const double dist = distance(f_run[t].query, x_star);
    if (!(dist >= floor)) {
      throw ConstructionFailure("build_channel_instance: iterate " + std::to_string(t + 1) +
                                " is closer than exp(-T) to x*");
    }
    distances.push_back(dist);
    inner_points.push_back(geometry->apply_sqrt(f_run[t].query - x_star));
  }

  Vector w = Vector::zeros(d);
  if (cfg.mode == ChannelMode::deterministic_orthogonal) {
    w = extend_orthonormal(OrthonormalFrame(d), inner_points) * w_norm;
  } else {
    Rng adversary = rng.derive("adversary");
    w = sample_sphere(d, w_norm, adversary);
  }
  const Vector w_bar = normalize(w);

  ChannelBuild build{ChannelInstance::hard(w, AffineComposition{geometry, x_star}),
                     geometry,
                     kind,
                     f_tilde,
                     std::move(f_run),
                     std::move(*sqrt_route),
                     std::move(distances),
                     {},
                     {},
                     0.0,
                     false,
                     w_norm,
                     cfg.mode};
  build.max_alignment = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < inner_points.size(); ++t) {
    const double a = inner(w_bar, normalize(inner_points[t]));
    build.alignments.push_back(a);
    build.almosthard2.push_back(a <= almosthard2_threshold(T, build.distances[t]));
    build.max_alignment = std::max(build.max_alignment, a);
  }

  // replay on h_w with the same coins
  ChannelInstance h = build.instance;
  FunctionOracle h_oracle(d, [h](const Vector& x) { return channel_eval(h, x); });
  const Transcript replay = play(algorithm, h_oracle, Tz, d, rng);
  build.replay_identical = replay.size() == build.f_transcript.size();
  for (std::size_t t = 0; build.replay_identical && t < replay.size(); ++t) {
    build.replay_identical = replay[t].query == build.f_transcript[t].query;
  }
  return build;
}

}  // namespace statlab
