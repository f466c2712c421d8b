#include "statlab/solvers.hpp"

#include <cmath>

#include "statlab/error.hpp"
#include "statlab/minnorm.hpp"

namespace statlab {

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::constant: return "constant";
    case StepKind::inverse_sqrt: return "inverse_sqrt";
    case StepKind::exact_line_search_quadratic: return "exact_line_search_quadratic";
  }
  return "?";
}

StepKind step_kind_from_string(std::string_view s) {
  if (s == "constant") return StepKind::constant;
  if (s == "inverse_sqrt") return StepKind::inverse_sqrt;
  if (s == "exact_line_search_quadratic") return StepKind::exact_line_search_quadratic;
  throw ConfigError("unknown step schedule: " + std::string(s));
}

StepSchedule::StepSchedule(StepKind k, double s) : kind(k), scale(s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionViolation("StepSchedule: scale must be positive");
}

double StepSchedule::eta(std::size_t t) const {
  switch (kind) {
    case StepKind::constant: return scale;
    case StepKind::inverse_sqrt: return scale / std::sqrt(static_cast<double>(t));
    case StepKind::exact_line_search_quadratic: break;
  }
  throw PreconditionViolation("StepSchedule: exact line search has no fixed step");
}

nlohmann::json StepSchedule::to_json() const { return {{"kind", to_string(kind)}, {"scale", scale}}; }

namespace {

class SubgradientPlayer final : public Player {
 public:
  SubgradientPlayer(std::size_t d, StepSchedule s) : x_(Vector::zeros(d)), schedule_(s) {}
  std::optional<Vector> propose() override { return x_; }
  void observe(const Vector&, const FirstOrderReply& reply) override {
    ++t_;
    axpy(-schedule_.eta(t_), reply.subgrad, x_);
  }

 private:
  Vector x_;
  StepSchedule schedule_;
  std::size_t t_ = 0;
};

class SteepestPlayer final : public Player {
 public:
  explicit SteepestPlayer(std::size_t d) : x_(Vector::zeros(d)), grad_(Vector::zeros(d)) {}

  std::optional<Vector> propose() override {
    if (!probing_) return x_;
    return x_ - grad_ * kProbe;
  }

  void observe(const Vector&, const FirstOrderReply& reply) override {
    if (!probing_) {
      phi0_ = reply.value;
      grad_ = reply.subgrad;
      if (!grad_.is_zero()) probing_ = true;
      return;
    }
    probing_ = false;
    const double g2 = norm_squared(grad_);
    // phi(s) = phi0 - s g2 + c s^2
    const double c = (reply.value - phi0_ + kProbe * g2) / (kProbe * kProbe);
    const double step = g2 / (2.0 * c);
    if (!std::isfinite(step) || !(c > 0.0)) {
      throw PreconditionViolation("steepest_descent_exact: non-finite or non-positive line-search curvature");
    }
    axpy(-step, grad_, x_);
    ++steps_;
  }

  nlohmann::json summary() const override { return {{"steps", steps_}}; }

 private:
  static constexpr double kProbe = 1.0;
  Vector x_;
  Vector grad_;
  double phi0_ = 0.0;
  bool probing_ = false;
  std::size_t steps_ = 0;
};

class SmoothedPlayer final : public Player {
 public:
  SmoothedPlayer(std::size_t d, double delta, std::size_t n, StepSchedule s, Rng rng)
      : x_(Vector::zeros(d)), acc_(Vector::zeros(d)), delta_(delta), n_(n), schedule_(s), rng_(rng) {}

  std::optional<Vector> propose() override { return x_ + sample_ball(x_.dim(), delta_, rng_); }

  void observe(const Vector&, const FirstOrderReply& reply) override {
    acc_ += reply.subgrad;
    if (++count_ < n_) return;
    ++step_;
    axpy(-schedule_.eta(step_) / static_cast<double>(n_), acc_, x_);
    acc_ = Vector::zeros(x_.dim());
    count_ = 0;
  }

  nlohmann::json summary() const override { return {{"steps", step_}}; }

 private:
  Vector x_;
  Vector acc_;
  double delta_;
  std::size_t n_;
  StepSchedule schedule_;
  Rng rng_;
  std::size_t count_ = 0;
  std::size_t step_ = 0;
};

class GoldsteinPlayer final : public Player {
 public:
  GoldsteinPlayer(std::size_t d, GoldsteinOptions o, Rng rng) : x_(Vector::zeros(d)), opt_(std::move(o)), rng_(rng) {
    for (const Vector& s : opt_.stencil) {
      if (s.dim() != d) throw DimensionMismatch(d, s.dim(), "goldstein stencil");
    }
  }

  std::optional<Vector> propose() override {
    if (done_) return std::nullopt;
    if (grads_.empty()) return x_;
    const std::size_t k = grads_.size() - 1;
    if (!opt_.stencil.empty()) return x_ + opt_.stencil[k];
    return x_ + sample_ball(x_.dim(), opt_.delta, rng_);
  }

  void observe(const Vector&, const FirstOrderReply& reply) override {
    grads_.push_back(reply.subgrad);
    const std::size_t needed = 1 + (opt_.stencil.empty() ? opt_.samples_per_step : opt_.stencil.size());
    if (grads_.size() < needed) return;
    const MinNormResult mn = min_norm_point(grads_);
    last_norm_ = mn.norm;
    grads_.clear();
    if (mn.norm <= opt_.eps) {
      done_ = true;
      return;
    }
    ++step_;
    axpy(-opt_.schedule.eta(step_), mn.point, x_);
  }

  nlohmann::json summary() const override {
    return {{"steps", step_}, {"terminated", done_}, {"last_min_norm", last_norm_}};
  }

 private:
  Vector x_;
  GoldsteinOptions opt_;
  Rng rng_;
  std::vector<Vector> grads_;
  bool done_ = false;
  std::size_t step_ = 0;
  double last_norm_ = -1.0;
};

}  // namespace

AlgorithmDescriptor subgradient_method(StepSchedule schedule) {
  if (schedule.kind == StepKind::exact_line_search_quadratic) {
    throw PreconditionViolation("subgradient_method: use steepest_descent_exact for line search");
  }
  AlgorithmDescriptor a;
  a.name = "subgrad";
  a.class_tag = AlgorithmClass::linear_span;
  a.params = {{"schedule", schedule.to_json()}};
  a.factory = [schedule](std::size_t d, Rng) { return std::make_unique<SubgradientPlayer>(d, schedule); };
  return a;
}

AlgorithmDescriptor steepest_descent_exact() {
  AlgorithmDescriptor a;
  a.name = "steepest";
  a.class_tag = AlgorithmClass::linear_span;
  a.params = {{"schedule", StepSchedule(StepKind::exact_line_search_quadratic, 1.0).to_json()}};
  a.factory = [](std::size_t d, Rng) { return std::make_unique<SteepestPlayer>(d); };
  return a;
}

AlgorithmDescriptor smoothed_gradient_method(double delta, std::size_t n, StepSchedule schedule) {
  if (!(delta > 0.0)) throw PreconditionViolation("smoothed_gradient_method: delta must be positive");
  if (n < 1) throw PreconditionViolation("smoothed_gradient_method: samples_per_step must be >= 1");
  AlgorithmDescriptor a;
  a.name = "smoothed";
  a.class_tag = AlgorithmClass::randomized;
  a.uses_randomness = true;
  a.params = {{"delta", delta}, {"samples_per_step", n}, {"schedule", schedule.to_json()}};
  a.factory = [=](std::size_t d, Rng rng) { return std::make_unique<SmoothedPlayer>(d, delta, n, schedule, rng); };
  return a;
}

AlgorithmDescriptor goldstein_descent(GoldsteinOptions o) {
  if (!(o.delta > 0.0)) throw PreconditionViolation("goldstein_descent: delta must be positive");
  if (o.stencil.empty() && o.samples_per_step < 1) {
    throw PreconditionViolation("goldstein_descent: samples_per_step must be >= 1");
  }
  for (const Vector& s : o.stencil) {
    if (norm(s) > o.delta * (1.0 + 1e-12)) throw PreconditionViolation("goldstein_descent: stencil leaves the ball");
  }
  AlgorithmDescriptor a;
  a.name = "goldstein";
  a.class_tag = AlgorithmClass::randomized;
  a.uses_randomness = o.stencil.empty();
  nlohmann::json stencil = nlohmann::json::array();
  for (const Vector& s : o.stencil) stencil.push_back(vector_to_json(s));
  a.params = {{"delta", o.delta},
              {"samples_per_step", o.samples_per_step},
              {"schedule", o.schedule.to_json()},
              {"eps", o.eps},
              {"stencil", stencil}};
  a.factory = [o](std::size_t d, Rng rng) { return std::make_unique<GoldsteinPlayer>(d, o, rng); };
  return a;
}

namespace {

StepSchedule schedule_from(const nlohmann::json& p, StepSchedule fallback) {
  if (!p.contains("schedule")) return fallback;
  const auto& s = p.at("schedule");
  return StepSchedule(step_kind_from_string(s.value("kind", std::string(to_string(fallback.kind)))),
                      s.value("scale", fallback.scale));
}

}  // namespace

AlgorithmDescriptor make_solver(const std::string& name, const nlohmann::json& params) {
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  try {
    if (name == "subgrad") return subgradient_method(schedule_from(p, {StepKind::constant, 0.1}));
    if (name == "steepest") return steepest_descent_exact();
    if (name == "smoothed") {
      return smoothed_gradient_method(p.value("delta", 0.1), p.value("samples_per_step", std::size_t{8}),
                                      schedule_from(p, {StepKind::constant, 0.1}));
    }
    if (name == "goldstein") {
      GoldsteinOptions o;
      o.delta = p.value("delta", o.delta);
      o.samples_per_step = p.value("samples_per_step", o.samples_per_step);
      o.eps = p.value("eps", o.eps);
      o.schedule = schedule_from(p, o.schedule);
      if (p.contains("stencil")) {
        for (const auto& s : p.at("stencil")) o.stencil.push_back(vector_from_json(s));
      }
      return goldstein_descent(std::move(o));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver parameters: ") + e.what());
  } catch (const PreconditionViolation& e) {
    throw ConfigError(std::string("solver parameters: ") + e.what());
  }
  throw ConfigError("unknown solver: " + name);
}

}  // namespace statlab
