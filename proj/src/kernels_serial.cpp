#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/error.hpp"
#include "statlab/kernels.hpp"

namespace statlab {

Vector smoothing_direction(std::size_t dim, std::size_t index, const Rng& rng) {
  Rng s = rng.stream(index);
  return sample_ball(dim, 1.0, s);
}

namespace serial {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only) {
  NormSweep out{std::numeric_limits<double>::infinity(), 0.0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    Rng s = rng.stream(i);
    const FirstOrderReply r = f(sample(i, s));
    if (differentiable_only && !r.differentiable) {
      ++out.skipped;
      continue;
    }
    const double g = norm(r.subgrad);
    out.min_norm = std::min(out.min_norm, g);
    out.max_norm = std::max(out.max_norm, g);
    ++out.evaluated;
  }
  return out;
}

LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng) {
  LipschitzSweep out{0.0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    Rng s = rng.stream(i);
    const auto [a, b] = sample(i, s);
    const double dist = distance(a, b);
    if (dist == 0.0) continue;
    out.max_ratio = std::max(out.max_ratio, std::abs(f(a) - f(b)) / dist);
    ++out.pairs;
  }
  return out;
}

SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng) {
  if (n == 0) throw PreconditionViolation("smoothed_estimate: need at least one sample");
  const std::size_t d = x.dim();
  Vector sum = Vector::zeros(d);
  Vector sum_sq = Vector::zeros(d);
  double value_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector u = smoothing_direction(d, i, rng);
    const FirstOrderReply r = f(x + u * delta);
    sum += r.subgrad;
    for (std::size_t k = 0; k < d; ++k) sum_sq[k] += r.subgrad[k] * r.subgrad[k];
    value_sum += r.value;
  }
  const double nn = static_cast<double>(n);
  Vector mean = sum / nn;
  Vector se = Vector::zeros(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double var = std::max(0.0, sum_sq[k] / nn - mean[k] * mean[k]);
    se[k] = std::sqrt(var / nn);
  }
  return {std::move(mean), value_sum / nn, std::move(se), n};
}

double smoothed_value(const ValueEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng) {
  if (n == 0) throw PreconditionViolation("smoothed_value: need at least one sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(x + smoothing_direction(x.dim(), i, rng) * delta);
  return sum / static_cast<double>(n);
}

std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points) {
  std::vector<FirstOrderReply> out;
  out.reserve(points.size());
  for (const Vector& p : points) out.push_back(f(p));
  return out;
}

}  // namespace serial
}  // namespace statlab
