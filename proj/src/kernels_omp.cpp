#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>

#include <omp.h>

#include "statlab/error.hpp"
#include "statlab/kernels.hpp"

namespace statlab {
namespace omp {

namespace {

// first exception thrown inside a parallel region, rethrown after it
class ErrorSlot {
 public:
  void capture() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  ErrorSlot err;
  const auto N = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < N; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
}

NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  ErrorSlot err;
  const auto N = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi) reduction(+ : evaluated, skipped)
  for (std::ptrdiff_t i = 0; i < N; ++i) {
    try {
      Rng s = rng.stream(static_cast<std::size_t>(i));
      const FirstOrderReply r = f(sample(static_cast<std::size_t>(i), s));
      if (differentiable_only && !r.differentiable) {
        ++skipped;
      } else {
        const double g = norm(r.subgrad);
        lo = std::min(lo, g);
        hi = std::max(hi, g);
        ++evaluated;
      }
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  return {lo, hi, evaluated, skipped};
}

LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng) {
  double hi = 0.0;
  std::size_t pairs = 0;
  ErrorSlot err;
  const auto N = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(max : hi) reduction(+ : pairs)
  for (std::ptrdiff_t i = 0; i < N; ++i) {
    try {
      Rng s = rng.stream(static_cast<std::size_t>(i));
      const auto [a, b] = sample(static_cast<std::size_t>(i), s);
      const double dist = distance(a, b);
      if (dist != 0.0) {
        hi = std::max(hi, std::abs(f(a) - f(b)) / dist);
        ++pairs;
      }
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  return {hi, pairs};
}

SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng) {
  if (n == 0) throw PreconditionViolation("smoothed_estimate: need at least one sample");
  const std::size_t d = x.dim();
  // evaluate in parallel, reduce serially in index order
  std::vector<double> grads(n * d);
  std::vector<double> values(n);
  for_each_index(n, [&](std::size_t i) {
    const Vector u = smoothing_direction(d, i, rng);
    const FirstOrderReply r = f(x + u * delta);
    std::copy(r.subgrad.raw().begin(), r.subgrad.raw().end(), grads.begin() + static_cast<std::ptrdiff_t>(i * d));
    values[i] = r.value;
  });
  Vector sum = Vector::zeros(d);
  Vector sum_sq = Vector::zeros(d);
  double value_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double g = grads[i * d + k];
      sum[k] += g;
      sum_sq[k] += g * g;
    }
    value_sum += values[i];
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
  std::vector<double> values(n);
  for_each_index(n, [&](std::size_t i) { values[i] = f(x + smoothing_direction(x.dim(), i, rng) * delta); });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(n);
}

std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points) {
  std::vector<std::optional<FirstOrderReply>> slots(points.size());
  for_each_index(points.size(), [&](std::size_t i) { slots[i] = f(points[i]); });
  std::vector<FirstOrderReply> out;
  out.reserve(points.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace omp

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  exec == Exec::serial ? serial::for_each_index(n, body) : omp::for_each_index(n, body);
}

NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only, Exec exec) {
  return exec == Exec::serial ? serial::gradient_norm_sweep(f, sample, n, rng, differentiable_only)
                              : omp::gradient_norm_sweep(f, sample, n, rng, differentiable_only);
}

LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng,
                                     Exec exec) {
  return exec == Exec::serial ? serial::lipschitz_ratio_sweep(f, sample, n, rng)
                              : omp::lipschitz_ratio_sweep(f, sample, n, rng);
}

SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng,
                                   Exec exec) {
  return exec == Exec::serial ? serial::smoothed_estimate(f, x, delta, n, rng)
                              : omp::smoothed_estimate(f, x, delta, n, rng);
}

double smoothed_value(const ValueEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng, Exec exec) {
  return exec == Exec::serial ? serial::smoothed_value(f, x, delta, n, rng) : omp::smoothed_value(f, x, delta, n, rng);
}

std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points, Exec exec) {
  return exec == Exec::serial ? serial::evaluate_batch(f, points) : omp::evaluate_batch(f, points);
}

}  // namespace statlab
