#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "statlab/rng.hpp"
#include "statlab/vector.hpp"
#include "statlab/zoo.hpp"

namespace statlab {

/// Data-parallel sweeps. Sample i always draws from rng.stream(i) and results
/// are reduced in index order, so serial and parallel runs agree bit for bit.
enum class Exec { serial, parallel };

using PureEval = std::function<FirstOrderReply(const Vector&)>;
using ValueEval = std::function<double(const Vector&)>;
using PointSampler = std::function<Vector(std::size_t index, Rng& stream)>;
using PairSampler = std::function<std::pair<Vector, Vector>(std::size_t index, Rng& stream)>;

struct NormSweep {
  double min_norm;
  double max_norm;
  std::size_t evaluated;
  /// Samples dropped because the reply was flagged non-differentiable.
  std::size_t skipped;
};

struct LipschitzSweep {
  double max_ratio;
  std::size_t pairs;
};

struct SmoothedEstimate {
  Vector mean_grad;
  double mean_value;
  /// Per-coordinate standard error of mean_grad.
  Vector grad_stderr;
  std::size_t samples;
};

namespace serial {
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);
NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only);
LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng);
SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng);
double smoothed_value(const ValueEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng);
std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points);
}  // namespace serial

namespace omp {
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);
NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only);
LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng);
SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng);
double smoothed_value(const ValueEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng);
std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points);
}  // namespace omp

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec);
NormSweep gradient_norm_sweep(const PureEval& f, const PointSampler& sample, std::size_t n, const Rng& rng,
                              bool differentiable_only, Exec exec = Exec::parallel);
LipschitzSweep lipschitz_ratio_sweep(const ValueEval& f, const PairSampler& sample, std::size_t n, const Rng& rng,
                                     Exec exec = Exec::parallel);
/// Monte Carlo E_u[grad f(x + delta u)], u uniform in the unit ball (u_i from stream i).
SmoothedEstimate smoothed_estimate(const PureEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng,
                                   Exec exec = Exec::parallel);
/// Monte Carlo E_u[f(x + delta u)] with the same u_i as smoothed_estimate.
double smoothed_value(const ValueEval& f, const Vector& x, double delta, std::size_t n, const Rng& rng,
                      Exec exec = Exec::parallel);
std::vector<FirstOrderReply> evaluate_batch(const PureEval& f, const std::vector<Vector>& points,
                                            Exec exec = Exec::parallel);

/// Unit-ball direction used for smoothing sample i.
Vector smoothing_direction(std::size_t dim, std::size_t index, const Rng& rng);

}  // namespace statlab
