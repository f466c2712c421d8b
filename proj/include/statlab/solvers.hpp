#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "statlab/oracle.hpp"

namespace statlab {

enum class StepKind { constant, inverse_sqrt, exact_line_search_quadratic };

std::string_view to_string(StepKind k);
StepKind step_kind_from_string(std::string_view s);

struct StepSchedule {
  StepKind kind = StepKind::constant;
  double scale = 0.1;

  StepSchedule() = default;
  StepSchedule(StepKind kind, double scale);

  /// Step size at 1-based step t (not defined for exact line search).
  double eta(std::size_t t) const;
  nlohmann::json to_json() const;
};

/// x_1 = 0, x_{t+1} = x_t - eta_t g_t.
AlgorithmDescriptor subgradient_method(StepSchedule schedule = {});

/// Exact line search for quadratics: each step spends one query at x_t and
/// one value probe at x_t - g_t, then moves to the minimizer of the parabola.
AlgorithmDescriptor steepest_descent_exact();

/// Steps along minus the average of subgradients at x_t + delta u_i, u_i uniform
/// in the unit ball; every sample is one query.
AlgorithmDescriptor smoothed_gradient_method(double delta, std::size_t samples_per_step, StepSchedule schedule = {});

/// Goldstein-style descent: queries the center and samples of the delta-ball
/// (or fixed stencil offsets), steps along minus the min-norm hull element and
/// stops once its norm is <= eps.
struct GoldsteinOptions {
  double delta = 0.1;
  std::size_t samples_per_step = 32;
  StepSchedule schedule{};
  double eps = 1e-8;
  /// Offsets from the center used instead of random samples when non-empty.
  std::vector<Vector> stencil;
};
AlgorithmDescriptor goldstein_descent(GoldsteinOptions options);

/// Looks a solver up by config name ("subgrad", "steepest", "smoothed", "goldstein").
AlgorithmDescriptor make_solver(const std::string& name, const nlohmann::json& params);

}  // namespace statlab
