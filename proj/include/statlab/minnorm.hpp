#pragma once

#include <vector>

#include "statlab/vector.hpp"

namespace statlab {

/// Minimum-norm point of conv(points) together with its convex weights.
struct MinNormResult {
  /// One weight per input point (duplicates of a kept point get weight 0).
  std::vector<double> coefficients;
  Vector point;
  double norm;
  int iterations = 0;
  bool converged = false;
};

/// Wolfe's minimum-norm-point algorithm.
///
/// Stops when the gap <x, x - p_j> over the best vertex p_j is <= tol, or after
/// 50 * (number of distinct points) major cycles (then converged = false).
/// Points closer than 1e-14 are merged first; a zero point returns norm 0 at once.
MinNormResult min_norm_point(const std::vector<Vector>& points, double tol = 1e-10);

/// Exact min-norm over the hull by enumerating subsets (<= 6 points, dim <= 5).
/// Each subset's affine minimizer is found with the last weight eliminated.
double min_norm_brute_oracle(const std::vector<Vector>& points);

/// Solves the square system a x = b (row-major n x n) by Gaussian elimination
/// with partial pivoting; returns false when a pivot falls below rel_tol times
/// the largest entry.
bool solve_linear_system(std::vector<double> a, std::vector<double> b, std::vector<double>& x,
                         double rel_tol = 1e-13);

}  // namespace statlab
