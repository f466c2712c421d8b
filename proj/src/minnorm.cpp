#include "statlab/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "statlab/error.hpp"

namespace statlab {

bool solve_linear_system(std::vector<double> a, std::vector<double> b, std::vector<double>& x, double rel_tol) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw DimensionMismatch(n * n, a.size(), "solve_linear_system");
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) <= rel_tol * scale) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return true;
}

namespace {

// Affine minimizer over the active set via the bordered system
//   [G 1; 1' 0] [mu; nu] = [0; 1]
bool affine_minimizer(const std::vector<Vector>& pts, const std::vector<std::size_t>& active,
                      std::vector<double>& mu) {
  const std::size_t m = active.size();
  const std::size_t n = m + 1;
  std::vector<double> a(n * n, 0.0);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double g = inner(pts[active[i]], pts[active[j]]);
      a[i * n + j] = g;
      a[j * n + i] = g;
    }
    a[i * n + m] = 1.0;
    a[m * n + i] = 1.0;
  }
  b[m] = 1.0;
  std::vector<double> sol;
  if (!solve_linear_system(std::move(a), std::move(b), sol, 1e-15)) return false;
  mu.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(m));
  return true;
}

Vector combine(const std::vector<Vector>& pts, const std::vector<std::size_t>& active,
               const std::vector<double>& weights) {
  Vector x = Vector::zeros(pts.front().dim());
  for (std::size_t i = 0; i < active.size(); ++i) axpy(weights[i], pts[active[i]], x);
  return x;
}

}  // namespace

MinNormResult min_norm_point(const std::vector<Vector>& points, double tol) {
  if (points.empty()) throw PreconditionViolation("min_norm_point: empty point set");
  if (!(tol > 0.0)) throw PreconditionViolation("min_norm_point: tol must be positive");
  const std::size_t dim = points.front().dim();
  for (const Vector& p : points) {
    if (p.dim() != dim) throw DimensionMismatch(dim, p.dim(), "min_norm_point");
  }

  MinNormResult result{std::vector<double>(points.size(), 0.0), Vector::zeros(dim), 0.0, 0, false};

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].is_zero()) {
      result.coefficients[i] = 1.0;
      result.converged = true;
      return result;
    }
  }

  // merge near-duplicates; origin[k] is the input index of distinct point k
  std::vector<Vector> pts;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dup = false;
    for (const Vector& q : pts) {
      if (distance(points[i], q) <= 1e-14) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      pts.push_back(points[i]);
      origin.push_back(i);
    }
  }
  const std::size_t n = pts.size();

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (norm_squared(pts[i]) < norm_squared(pts[start])) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Vector x = pts[start];

  const int cap = static_cast<int>(50 * n);
  int iter = 0;
  bool converged = false;
  while (iter < cap) {
    ++iter;
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = inner(x, pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    const double gap = norm_squared(x) - best;
    if (gap <= tol || std::find(active.begin(), active.end(), j) != active.end()) {
      converged = gap <= tol;
      if (!converged) {
        // the best vertex is already active: x is optimal up to rounding on this face
        converged = gap <= std::max(tol, 1e-9 * norm_squared(x));
      }
      break;
    }
    active.push_back(j);
    lambda.push_back(0.0);

    // minor cycles
    for (;;) {
      std::vector<double> mu;
      if (!affine_minimizer(pts, active, mu)) {
        // drop the newest point if the affine system went singular
        active.pop_back();
        lambda.pop_back();
        iter = cap;
        break;
      }
      bool interior = true;
      for (double m : mu) {
        if (m <= 1e-15) {
          interior = false;
          break;
        }
      }
      if (interior) {
        lambda = mu;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (mu[i] <= 1e-15) {
          const double denom = lambda[i] - mu[i];
          if (denom > 0.0) theta = std::min(theta, lambda[i] / denom);
        }
      }
      for (std::size_t i = 0; i < active.size(); ++i) lambda[i] = theta * mu[i] + (1.0 - theta) * lambda[i];
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_w;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] > 1e-15) {
          keep_idx.push_back(active[i]);
          keep_w.push_back(lambda[i]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(active.back());
        keep_w.push_back(1.0);
      }
      active = std::move(keep_idx);
      lambda = std::move(keep_w);
      const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      for (double& l : lambda) l /= total;
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    for (double& l : lambda) l /= total;
    x = combine(pts, active, lambda);
  }

  for (std::size_t i = 0; i < active.size(); ++i) result.coefficients[origin[active[i]]] = lambda[i];
  result.point = x;
  result.norm = norm(x);
  result.iterations = iter;
  result.converged = converged;
  return result;
}

double min_norm_brute_oracle(const std::vector<Vector>& points) {
  const std::size_t n = points.size();
  if (n == 0) throw PreconditionViolation("min_norm_brute_oracle: empty point set");
  if (n > 6) throw PreconditionViolation("min_norm_brute_oracle: at most 6 points");
  const std::size_t dim = points.front().dim();
  if (dim > 5) throw PreconditionViolation("min_norm_brute_oracle: dim at most 5");
  for (const Vector& p : points) {
    if (p.dim() != dim) throw DimensionMismatch(dim, p.dim(), "min_norm_brute_oracle");
  }

  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const Vector& last = points[idx.back()];
    const std::size_t m = idx.size() - 1;
    if (m == 0) {
      best = std::min(best, norm(last));
      continue;
    }
    // x = last + sum_i c_i (p_i - last); minimize ||x||^2 via normal equations
    std::vector<Vector> diffs;
    for (std::size_t i = 0; i < m; ++i) diffs.push_back(points[idx[i]] - last);
    std::vector<double> a(m * m);
    std::vector<double> b(m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r * m + c] = inner(diffs[r], diffs[c]);
      b[r] = -inner(diffs[r], last);
    }
    std::vector<double> c;
    if (!solve_linear_system(a, b, c, 1e-12)) continue;
    double last_weight = 1.0;
    bool feasible = true;
    for (double ci : c) {
      if (ci < -1e-12) feasible = false;
      last_weight -= ci;
    }
    if (!feasible || last_weight < -1e-12) continue;
    Vector x = last;
    for (std::size_t i = 0; i < m; ++i) axpy(c[i], diffs[i], x);
    best = std::min(best, norm(x));
  }
  return best;
}

}  // namespace statlab
