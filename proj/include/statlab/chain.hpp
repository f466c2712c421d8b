#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "statlab/vector.hpp"
#include "statlab/zoo.hpp"

namespace statlab {

/// Chain-structured strongly convex quadratic
///
///   g(x) = 1/8 (x_1^2 + sum_{i<T} (x_i - x_{i+1})^2 + (k - 1) x_T^2 - 2 x_1) + 1/2 ||x||^2 + b
///        = (x - x*)' M (x - x*),    M = (A + 4I) / 8,
///
/// with A the T x T tridiagonal block (2 on the diagonal, k in the last slot,
/// -1 off the diagonal) padded by zeros up to dimension d. Its minimizer is
/// x* = (q, q^2, ..., q^T, 0, ..., 0).
class HardQuadratic {
 public:
  HardQuadratic(int T, std::size_t d);

  /// (sqrt 2 + 3) / (sqrt 2 + 1)
  static double chain_k() noexcept;
  /// (sqrt 2 - 1) / (sqrt 2 + 1)
  static double chain_q() noexcept;

  int T() const noexcept { return T_; }
  std::size_t d() const noexcept { return d_; }
  double k() const noexcept { return k_; }
  double q() const noexcept { return q_; }
  double b() const noexcept { return b_; }
  /// Minimizer in natural coordinates.
  const Vector& x_star() const noexcept { return x_star_; }
  /// First T coordinates of x_star.
  std::span<const double> chain_minimizer() const noexcept { return std::span(x_star_.raw()).first(T_); }

  /// y -> A y on the T-dimensional block.
  std::vector<double> apply_block(std::span<const double> y) const;
  /// 1/8 (y_1^2 + sum (y_i - y_{i+1})^2 + (k - 1) y_T^2 - 2 y_1)
  double chain_part(std::span<const double> y) const;
  /// Gradient of chain_part: (A y - e_1) / 4.
  std::vector<double> chain_part_gradient(std::span<const double> y) const;

  /// Diagonal and off-diagonal of the T x T block of M.
  std::pair<std::vector<double>, std::vector<double>> m_block_tridiagonal() const;

 private:
  int T_;
  std::size_t d_;
  double k_;
  double q_;
  Vector x_star_;
  double b_ = 0.0;
};

/// Symmetric tridiagonal eigen-decomposition by implicit QL.
/// Returns eigenvalues (ascending) and row-major eigenvectors (column j is vector j).
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> vectors;  // n x n row-major
  std::size_t n = 0;
};
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag);

/// k-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix by Sturm-count bisection.
double tridiagonal_eigenvalue_bisection(std::span<const double> diag, std::span<const double> offdiag,
                                        std::size_t k);

struct SpectrumBounds {
  double lambda_min;
  double lambda_max;
};

/// Extreme eigenvalues of the d x d M, by bisection on its T x T block (the
/// remaining coordinates contribute eigenvalue 1/2). Test utility: T <= 64.
SpectrumBounds chain_spectrum_check(const HardQuadratic& hq);

/// The quadratic g~(x) = g(U x) expressed through an orthonormal frame u_1..u_m
/// (m <= T) standing for the first rows of U; coordinates along unselected
/// u_i are taken as zero. The natural frame is u_i = e_i.
///
/// Also the PositiveDefiniteMap for M~ = U' M U and its root.
class ChainGeometry final : public PositiveDefiniteMap {
 public:
  static std::shared_ptr<const ChainGeometry> natural(std::shared_ptr<const HardQuadratic> base);
  static std::shared_ptr<const ChainGeometry> rotated(std::shared_ptr<const HardQuadratic> base,
                                                      std::vector<Vector> frame);

  std::size_t dim() const override { return base_->d(); }
  const HardQuadratic& base() const noexcept { return *base_; }
  std::shared_ptr<const HardQuadratic> base_ptr() const noexcept { return base_; }
  bool is_natural() const noexcept { return natural_; }
  /// Frame vectors (empty for the natural geometry).
  const std::vector<Vector>& frame() const noexcept { return frame_; }
  /// Number of chain directions available (T when natural or complete).
  std::size_t selected() const noexcept { return natural_ ? base_->T() : frame_.size(); }
  bool complete() const noexcept { return selected() == static_cast<std::size_t>(base_->T()); }

  /// y_i = u_i' x for i < T (zero beyond the selected frame).
  std::vector<double> chain_coords(const Vector& x) const;
  /// out += sum_i y_i u_i
  void add_along_chain(std::span<const double> y, Vector& out) const;

  /// Value and gradient of g~ at x.
  FirstOrderReply quadratic(const Vector& x) const;
  /// Minimizer U' x* = sum_i x*_i u_i; needs a complete frame.
  Vector x_star() const;

  Vector apply(const Vector& x) const override;
  Vector apply_sqrt(const Vector& x) const override;

 private:
  ChainGeometry(std::shared_ptr<const HardQuadratic> base, std::vector<Vector> frame, bool natural);

  std::shared_ptr<const HardQuadratic> base_;
  std::vector<Vector> frame_;
  bool natural_;
  std::vector<double> block_root_;  // T x T row-major root of the M block
};

}  // namespace statlab
