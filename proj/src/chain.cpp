#include "statlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "statlab/error.hpp"

namespace statlab {

double HardQuadratic::chain_k() noexcept {
  return (std::numbers::sqrt2 + 3.0) / (std::numbers::sqrt2 + 1.0);
}

double HardQuadratic::chain_q() noexcept {
  return (std::numbers::sqrt2 - 1.0) / (std::numbers::sqrt2 + 1.0);
}

HardQuadratic::HardQuadratic(int T, std::size_t d)
    : T_(T), d_(d), k_(chain_k()), q_(chain_q()), x_star_(Vector::zeros(d == 0 ? 1 : d)) {
  if (T < 2) throw PreconditionViolation("HardQuadratic: T must be >= 2");
  if (d < static_cast<std::size_t>(T)) throw PreconditionViolation("HardQuadratic: d must be >= T");
  double power = 1.0;
  for (int i = 0; i < T; ++i) {
    power *= q_;
    x_star_[i] = power;
  }
  // fix b so that the chain form vanishes at x*, in the same arithmetic used by evaluation
  b_ = -(chain_part(chain_minimizer()) + 0.5 * norm_squared(x_star_));
}

std::vector<double> HardQuadratic::apply_block(std::span<const double> y) const {
  const std::size_t n = static_cast<std::size_t>(T_);
  if (y.size() != n) throw DimensionMismatch(n, y.size(), "HardQuadratic::apply_block");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = (i + 1 == n ? k_ : 2.0) * y[i];
    if (i > 0) s -= y[i - 1];
    if (i + 1 < n) s -= y[i + 1];
    out[i] = s;
  }
  return out;
}

double HardQuadratic::chain_part(std::span<const double> y) const {
  const std::size_t n = static_cast<std::size_t>(T_);
  if (y.size() != n) throw DimensionMismatch(n, y.size(), "HardQuadratic::chain_part");
  double s = y[0] * y[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double diff = y[i] - y[i + 1];
    s += diff * diff;
  }
  s += (k_ - 1.0) * y[n - 1] * y[n - 1];
  s -= 2.0 * y[0];
  return s / 8.0;
}

std::vector<double> HardQuadratic::chain_part_gradient(std::span<const double> y) const {
  std::vector<double> g = apply_block(y);
  g[0] -= 1.0;
  for (double& e : g) e /= 4.0;
  return g;
}

std::pair<std::vector<double>, std::vector<double>> HardQuadratic::m_block_tridiagonal() const {
  const std::size_t n = static_cast<std::size_t>(T_);
  std::vector<double> diag(n, (2.0 + 4.0) / 8.0);
  diag[n - 1] = (k_ + 4.0) / 8.0;
  std::vector<double> off(n - 1, -1.0 / 8.0);
  return {std::move(diag), std::move(off)};
}

// ---------------------------------------------------------------------------

TridiagonalEigen tridiagonal_eigen(std::vector<double> d, std::vector<double> offdiag) {
  const std::size_t n = d.size();
  if (n == 0) throw PreconditionViolation("tridiagonal_eigen: empty matrix");
  if (offdiag.size() + 1 != n) throw DimensionMismatch(n - 1, offdiag.size(), "tridiagonal_eigen");

  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  const auto Z = [&](std::size_t r, std::size_t c) -> double& { return z[r * n + c]; };
  const int N = static_cast<int>(n);

  for (int l = 0; l < N; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < N - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw Error("tridiagonal_eigen: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = Z(k, i + 1);
            Z(k, i + 1) = s * Z(k, i) + c * f;
            Z(k, i) = c * Z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  // sort ascending, permuting eigenvector columns alongside
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + j] = z[r * n + order[j]];
  }
  return out;
}

namespace {

// number of eigenvalues strictly below x
std::size_t sturm_count(std::span<const double> a, std::span<const double> b, double x) {
  std::size_t count = 0;
  double q = a[0] - x;
  const double tiny = std::numeric_limits<double>::min();
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    q = a[i] - x - b[i - 1] * b[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double tridiagonal_eigenvalue_bisection(std::span<const double> a, std::span<const double> b,
                                        std::size_t k) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() + 1 != n) throw PreconditionViolation("tridiagonal_eigenvalue_bisection: bad shape");
  if (k >= n) throw PreconditionViolation("tridiagonal_eigenvalue_bisection: index out of range");
  // Gershgorin enclosure
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(b[i - 1]);
    if (i + 1 < n) radius += std::abs(b[i]);
    lo = std::min(lo, a[i] - radius);
    hi = std::max(hi, a[i] + radius);
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(a, b, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SpectrumBounds chain_spectrum_check(const HardQuadratic& hq) {
  if (hq.T() > 64) throw PreconditionViolation("chain_spectrum_check: T above the dense-check limit of 64");
  const auto [diag, off] = hq.m_block_tridiagonal();
  const std::size_t n = diag.size();
  double lo = tridiagonal_eigenvalue_bisection(diag, off, 0);
  double hi = tridiagonal_eigenvalue_bisection(diag, off, n - 1);
  if (hq.d() > n) {
    lo = std::min(lo, 0.5);
    hi = std::max(hi, 0.5);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------

ChainGeometry::ChainGeometry(std::shared_ptr<const HardQuadratic> base, std::vector<Vector> frame, bool natural)
    : base_(std::move(base)), frame_(std::move(frame)), natural_(natural) {
  if (!base_) throw PreconditionViolation("ChainGeometry: base quadratic missing");
  if (frame_.size() > static_cast<std::size_t>(base_->T())) {
    throw PreconditionViolation("ChainGeometry: frame larger than T");
  }
  for (const Vector& u : frame_) {
    if (u.dim() != base_->d()) throw DimensionMismatch(base_->d(), u.dim(), "ChainGeometry frame");
  }
  auto [diag, off] = base_->m_block_tridiagonal();
  const TridiagonalEigen eig = tridiagonal_eigen(std::move(diag), std::move(off));
  const std::size_t n = eig.n;
  block_root_.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double root = std::sqrt(eig.values[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = eig.vectors[r * n + j] * root;
      for (std::size_t c = 0; c < n; ++c) block_root_[r * n + c] += vr * eig.vectors[c * n + j];
    }
  }
}

std::shared_ptr<const ChainGeometry> ChainGeometry::natural(std::shared_ptr<const HardQuadratic> base) {
  return std::shared_ptr<const ChainGeometry>(new ChainGeometry(std::move(base), {}, true));
}

std::shared_ptr<const ChainGeometry> ChainGeometry::rotated(std::shared_ptr<const HardQuadratic> base,
                                                            std::vector<Vector> frame) {
  return std::shared_ptr<const ChainGeometry>(new ChainGeometry(std::move(base), std::move(frame), false));
}

std::vector<double> ChainGeometry::chain_coords(const Vector& x) const {
  if (x.dim() != dim()) throw DimensionMismatch(dim(), x.dim(), "ChainGeometry");
  const std::size_t n = static_cast<std::size_t>(base_->T());
  std::vector<double> y(n, 0.0);
  if (natural_) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i];
  } else {
    for (std::size_t i = 0; i < frame_.size(); ++i) y[i] = inner(frame_[i], x);
  }
  return y;
}

void ChainGeometry::add_along_chain(std::span<const double> y, Vector& out) const {
  if (natural_) {
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += y[i];
  } else {
    for (std::size_t i = 0; i < frame_.size(); ++i) axpy(y[i], frame_[i], out);
  }
}

FirstOrderReply ChainGeometry::quadratic(const Vector& x) const {
  const std::vector<double> y = chain_coords(x);
  const double value = base_->chain_part(y) + 0.5 * norm_squared(x) + base_->b();
  Vector grad = x;
  add_along_chain(base_->chain_part_gradient(y), grad);
  return {value, std::move(grad), true};
}

Vector ChainGeometry::x_star() const {
  if (natural_) return base_->x_star();
  if (!complete()) throw PreconditionViolation("ChainGeometry::x_star: frame incomplete");
  Vector out = Vector::zeros(dim());
  add_along_chain(base_->chain_minimizer(), out);
  return out;
}

Vector ChainGeometry::apply(const Vector& x) const {
  std::vector<double> y = chain_coords(x);
  std::vector<double> ay = base_->apply_block(y);
  for (double& e : ay) e /= 8.0;
  Vector out = x * 0.5;
  add_along_chain(ay, out);
  return out;
}

Vector ChainGeometry::apply_sqrt(const Vector& x) const {
  const std::vector<double> y = chain_coords(x);
  const std::size_t n = y.size();
  // root of M on the chain block, sqrt(1/2) on its orthogonal complement
  std::vector<double> ry(n, 0.0);
  std::vector<double> minus_y(n);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += block_root_[r * n + c] * y[c];
    ry[r] = s;
    minus_y[r] = -y[r];
  }
  Vector complement = x;
  add_along_chain(minus_y, complement);
  Vector out = complement * std::sqrt(0.5);
  add_along_chain(ry, out);
  return out;
}

}  // namespace statlab
