#include "statlab/vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "statlab/error.hpp"

namespace statlab {

namespace {

void validate(const std::vector<double>& entries) {
  if (entries.empty()) throw PreconditionViolation("Vector: dimension must be >= 1");
  for (double e : entries) {
    if (!std::isfinite(e)) throw PreconditionViolation("Vector: non-finite entry");
  }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) { validate(entries_); }

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) { validate(entries_); }

Vector Vector::zeros(std::size_t dim) {
  if (dim == 0) throw PreconditionViolation("Vector: dimension must be >= 1");
  return Vector(std::vector<double>(dim, 0.0), Unchecked{});
}

Vector Vector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw PreconditionViolation("Vector::basis: index out of range");
  Vector e = zeros(dim);
  e[index] = 1.0;
  return e;
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other, "Vector::operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other, "Vector::operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

Vector& Vector::operator*=(double s) noexcept {
  for (double& e : entries_) e *= s;
  return *this;
}

Vector& Vector::operator/=(double s) noexcept {
  for (double& e : entries_) e /= s;
  return *this;
}

bool Vector::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double e) { return e == 0.0; });
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(const Vector& a) {
  std::vector<double> out(a.entries_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a.entries_[i];
  return Vector(std::move(out), Vector::Unchecked{});
}
Vector operator*(Vector a, double s) { return a *= s; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator/(Vector a, double s) { return a /= s; }

void require_same_dim(const Vector& a, const Vector& b, const char* where) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim(), where);
}

double inner(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm_squared(const Vector& a) noexcept {
  double s = 0.0;
  for (double e : a.entries()) s += e * e;
  return s;
}

double norm(const Vector& a) noexcept { return std::sqrt(norm_squared(a)); }

double norm_inf(const Vector& a) noexcept {
  double m = 0.0;
  for (double e : a.entries()) m = std::max(m, std::abs(e));
  return m;
}

double distance(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vector normalize(const Vector& a) {
  const double n = norm(a);
  if (n == 0.0) throw DegenerateInput("normalize: zero vector has no direction");
  return a / n;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

std::string to_string(const Vector& a) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < a.dim(); ++i) os << (i ? ", " : "") << a[i];
  os << ')';
  return os.str();
}

OrthonormalFrame::OrthonormalFrame(std::size_t dim) : OrthonormalFrame(dim, default_tol(dim)) {}

OrthonormalFrame::OrthonormalFrame(std::size_t dim, double tol) : dim_(dim), tol_(tol) {
  if (dim == 0) throw PreconditionViolation("OrthonormalFrame: dimension must be >= 1");
}

double OrthonormalFrame::default_tol(std::size_t dim) {
  return 1e-10 * std::sqrt(static_cast<double>(dim));
}

void OrthonormalFrame::append(Vector v) {
  if (v.dim() != dim_) throw DimensionMismatch(dim_, v.dim(), "OrthonormalFrame::append");
  if (vectors_.size() >= dim_) throw DegenerateInput("OrthonormalFrame::append: frame is full");
  if (std::abs(norm(v) - 1.0) > tol_) throw PreconditionViolation("OrthonormalFrame::append: not a unit vector");
  for (const Vector& u : vectors_) {
    if (std::abs(inner(u, v)) > tol_) {
      throw PreconditionViolation("OrthonormalFrame::append: not orthogonal to frame");
    }
  }
  vectors_.push_back(std::move(v));
}

namespace {

// Two passes of modified Gram-Schmidt against an orthonormal basis.
void project_out(const std::vector<Vector>& basis, Vector& r) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& q : basis) axpy(-inner(q, r), q, r);
  }
}

}  // namespace

Vector extend_orthonormal(const OrthonormalFrame& frame, const std::vector<Vector>& avoid) {
  const std::size_t d = frame.dim();
  for (const Vector& a : avoid) {
    if (a.dim() != d) throw DimensionMismatch(d, a.dim(), "extend_orthonormal");
  }
  if (frame.size() + avoid.size() >= d) {
    throw DegenerateInput("extend_orthonormal: constraint count " +
                          std::to_string(frame.size() + avoid.size()) + " exhausts dimension " +
                          std::to_string(d));
  }

  std::vector<Vector> basis;
  basis.reserve(frame.size() + avoid.size());
  const double tol = frame.tol();
  auto absorb = [&](const Vector& v) {
    const double scale = norm(v);
    if (scale == 0.0) return;
    Vector r = v;
    project_out(basis, r);
    const double rn = norm(r);
    if (rn > tol * std::max(1.0, scale)) basis.push_back(r / rn);
  };
  for (const Vector& u : frame.vectors()) absorb(u);
  for (const Vector& a : avoid) absorb(a);

  constexpr double kAccept = 1e-6;
  for (std::size_t j = 0; j < d; ++j) {
    Vector r = Vector::basis(d, j);
    project_out(basis, r);
    const double rn = norm(r);
    if (rn > kAccept) {
      r /= rn;
      // one more pass after normalization keeps inner products at rounding level
      project_out(basis, r);
      return normalize(r);
    }
  }
  throw DegenerateInput("extend_orthonormal: every candidate residual is below tolerance");
}

}  // namespace statlab
