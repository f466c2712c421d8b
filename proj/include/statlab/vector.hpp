#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace statlab {

/// Dense real vector of fixed dimension >= 1 with finite entries.
///
/// Public constructors validate; arithmetic results are not re-validated.
class Vector {
 public:
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  static Vector zeros(std::size_t dim);
  /// Standard basis vector e_index (0-based).
  static Vector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  double& operator[](std::size_t i) noexcept { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }
  const std::vector<double>& raw() const noexcept { return entries_; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s) noexcept;
  Vector& operator/=(double s) noexcept;

  bool operator==(const Vector& other) const = default;

  bool is_zero() const noexcept;

 private:
  struct Unchecked {};
  Vector(std::vector<double> entries, Unchecked) noexcept : entries_(std::move(entries)) {}
  friend Vector operator-(const Vector& a);

  std::vector<double> entries_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(Vector a, double s);
Vector operator*(double s, Vector a);
Vector operator/(Vector a, double s);

void require_same_dim(const Vector& a, const Vector& b, const char* where);

double inner(const Vector& a, const Vector& b);
double norm_squared(const Vector& a) noexcept;
double norm(const Vector& a) noexcept;
double norm_inf(const Vector& a) noexcept;
double distance(const Vector& a, const Vector& b);

/// a / ||a||; throws DegenerateInput on the zero vector.
Vector normalize(const Vector& a);

/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

std::string to_string(const Vector& a);

/// Orthonormal list of vectors sharing one dimension.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(std::size_t dim);
  OrthonormalFrame(std::size_t dim, double tol);

  /// Default orthonormality tolerance for dimension d: 1e-10 * sqrt(d).
  static double default_tol(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  double tol() const noexcept { return tol_; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  const Vector& operator[](std::size_t i) const { return vectors_.at(i); }

  /// Appends v after checking it keeps the frame orthonormal within tol.
  void append(Vector v);

 private:
  std::size_t dim_;
  double tol_;
  std::vector<Vector> vectors_;
};

/// Deterministic unit vector orthogonal to every frame vector and every avoid vector.
///
/// Orthonormalizes frame + avoid by modified Gram-Schmidt (two passes), then scans
/// e_1, e_2, ... and returns the first candidate whose residual exceeds 1e-6.
/// Throws DegenerateInput if frame.size() + avoid.size() >= dim or no candidate survives.
Vector extend_orthonormal(const OrthonormalFrame& frame, const std::vector<Vector>& avoid);

}  // namespace statlab
