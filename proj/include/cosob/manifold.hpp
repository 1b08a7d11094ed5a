#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cosob/chart.hpp"

namespace cosob {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric positive definite bilinear form on a tangent space (chart or ambient basis).
class MetricTensor {
 public:
  MetricTensor() = default;
  explicit MetricTensor(Matrix m) : matrix_(std::move(m)) {}
  static MetricTensor identity(int n) { return MetricTensor(Matrix::Identity(n, n)); }

  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  bool is_symmetric(double tol = 1e-12) const;
  bool is_positive_definite() const;
  /// Columns form a basis that is orthonormal for this metric.
  Matrix orthonormal_frame() const;
  double norm_sq(const Vector& v) const { return v.dot(matrix_ * v); }

 private:
  Matrix matrix_;
};

/// Gamma^k_{ij} of a connection in a chart.
class ChristoffelSymbols {
 public:
  ChristoffelSymbols() = default;
  ChristoffelSymbols(int dim, std::vector<double> gamma) : dim_(dim), gamma_(std::move(gamma)) {}

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return gamma_[(k * dim_ + i) * dim_ + j]; }
  const std::vector<double>& data() const { return gamma_; }
  double max_asymmetry() const;

 private:
  int dim_ = 0;
  std::vector<double> gamma_;
};

struct ManifoldSpec;

/// A built-in Riemannian manifold together with its isometric embedding,
/// charts, tangent projector and geodesic distance. Immutable.
class Manifold {
 public:
  enum class Kind { Euclidean, Circle, Sphere, Product };

  static Manifold euclidean(int n);
  static Manifold circle(double radius);
  static Manifold sphere(int n, double radius);
  static Manifold product(const Manifold& a, const Manifold& b);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  double radius() const { return radius_; }
  /// Simple (non-product) factors; a simple manifold is its own single factor.
  std::vector<Manifold> factors() const;
  std::string name() const;
  bool operator==(const Manifold& o) const;

  /// Chart used to evaluate at p: for spheres the stereographic chart centered
  /// at the nearer pole, for circles the angle chart centered at p.
  Chart chart_at(const Vector& p) const;
  /// Polar (theta, phi) chart of a 2-sphere.
  Chart spherical_chart() const;

  Vector to_ambient(const Chart& chart, const Vector& y) const;
  Vector to_chart(const Chart& chart, const Vector& p) const;
  MetricTensor metric(const Chart& chart, const Vector& y) const;
  ChristoffelSymbols christoffel(const Chart& chart, const Vector& y) const;

  /// Distance from p to the manifold's defining constraints.
  double constraint_residual(const Vector& p) const;
  /// Orthogonal projector of the ambient space onto T_pM.
  Matrix tangent_projector(const Vector& p) const;
  /// Nearest-point retraction of an ambient point.
  Vector project(const Vector& ambient) const;
  double distance(const Vector& p, const Vector& q) const;
  /// Geodesic diameter (infinite for non-compact manifolds).
  double diameter() const;

 private:
  Manifold() = default;
  Kind kind_ = Kind::Euclidean;
  int dim_ = 0;
  int ambient_dim_ = 0;
  double radius_ = 0.0;
  std::vector<Manifold> factors_;
};

struct ManifoldSpec {
  enum class Kind { Euclidean, Circle, Sphere, Product } kind = Kind::Euclidean;
  int n = 1;
  double radius = 1.0;
  std::vector<ManifoldSpec> factors;
};

/// Points further than this from a manifold are rejected by distance queries.
inline constexpr double kOnManifoldTolerance = 1e-8;

Manifold make_manifold(const ManifoldSpec& spec);
double geodesic_distance(const Manifold& m, const Vector& p, const Vector& q);
Vector project_to_manifold(const Manifold& m, const Vector& ambient);

}  // namespace cosob
