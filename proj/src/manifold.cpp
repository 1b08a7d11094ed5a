#include "cosob/manifold.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cosob/error.hpp"

namespace cosob {

namespace testing {
namespace {
std::atomic<bool> g_christoffel_fault{false};
}
double christoffel_sign() { return g_christoffel_fault.load(std::memory_order_relaxed) ? -1.0 : 1.0; }
void inject_christoffel_sign_fault(bool enabled) { g_christoffel_fault.store(enabled); }
}  // namespace testing

bool MetricTensor::is_symmetric(double tol) const {
  return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, matrix_.cwiseAbs().maxCoeff());
}

bool MetricTensor::is_positive_definite() const {
  if (matrix_.rows() == 0 || !is_symmetric(1e-10)) return false;
  Eigen::LLT<Matrix> llt(matrix_);
  return llt.info() == Eigen::Success;
}

Matrix MetricTensor::orthonormal_frame() const {
  Eigen::LLT<Matrix> llt(matrix_);
  if (llt.info() != Eigen::Success) throw NumericalError("metric is not positive definite");
  // g = L L^T, E = L^{-T}  =>  E^T g E = I
  const Matrix lower = llt.matrixL();
  return lower.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(dim(), dim()));
}

double ChristoffelSymbols::max_asymmetry() const {
  double worst = 0.0;
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) worst = std::max(worst, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return worst;
}

Manifold Manifold::euclidean(int n) {
  if (n < 1) throw ConfigError("euclidean: dimension must be >= 1");
  Manifold m;
  m.kind_ = Kind::Euclidean;
  m.dim_ = m.ambient_dim_ = n;
  return m;
}

Manifold Manifold::circle(double radius) {
  if (!(radius > 0.0)) throw ConfigError("circle: radius must be positive");
  Manifold m;
  m.kind_ = Kind::Circle;
  m.dim_ = 1;
  m.ambient_dim_ = 2;
  m.radius_ = radius;
  return m;
}

Manifold Manifold::sphere(int n, double radius) {
  if (n < 1) throw ConfigError("sphere: dimension must be >= 1");
  if (!(radius > 0.0)) throw ConfigError("sphere: radius must be positive");
  Manifold m;
  m.kind_ = Kind::Sphere;
  m.dim_ = n;
  m.ambient_dim_ = n + 1;
  m.radius_ = radius;
  return m;
}

Manifold Manifold::product(const Manifold& a, const Manifold& b) {
  Manifold m;
  m.kind_ = Kind::Product;
  for (const Manifold* part : {&a, &b}) {
    for (const Manifold& f : part->factors()) m.factors_.push_back(f);
  }
  for (const Manifold& f : m.factors_) {
    m.dim_ += f.dim_;
    m.ambient_dim_ += f.ambient_dim_;
  }
  return m;
}

std::vector<Manifold> Manifold::factors() const {
  if (kind_ == Kind::Product) return factors_;
  return {*this};
}

std::string Manifold::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Euclidean:
      os << "euclidean(" << dim_ << ")";
      break;
    case Kind::Circle:
      os << "circle(" << radius_ << ")";
      break;
    case Kind::Sphere:
      os << "sphere(" << dim_ << "," << radius_ << ")";
      break;
    case Kind::Product:
      os << "product(";
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i].name();
      os << ")";
      break;
  }
  return os.str();
}

bool Manifold::operator==(const Manifold& o) const {
  if (kind_ != o.kind_ || dim_ != o.dim_ || ambient_dim_ != o.ambient_dim_ || radius_ != o.radius_) return false;
  if (factors_.size() != o.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!(factors_[i] == o.factors_[i])) return false;
  return true;
}

Chart Manifold::chart_at(const Vector& p) const {
  if (p.size() != ambient_dim_) throw DomainError("chart_at: point has wrong ambient dimension");
  Chart chart;
  chart.dim = dim_;
  chart.ambient_dim = ambient_dim_;
  int co = 0, ao = 0;
  for (const Manifold& f : factors()) {
    ChartFactor cf;
    cf.dim = f.dim_;
    cf.ambient_dim = f.ambient_dim_;
    cf.radius = f.radius_;
    cf.chart_offset = co;
    cf.ambient_offset = ao;
    const auto local = p.segment(ao, f.ambient_dim_);
    switch (f.kind_) {
      case Kind::Euclidean:
        cf.kind = ChartKind::Identity;
        break;
      case Kind::Circle:
        if (local.norm() < 1e-8 * f.radius_) throw DomainError("chart_at: no circle chart covers the origin");
        cf.kind = ChartKind::Angle;
        cf.center = std::atan2(local[1], local[0]);
        break;
      case Kind::Sphere:
        if (local.norm() < 1e-8 * f.radius_) throw DomainError("chart_at: no sphere chart covers the origin");
        cf.kind = local[f.dim_] <= 0.0 ? ChartKind::StereoNorth : ChartKind::StereoSouth;
        break;
      case Kind::Product:
        break;
    }
    chart.factors.push_back(cf);
    co += f.dim_;
    ao += f.ambient_dim_;
  }
  return chart;
}

Chart Manifold::spherical_chart() const {
  if (kind_ != Kind::Sphere || dim_ != 2) throw ConfigError("spherical chart exists only for 2-spheres");
  Chart chart;
  chart.dim = 2;
  chart.ambient_dim = 3;
  ChartFactor cf;
  cf.kind = ChartKind::Spherical;
  cf.dim = 2;
  cf.ambient_dim = 3;
  cf.radius = radius_;
  chart.factors.push_back(cf);
  return chart;
}

namespace {
std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }
}  // namespace

Vector Manifold::to_ambient(const Chart& chart, const Vector& y) const {
  return to_vector(chart_to_ambient<double>(chart, as_span(y)));
}

Vector Manifold::to_chart(const Chart& chart, const Vector& p) const {
  return to_vector(ambient_to_chart<double>(chart, as_span(p)));
}

MetricTensor Manifold::metric(const Chart& chart, const Vector& y) const {
  const auto g = chart_metric<double>(chart, as_span(y));
  return MetricTensor(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      g.data(), chart.dim, chart.dim));
}

ChristoffelSymbols Manifold::christoffel(const Chart& chart, const Vector& y) const {
  return ChristoffelSymbols(chart.dim, chart_christoffel<double>(chart, as_span(y)));
}

double Manifold::constraint_residual(const Vector& p) const {
  if (p.size() != ambient_dim_) return std::numeric_limits<double>::infinity();
  double sq = 0.0;
  int ao = 0;
  for (const Manifold& f : factors()) {
    if (f.kind_ == Kind::Circle || f.kind_ == Kind::Sphere) {
      const double d = p.segment(ao, f.ambient_dim_).norm() - f.radius_;
      sq += d * d;
    }
    ao += f.ambient_dim_;
  }
  return std::sqrt(sq);
}

Matrix Manifold::tangent_projector(const Vector& p) const {
  Matrix proj = Matrix::Zero(ambient_dim_, ambient_dim_);
  int ao = 0;
  for (const Manifold& f : factors()) {
    const int a = f.ambient_dim_;
    auto block = proj.block(ao, ao, a, a);
    block.setIdentity();
    if (f.kind_ == Kind::Circle || f.kind_ == Kind::Sphere) {
      const Vector n = p.segment(ao, a).normalized();
      block -= n * n.transpose();
    }
    ao += a;
  }
  return proj;
}

Vector Manifold::project(const Vector& ambient) const {
  if (ambient.size() != ambient_dim_) throw DomainError("project: wrong ambient dimension");
  Vector out = ambient;
  int ao = 0;
  for (const Manifold& f : factors()) {
    if (f.kind_ == Kind::Circle || f.kind_ == Kind::Sphere) {
      auto seg = out.segment(ao, f.ambient_dim_);
      const double nrm = seg.norm();
      if (!(nrm > 1e-8 * f.radius_)) throw DomainError("project: point at the center has no nearest point");
      seg *= f.radius_ / nrm;
    }
    ao += f.ambient_dim_;
  }
  return out;
}

double Manifold::distance(const Vector& p, const Vector& q) const {
  const double tol = kOnManifoldTolerance * std::max(1.0, radius_);
  if (constraint_residual(p) > tol || constraint_residual(q) > tol)
    throw DomainError("distance: point is off the manifold");
  double sq = 0.0;
  int ao = 0;
  for (const Manifold& f : factors()) {
    const Vector d = p.segment(ao, f.ambient_dim_) - q.segment(ao, f.ambient_dim_);
    double dist = d.norm();
    if (f.kind_ == Kind::Circle || f.kind_ == Kind::Sphere) {
      dist = 2.0 * f.radius_ * std::asin(std::min(1.0, dist / (2.0 * f.radius_)));
    }
    sq += dist * dist;
    ao += f.ambient_dim_;
  }
  return std::sqrt(sq);
}

double Manifold::diameter() const {
  double sq = 0.0;
  for (const Manifold& f : factors()) {
    if (f.kind_ == Kind::Euclidean) return std::numeric_limits<double>::infinity();
    sq += std::pow(std::numbers::pi * f.radius_, 2);
  }
  return std::sqrt(sq);
}

Manifold make_manifold(const ManifoldSpec& spec) {
  switch (spec.kind) {
    case ManifoldSpec::Kind::Euclidean:
      return Manifold::euclidean(spec.n);
    case ManifoldSpec::Kind::Circle:
      return Manifold::circle(spec.radius);
    case ManifoldSpec::Kind::Sphere:
      return Manifold::sphere(spec.n, spec.radius);
    case ManifoldSpec::Kind::Product: {
      if (spec.factors.size() < 2) throw ConfigError("product: needs at least two factors");
      Manifold m = make_manifold(spec.factors[0]);
      for (std::size_t i = 1; i < spec.factors.size(); ++i) m = Manifold::product(m, make_manifold(spec.factors[i]));
      return m;
    }
  }
  throw ConfigError("unknown manifold kind");
}

double geodesic_distance(const Manifold& m, const Vector& p, const Vector& q) { return m.distance(p, q); }

Vector project_to_manifold(const Manifold& m, const Vector& ambient) { return m.project(ambient); }

}  // namespace cosob
