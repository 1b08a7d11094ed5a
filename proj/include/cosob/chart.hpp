#pragma once

// Coordinate charts of the built-in manifolds.
//
// Every function here is a template over the scalar type so the same
// closed forms serve plain evaluation (double) and exact derivative
// propagation (Taylor). Flat arrays use row-major layout: metric[i*n+j],
// christoffel[k*n*n + i*n + j] = Gamma^k_{ij}.

#include <cmath>
#include <span>
#include <vector>

#include "cosob/taylor.hpp"

namespace cosob {

enum class ChartKind {
  Identity,     // euclidean space
  Angle,        // circle, angle measured from `center`
  StereoNorth,  // sphere, projection from the north pole (chart centered at the south pole)
  StereoSouth,  // sphere, projection from the south pole (chart centered at the north pole)
  Spherical,    // 2-sphere, polar/azimuthal angles (theta, phi)
};

struct ChartFactor {
  ChartKind kind = ChartKind::Identity;
  int dim = 0;
  int ambient_dim = 0;
  double radius = 1.0;
  double center = 0.0;
  int chart_offset = 0;
  int ambient_offset = 0;
};

/// A product of factor charts; simple manifolds have exactly one factor.
struct Chart {
  std::vector<ChartFactor> factors;
  int dim = 0;
  int ambient_dim = 0;
};

namespace testing {
/// +1 normally, -1 when the Christoffel sign fault is injected (mutation tests only).
double christoffel_sign();
void inject_christoffel_sign_fault(bool enabled);
}  // namespace testing

namespace detail {

template <class S>
S square_norm(std::span<const S> y) {
  S s = S(0.0);
  for (const S& v : y) s = s + v * v;
  return s;
}

template <class S>
void factor_to_ambient(const ChartFactor& f, std::span<const S> y, std::span<S> x) {
  using std::cos;
  using std::sin;
  const double r = f.radius;
  switch (f.kind) {
    case ChartKind::Identity:
      for (int i = 0; i < f.dim; ++i) x[i] = y[i];
      break;
    case ChartKind::Angle:
      x[0] = r * cos(y[0] + f.center);
      x[1] = r * sin(y[0] + f.center);
      break;
    case ChartKind::StereoNorth:
    case ChartKind::StereoSouth: {
      const S q = square_norm(y);
      const S inv = 1.0 / (q + r * r);
      for (int i = 0; i < f.dim; ++i) x[i] = 2.0 * r * r * y[i] * inv;
      const S h = r * (q - r * r) * inv;
      x[f.dim] = f.kind == ChartKind::StereoNorth ? h : -h;
      break;
    }
    case ChartKind::Spherical:
      x[0] = r * sin(y[0]) * cos(y[1]);
      x[1] = r * sin(y[0]) * sin(y[1]);
      x[2] = r * cos(y[0]);
      break;
  }
}

template <class S>
void factor_from_ambient(const ChartFactor& f, std::span<const S> x, std::span<S> y) {
  using std::atan2;
  using std::cos;
  using std::sin;
  using std::sqrt;
  const double r = f.radius;
  switch (f.kind) {
    case ChartKind::Identity:
      for (int i = 0; i < f.dim; ++i) y[i] = x[i];
      break;
    case ChartKind::Angle: {
      const double c = std::cos(f.center), s = std::sin(f.center);
      y[0] = atan2(-s * x[0] + c * x[1], c * x[0] + s * x[1]);
      break;
    }
    case ChartKind::StereoNorth:
    case ChartKind::StereoSouth: {
      const S denom = f.kind == ChartKind::StereoNorth ? r - x[f.dim] : r + x[f.dim];
      for (int i = 0; i < f.dim; ++i) y[i] = r * x[i] / denom;
      break;
    }
    case ChartKind::Spherical:
      y[0] = atan2(sqrt(x[0] * x[0] + x[1] * x[1]), x[2]);
      y[1] = atan2(x[1], x[0]);
      break;
  }
}

}  // namespace detail

template <class S>
std::vector<S> chart_to_ambient(const Chart& chart, std::span<const S> y) {
  std::vector<S> x(chart.ambient_dim, S(0.0));
  for (const auto& f : chart.factors) {
    detail::factor_to_ambient<S>(f, y.subspan(f.chart_offset, f.dim),
                                 std::span<S>(x).subspan(f.ambient_offset, f.ambient_dim));
  }
  return x;
}

template <class S>
std::vector<S> ambient_to_chart(const Chart& chart, std::span<const S> x) {
  std::vector<S> y(chart.dim, S(0.0));
  for (const auto& f : chart.factors) {
    detail::factor_from_ambient<S>(f, x.subspan(f.ambient_offset, f.ambient_dim),
                                   std::span<S>(y).subspan(f.chart_offset, f.dim));
  }
  return y;
}

/// Closed-form chart metric g_ij(y).
template <class S>
std::vector<S> chart_metric(const Chart& chart, std::span<const S> y) {
  using std::sin;
  const int n = chart.dim;
  std::vector<S> g(static_cast<std::size_t>(n) * n, S(0.0));
  for (const auto& f : chart.factors) {
    const int o = f.chart_offset;
    const double r = f.radius;
    auto at = [&](int i, int j) -> S& { return g[(o + i) * n + (o + j)]; };
    switch (f.kind) {
      case ChartKind::Identity:
        for (int i = 0; i < f.dim; ++i) at(i, i) = S(1.0);
        break;
      case ChartKind::Angle:
        at(0, 0) = S(r * r);
        break;
      case ChartKind::StereoNorth:
      case ChartKind::StereoSouth: {
        const S q = detail::square_norm(y.subspan(o, f.dim)) + r * r;
        const S conf = 4.0 * r * r * r * r / (q * q);
        for (int i = 0; i < f.dim; ++i) at(i, i) = conf;
        break;
      }
      case ChartKind::Spherical: {
        const S s = sin(y[o]);
        at(0, 0) = S(r * r);
        at(1, 1) = r * r * s * s;
        break;
      }
    }
  }
  return g;
}

/// Closed-form Levi-Civita Christoffel symbols of the chart metric.
template <class S>
std::vector<S> chart_christoffel(const Chart& chart, std::span<const S> y) {
  using std::cos;
  using std::sin;
  const int n = chart.dim;
  const double sign = testing::christoffel_sign();
  std::vector<S> gam(static_cast<std::size_t>(n) * n * n, S(0.0));
  auto at = [&](int k, int i, int j) -> S& { return gam[(k * n + i) * n + j]; };
  for (const auto& f : chart.factors) {
    const int o = f.chart_offset;
    switch (f.kind) {
      case ChartKind::Identity:
      case ChartKind::Angle:
        break;
      case ChartKind::StereoNorth:
      case ChartKind::StereoSouth: {
        // conformal metric exp(2 phi) delta with d_i phi = -2 y_i / (r^2 + |y|^2)
        const double r = f.radius;
        const S q = detail::square_norm(y.subspan(o, f.dim)) + r * r;
        std::vector<S> dphi(f.dim);
        for (int i = 0; i < f.dim; ++i) dphi[i] = -2.0 * y[o + i] / q;
        for (int i = 0; i < f.dim; ++i) {
          for (int j = 0; j < f.dim; ++j) {
            at(o + i, o + i, o + j) = at(o + i, o + i, o + j) + sign * dphi[j];
            at(o + j, o + i, o + j) = at(o + j, o + i, o + j) + sign * dphi[i];
          }
          for (int k = 0; k < f.dim; ++k) at(o + k, o + i, o + i) = at(o + k, o + i, o + i) - sign * dphi[k];
        }
        break;
      }
      case ChartKind::Spherical: {
        const S s = sin(y[o]), c = cos(y[o]);
        at(o, o + 1, o + 1) = -sign * s * c;
        at(o + 1, o, o + 1) = sign * c / s;
        at(o + 1, o + 1, o) = sign * c / s;
        break;
      }
    }
  }
  return gam;
}

}  // namespace cosob
