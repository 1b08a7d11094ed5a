#pragma once

// Seeded random smooth maps and points used by property checks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cosob/random.hpp"
#include "cosob/smooth_map.hpp"

namespace cosob {

/// x -> A x + c * sin(W x + phi) componentwise; smooth on all of R^m.
struct TrigAffine {
  Matrix a;    // n x m
  Matrix w;    // n x m
  Vector c;    // n
  Vector phi;  // n

  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::sin;
    std::vector<S> out;
    out.reserve(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      S lin(0.0), arg(phi[i]);
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        lin = lin + a(i, j) * x[j];
        arg = arg + w(i, j) * x[j];
      }
      out.push_back(lin + c[i] * sin(arg));
    }
    return out;
  }

  static TrigAffine random(Rng& rng, int m, int n, double amplitude = 0.5) {
    TrigAffine t;
    t.a = rng.normal_matrix(n, m);
    t.w = rng.normal_matrix(n, m);
    t.c = amplitude * rng.normal_vector(n);
    t.phi = Vector(n);
    for (int i = 0; i < n; ++i) t.phi[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return t;
  }
};

/// Sphere-valued map x -> radius * v / |v| with v = x / |x| + p(x / |x|).
/// random_sphere_map keeps |p| <= 0.5, so v never vanishes.
struct SphereWarp {
  TrigAffine perturbation;
  double radius = 1.0;

  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::sqrt;
    S r2(0.0);
    for (const S& xi : x) r2 = r2 + xi * xi;
    const S inv = 1.0 / sqrt(r2);
    std::vector<S> unit(x.begin(), x.end());
    for (S& ui : unit) ui = ui * inv;
    std::vector<S> v = perturbation(std::span<const S>(unit));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] + unit[i];
    S n2(0.0);
    for (const S& vi : v) n2 = n2 + vi * vi;
    const S scale = radius / sqrt(n2);
    for (S& vi : v) vi = vi * scale;
    return v;
  }
};

/// Random smooth map between spheres of dimension n (ambient n + 1).
inline SmoothMap random_sphere_map(Rng& rng, int n = 2, double radius = 1.0) {
  const int d = n + 1;
  TrigAffine t = TrigAffine::random(rng, d, d, 1.0);
  t.a *= 0.3 / std::max(1.0, t.a.norm());
  t.c = t.c.cwiseMax(-1.0).cwiseMin(1.0) * (0.2 / std::sqrt(static_cast<double>(d)));
  const Manifold s = Manifold::sphere(n, radius);
  return SmoothMap::from_formula(s, s, SphereWarp{t, radius});
}

/// Random smooth map R^m -> R^n.
inline SmoothMap random_flat_map(Rng& rng, int m, int n) {
  return SmoothMap::from_formula(Manifold::euclidean(m), Manifold::euclidean(n), TrigAffine::random(rng, m, n));
}

/// Uniform point on the sphere of dimension n and given radius.
inline Vector random_sphere_point(Rng& rng, int n, double radius = 1.0) { return radius * rng.unit_vector(n + 1); }

}  // namespace cosob
