#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cosob/error.hpp"
#include "cosob/manifold.hpp"
#include "cosob/random.hpp"

using namespace cosob;

namespace {

const double kPi = std::numbers::pi;

std::vector<Manifold> builtins() {
  return {Manifold::euclidean(3),
          Manifold::circle(1.0),
          Manifold::circle(2.5),
          Manifold::sphere(2, 1.0),
          Manifold::sphere(3, 0.7),
          Manifold::product(Manifold::circle(1.0), Manifold::circle(1.0)),
          Manifold::product(Manifold::sphere(2, 1.0), Manifold::euclidean(1))};
}

Vector random_point(const Manifold& m, Rng& rng) { return m.project(rng.normal_vector(m.ambient_dim())); }

// Jacobian of the chart embedding by central differences.
Matrix fd_jacobian(const Manifold& m, const Chart& c, const Vector& y, double h) {
  Matrix j(m.ambient_dim(), c.dim);
  for (int i = 0; i < c.dim; ++i) {
    Vector yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    j.col(i) = (m.to_ambient(c, yp) - m.to_ambient(c, ym)) / (2.0 * h);
  }
  return j;
}

Matrix fd_pullback_metric(const Manifold& m, const Chart& c, const Vector& y, double h) {
  const Matrix j = fd_jacobian(m, c, y, h);
  return j.transpose() * j;
}

// Levi-Civita symbols assembled from finite differences of the pullback metric.
std::vector<double> fd_christoffel(const Manifold& m, const Chart& c, const Vector& y) {
  const int n = c.dim;
  const double h = 1e-4;
  std::vector<Matrix> dg(n);
  for (int l = 0; l < n; ++l) {
    Vector yp = y, ym = y;
    yp[l] += h;
    ym[l] -= h;
    dg[l] = (fd_pullback_metric(m, c, yp, 1e-5) - fd_pullback_metric(m, c, ym, 1e-5)) / (2.0 * h);
  }
  const Matrix ginv = fd_pullback_metric(m, c, y, 1e-5).inverse();
  std::vector<double> gam(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gam[(k * n + i) * n + j] = s;
      }
  return gam;
}

}  // namespace

TEST(Manifold, EuclideanIsFlat) {
  const Manifold e = Manifold::euclidean(3);
  const Chart c = e.chart_at(Vector::Zero(3));
  Vector y(3);
  y << 0.3, -1.0, 2.0;
  const ChristoffelSymbols gam = e.christoffel(c, y);
  for (double g : gam.data()) EXPECT_EQ(g, 0.0);
  EXPECT_TRUE(e.metric(c, y).matrix().isIdentity(0.0));
}

TEST(Manifold, SphericalChristoffelClosedForm) {
  const Manifold s = Manifold::sphere(2, 1.0);
  const Chart c = s.spherical_chart();
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Vector y(2);
    y << rng.uniform(0.3, kPi - 0.3), rng.uniform(-kPi, kPi);
    const ChristoffelSymbols g = s.christoffel(c, y);
    const double th = y[0];
    EXPECT_NEAR(g(0, 1, 1), -std::sin(th) * std::cos(th), 1e-12);
    EXPECT_NEAR(g(1, 0, 1), std::cos(th) / std::sin(th), 1e-12);
    EXPECT_NEAR(g(1, 1, 0), std::cos(th) / std::sin(th), 1e-12);
    EXPECT_NEAR(g(0, 0, 0), 0.0, 1e-12);
    EXPECT_NEAR(g(1, 1, 1), 0.0, 1e-12);
  }
}

TEST(Manifold, ChristoffelMatchesPullbackMetricDerivatives) {
  Rng rng(4);
  for (const Manifold& m : builtins()) {
    for (int t = 0; t < 10; ++t) {
      const Vector p = random_point(m, rng);
      const Chart c = m.chart_at(p);
      const Vector y = m.to_chart(c, p);
      const auto expect = fd_christoffel(m, c, y);
      const auto got = m.christoffel(c, y).data();
      ASSERT_EQ(expect.size(), got.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-6) << m.name();
    }
  }
}

TEST(Manifold, StructuralInvariantsAtRandomPoints) {
  Rng rng(5);
  for (const Manifold& m : builtins()) {
    for (int t = 0; t < 100; ++t) {
      const Vector p = random_point(m, rng);
      const Chart c = m.chart_at(p);
      const Vector y = m.to_chart(c, p);
      const MetricTensor g = m.metric(c, y);
      EXPECT_TRUE(g.is_symmetric());
      EXPECT_TRUE(g.is_positive_definite());
      EXPECT_LE(m.christoffel(c, y).max_asymmetry(), 1e-12);
      const Matrix P = m.tangent_projector(p);
      EXPECT_LE((P * P - P).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((P - P.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_NEAR(P.trace(), m.dim(), 1e-10);
      EXPECT_LE((m.to_ambient(c, y) - p).norm(), 1e-12);
    }
  }
}

TEST(Manifold, PullbackMetricConvergesQuadratically) {
  Rng rng(6);
  for (const Manifold& m : builtins()) {
    const Vector p = random_point(m, rng);
    const Chart c = m.chart_at(p);
    const Vector y = m.to_chart(c, p);
    const Matrix g = m.metric(c, y).matrix();
    const double e1 = (fd_pullback_metric(m, c, y, 1e-2) - g).cwiseAbs().maxCoeff();
    const double e2 = (fd_pullback_metric(m, c, y, 5e-3) - g).cwiseAbs().maxCoeff();
    EXPECT_LE(e1, 1e-3) << m.name();
    if (e1 > 1e-10) EXPECT_NEAR(e1 / e2, 4.0, 0.5) << m.name();
  }
}

TEST(Manifold, ProductMetricIsBlockDiagonal) {
  const Manifold t = Manifold::product(Manifold::circle(1.0), Manifold::circle(1.0));
  EXPECT_EQ(t.dim(), 2);
  EXPECT_EQ(t.ambient_dim(), 4);
  Vector p(4);
  p << 1.0, 0.0, 0.0, 1.0;
  const Chart c = t.chart_at(p);
  const Matrix g = t.metric(c, t.to_chart(c, p)).matrix();
  EXPECT_NEAR(g(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(g(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(g(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(g(1, 1), 1.0, 1e-12);
}

TEST(Manifold, StereographicChartCentredAtNearerPole) {
  const Manifold s = Manifold::sphere(2, 1.0);
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Vector p = random_point(s, rng);
    const Chart c = s.chart_at(p);
    // the nearer pole keeps chart coordinates inside the unit disc
    EXPECT_LE(s.to_chart(c, p).norm(), 1.0 + 1e-12);
  }
}

TEST(GeodesicDistance, SphereValues) {
  const Manifold s = Manifold::sphere(2, 1.0);
  Vector a(3), b(3), c(3);
  a << 1, 0, 0;
  b << -1, 0, 0;
  c << 0, 1, 0;
  EXPECT_NEAR(geodesic_distance(s, a, b), kPi, 1e-12);
  EXPECT_NEAR(geodesic_distance(s, a, c), std::acos(a.dot(c)), 1e-12);
  EXPECT_NEAR(geodesic_distance(s, a, c), kPi / 2.0, 1e-12);
  EXPECT_EQ(geodesic_distance(s, a, a), 0.0);
}

TEST(GeodesicDistance, EuclideanIsNorm) {
  const Manifold e = Manifold::euclidean(4);
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const Vector p = rng.normal_vector(4), q = rng.normal_vector(4);
    EXPECT_NEAR(geodesic_distance(e, p, q), (p - q).norm(), 1e-14);
  }
}

TEST(GeodesicDistance, MetricAxiomsOnSampledTriples) {
  Rng rng(9);
  for (const Manifold& m : builtins()) {
    for (int t = 0; t < 50; ++t) {
      const Vector p = random_point(m, rng), q = random_point(m, rng), r = random_point(m, rng);
      const double pq = m.distance(p, q), qp = m.distance(q, p);
      EXPECT_NEAR(pq, qp, 1e-12);
      EXPECT_GE(pq, 0.0);
      EXPECT_LE(pq, m.distance(p, r) + m.distance(r, q) + 1e-12) << m.name();
      EXPECT_NEAR(m.distance(p, p), 0.0, 1e-7);
    }
  }
}

TEST(GeodesicDistance, ProductCombinesFactorsInL2) {
  const Manifold t = Manifold::product(Manifold::circle(1.0), Manifold::circle(1.0));
  Vector p(4), q(4);
  p << 1, 0, 1, 0;
  q << -1, 0, 0, 1;
  EXPECT_NEAR(t.distance(p, q), std::hypot(kPi, kPi / 2.0), 1e-12);
}

TEST(GeodesicDistance, RejectsPointsOffTheManifold) {
  const Manifold s = Manifold::sphere(2, 1.0);
  Vector a(3), b(3);
  a << 1, 0, 0;
  b << 0, 1.1, 0;
  EXPECT_THROW(geodesic_distance(s, a, b), DomainError);
}

TEST(Projection, Values) {
  const Manifold s = Manifold::sphere(2, 1.0);
  Vector a(3), e(3);
  a << 2, 0, 0;
  e << 1, 0, 0;
  EXPECT_LE((project_to_manifold(s, a) - e).norm(), 1e-15);
  EXPECT_LE((project_to_manifold(s, e) - e).norm(), 1e-15);
  Vector c(2);
  c << 0.6, 0.8;
  EXPECT_LE((project_to_manifold(Manifold::circle(1.0), c) - c).norm(), 1e-15);
  EXPECT_THROW(project_to_manifold(s, Vector::Zero(3)), DomainError);
}

TEST(Projection, SatisfiesConstraint) {
  Rng rng(10);
  for (const Manifold& m : builtins()) {
    for (int t = 0; t < 20; ++t) {
      const Vector p = m.project(rng.normal_vector(m.ambient_dim()) * 3.0);
      EXPECT_LE(m.constraint_residual(p), 1e-12) << m.name();
      EXPECT_LE((m.project(p) - p).norm(), 1e-12);
    }
  }
}

TEST(MakeManifold, RejectsInvalidParameters) {
  ManifoldSpec s;
  s.kind = ManifoldSpec::Kind::Sphere;
  s.n = 2;
  s.radius = -1.0;
  EXPECT_THROW(make_manifold(s), ConfigError);
  s.radius = 1.0;
  s.n = 0;
  EXPECT_THROW(make_manifold(s), ConfigError);
  ManifoldSpec e;
  e.kind = ManifoldSpec::Kind::Euclidean;
  e.n = 0;
  EXPECT_THROW(make_manifold(e), ConfigError);
  ManifoldSpec c;
  c.kind = ManifoldSpec::Kind::Circle;
  c.radius = 0.0;
  EXPECT_THROW(make_manifold(c), ConfigError);
}

TEST(MakeManifold, BuildsProducts) {
  ManifoldSpec c;
  c.kind = ManifoldSpec::Kind::Circle;
  ManifoldSpec p;
  p.kind = ManifoldSpec::Kind::Product;
  p.factors = {c, c};
  const Manifold m = make_manifold(p);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_TRUE(m == Manifold::product(Manifold::circle(1.0), Manifold::circle(1.0)));
}
