#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cosob/embedding.hpp"
#include "cosob/error.hpp"
#include "cosob/gallery.hpp"
#include "cosob/sampling.hpp"

using namespace cosob;

namespace {

struct Constant {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * 0.0, x[0] * 0.0, x[0] * 0.0 + 1.0};
  }
};

// random tangent vector to the sphere of radius |p| at p
Vector tangent_at(Rng& rng, const Vector& p) {
  const Vector n = p.normalized();
  Vector v = rng.normal_vector(static_cast<int>(p.size()));
  return v - n.dot(v) * n;
}

}  // namespace

TEST(Helix, ConstraintIsEnforced) {
  EXPECT_NO_THROW(helical_embed(3, 0.8, 0.6, 1.0));
  EXPECT_THROW(helical_embed(3, 0.8, 0.8, 1.0), ConfigError);
  EXPECT_THROW(helical_embed(0, 0.8, 0.6, 1.0), ConfigError);
  EXPECT_THROW(helical_embed(2, 0.6, -0.8, 1.0), ConfigError);
  EXPECT_NO_THROW(helical_embed(2, 0.6, 0.4, 2.0));
}

TEST(Helix, IsIsometric) {
  const IsometricEmbedding h = helical_embed(3, 0.8, 0.6, 1.0);
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    Vector t(3);
    for (int k = 0; k < 3; ++k) t[k] = rng.uniform(-10.0, 10.0);
    EXPECT_LE(isometry_residual(h, t, Differentiation::Analytic), 1e-14);
  }
}

TEST(Helix, SecondFundamentalFormMatchesClosedForm) {
  const HelixParams p{0.6, 0.4, 2.0};
  const IsometricEmbedding h = helical_embed(2, p.lambda, p.gamma, p.mu);
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    const Vector t = rng.normal_vector(2), v1 = rng.normal_vector(2), v2 = rng.normal_vector(2);
    const Vector a = second_fundamental_form(h, t, v1, v2);
    EXPECT_LE((a - helical_second_fundamental_form(p, t, v1, v2)).norm(), 1e-12);
    EXPECT_LE((a - second_fundamental_form(h, t, v2, v1)).norm(), 1e-13);
  }
}

TEST(Helix, BoundConstant) {
  const HelixParams p{0.8, 0.6, 1.0};
  Rng rng(43);
  const IsometricEmbedding h1 = helical_embed(1, p.lambda, p.gamma, p.mu);
  EXPECT_NEAR(sampled_bound_constant(h1, Vector::Constant(1, 0.3), 20, rng), 1.0 / 0.6, 1e-12);
  EXPECT_NEAR(helical_bound_constant(1, p), 1.0 / 0.6, 1e-15);
  const IsometricEmbedding h3 = helical_embed(3, p.lambda, p.gamma, p.mu);
  const double c = sampled_bound_constant(h3, rng.normal_vector(3), 200, rng);
  EXPECT_GE(c, 1.0 / 0.6 - 1e-12);
  EXPECT_LE(c, helical_bound_constant(3, p) + 1e-12);
}

TEST(Inclusion, FlatSpaceHasNoSecondFundamentalForm) {
  const IsometricEmbedding e = inclusion(Manifold::euclidean(2));
  Rng rng(44);
  const Vector a = second_fundamental_form(e, rng.normal_vector(2), rng.normal_vector(2), rng.normal_vector(2));
  EXPECT_EQ(a.norm(), 0.0);
}

TEST(Inclusion, RoundSphere) {
  // A[v, w] = -<v, w> p / r^2 for the sphere of radius r
  for (double r : {1.0, 2.0}) {
    const IsometricEmbedding e = inclusion(Manifold::sphere(2, r));
    Rng rng(45);
    for (int i = 0; i < 50; ++i) {
      const Vector p = random_sphere_point(rng, 2, r);
      const Vector v = tangent_at(rng, p), w = tangent_at(rng, p);
      const Vector a = second_fundamental_form(e, p, v, w);
      EXPECT_LE((a + v.dot(w) * p / (r * r)).norm(), 1e-12);
      EXPECT_LE(std::abs(a.dot(v)) + std::abs(a.dot(w)), 1e-12);
      EXPECT_LE(isometry_residual(e, p), 1e-13);
    }
  }
}

TEST(Composite, SecondFundamentalFormsAddOrthogonally) {
  const IsometricEmbedding s = inclusion(Manifold::sphere(2, 1.0));
  const IsometricEmbedding h = helical_embed(3, 0.8, 0.6, 1.0);
  const IsometricEmbedding c = compose(h, s);
  Rng rng(46);
  for (int i = 0; i < 50; ++i) {
    const Vector p = random_sphere_point(rng, 2);
    const Vector v = tangent_at(rng, p);
    const double ac = second_fundamental_form(c, p, v, v).squaredNorm();
    const double ah = second_fundamental_form(h, p, v, v).squaredNorm();
    const double as = second_fundamental_form(s, p, v, v).squaredNorm();
    EXPECT_NEAR(ac, ah + as, 1e-11 * (1.0 + ac));
  }
  EXPECT_THROW(compose(s, h), ConfigError);
}

TEST(ExtrinsicSplit, PythagorasForRandomMaps) {
  const IsometricEmbedding s = inclusion(Manifold::sphere(2, 1.0));
  const IsometricEmbedding c = compose(helical_embed(3, 0.8, 0.6, 1.0), s);
  Rng rng(47);
  for (int i = 0; i < 200; ++i) {
    const SmoothMap u = random_sphere_map(rng);
    const Vector x = random_sphere_point(rng, 2);
    const ExtrinsicSplit e = extrinsic_split(u, i % 2 ? s : c, x);
    EXPECT_NEAR(e.lhs, e.rhs(), 1e-9 * (1.0 + e.lhs));
  }
}

TEST(ExtrinsicSplit, ConstantAndGeodesicMaps) {
  const Manifold s2 = Manifold::sphere(2, 1.0);
  const IsometricEmbedding s = inclusion(s2);
  const SmoothMap k = SmoothMap::from_formula(s2, s2, Constant{});
  Vector x(3);
  x << 0.6, 0.0, 0.8;
  const ExtrinsicSplit ek = extrinsic_split(k, s, x);
  EXPECT_EQ(ek.lhs, 0.0);
  EXPECT_EQ(ek.rhs(), 0.0);

  // a geodesic has no intrinsic Hessian; all of |D^2 (iota o u)|^2 = ell^4 is normal
  const SmoothMap w = make_example({FamilyId::GeodesicWind, 1.0, 1.0, 3.0, 1, std::nullopt});
  Vector t(2);
  t << std::cos(0.7), std::sin(0.7);
  const ExtrinsicSplit ew = extrinsic_split(w, s, t);
  EXPECT_LE(ew.intrinsic, 1e-20);
  EXPECT_NEAR(ew.normal, 81.0, 1e-10);
  EXPECT_NEAR(ew.lhs, 81.0, 1e-10);
}
