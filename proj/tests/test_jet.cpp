#include <gtest/gtest.h>

#include <cmath>

#include "cosob/acceptance.hpp"
#include "cosob/chart.hpp"
#include "cosob/error.hpp"
#include "cosob/gallery.hpp"
#include "cosob/jet.hpp"
#include "cosob/sampling.hpp"

using namespace cosob;

namespace {

struct Identity {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return std::vector<S>(x.begin(), x.end());
  }
};

struct Constant {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * 0.0 + 1.0, x[0] * 0.0 - 2.0};
  }
};

struct SquareFirst {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * x[0]};
  }
};

struct Affine {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {2.0 * x[0] - x[1] + 1.0, x[0] + 3.0 * x[1]};
  }
};

// theta^2 on the unit circle, theta in (-pi, pi)
struct AngleSquared {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::atan2;
    const S t = atan2(x[1], x[0]);
    return {t * t};
  }
};

// x^2 y + y^3 z, third partials are constants and linear terms
struct Cubic {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * x[0] * x[1] + x[1] * x[1] * x[1] * x[2]};
  }
};

SmoothMap wind(double ell) { return make_example({FamilyId::GeodesicWind, 1.0, 1.0, ell, 1, std::nullopt}); }

Vector circle_point(double t) {
  Vector x(2);
  x << std::cos(t), std::sin(t);
  return x;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

}  // namespace

TEST(TangentMap, IdentityAndConstant) {
  const SmoothMap id = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Identity{});
  const SmoothMap c = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Constant{});
  const Vector x = vec({0.3, -1.2});
  EXPECT_LE((tangent_map(id, x).components - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_NEAR(tensor_norm(tangent_map(id, x)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(tensor_norm(tangent_map(c, x)), 0.0);
}

TEST(TangentMap, SpiralNormMatchesClosedForm) {
  const SmoothMap u = make_example({FamilyId::Spiral, 1.5, 1.0, 1.0, 3, std::nullopt});
  const Vector x = vec({0.3, 0.0, 0.4});
  // |Tu| = alpha |x|^(-alpha-1) at |x| = 1/2
  EXPECT_NEAR(tensor_norm(tangent_map(u, x)), 1.5 * std::pow(0.5, -2.5), 1e-12);
}

TEST(SecondTangent, ComponentsOfSquare) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(1), Manifold::euclidean(1), SquareFirst{});
  const DoubleMorphism f = second_tangent(u, vec({1.0}));
  EXPECT_NEAR(f.f1(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(f.f2(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(f.f12(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(f.f12hat(0, 0), 2.0, 1e-15);
}

TEST(SecondTangent, AffineHasNoBilinearPart) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Affine{});
  const DoubleMorphism f = second_tangent(u, vec({0.7, 0.1}));
  EXPECT_EQ(f.f12hat.norm(), 0.0);
  EXPECT_LE((f.f1 - f.f12).norm(), 0.0);
}

TEST(CovariantHessian, VanishesForIdentityAndGeodesics) {
  const SmoothMap id = SmoothMap::from_formula(Manifold::euclidean(3), Manifold::euclidean(3), Identity{});
  EXPECT_EQ(tensor_norm(covariant_hessian(id, vec({0.1, 0.2, 0.3}))), 0.0);
  const SmoothMap w = wind(3.0);
  for (double t : {0.0, 0.9, 2.5, -2.0}) {
    EXPECT_LE(tensor_norm(covariant_hessian(w, circle_point(t))), 1e-12);
    EXPECT_LE(tensor_norm(higher_covariant(w, circle_point(t), 3)), 1e-11);
  }
}

TEST(CovariantHessian, AngleSquaredOnCircle) {
  // the angle chart is a unit-speed geodesic chart, so D^2 (theta^2) = 2
  const SmoothMap u = SmoothMap::from_formula(Manifold::circle(1.0), Manifold::euclidean(1), AngleSquared{});
  for (double t : {0.5, -1.0, 2.0}) EXPECT_NEAR(tensor_norm(covariant_hessian(u, circle_point(t))), 2.0, 1e-12);
}

TEST(CovariantHessian, ChartAndAmbientRealizationsAgree) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const SmoothMap u = random_sphere_map(rng);
    const Vector x = random_sphere_point(rng, 2);
    const CovariantTensor a = covariant_hessian(u, x);
    const CovariantTensor c = covariant_hessian_chart(u, x);
    EXPECT_LE((a.components - c.components).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(a.max_asymmetry(), 1e-10);
  }
}

TEST(HigherCovariant, OrderTwoIsTheHessian) {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const SmoothMap u = random_sphere_map(rng);
    const Vector x = random_sphere_point(rng, 2);
    EXPECT_LE((higher_covariant(u, x, 2).components - covariant_hessian(u, x).components).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(HigherCovariant, FlatThirdOrderIsThirdPartials) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(3), Manifold::euclidean(1), Cubic{});
  const Vector x = vec({0.5, -0.4, 1.5});
  const CovariantTensor d3 = higher_covariant(u, x, 3);
  const std::array<int, 3> xxy{0, 0, 1}, yyy{1, 1, 1}, yyz{1, 1, 2}, zzz{2, 2, 2};
  EXPECT_NEAR(d3(0, xxy), 2.0, 1e-12);
  EXPECT_NEAR(d3(0, yyy), 6.0 * x[2], 1e-12);
  EXPECT_NEAR(d3(0, yyz), 6.0 * x[1], 1e-12);
  EXPECT_NEAR(d3(0, zzz), 0.0, 1e-12);
  EXPECT_LE(d3.max_asymmetry(), 1e-12);
}

TEST(HigherCovariant, CurvedThirdOrderIsSymmetricInLastSlots) {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const SmoothMap u = random_sphere_map(rng);
    const CovariantTensor d3 = higher_covariant(u, random_sphere_point(rng, 2), 3);
    EXPECT_LE(d3.slot_asymmetry(1, 2), 1e-9);
  }
}

TEST(HigherCovariant, OrderIsBounded) {
  const SmoothMap w = wind(1.0);
  EXPECT_THROW(higher_covariant(w, circle_point(0.1), 5), UnsupportedOrder);
  EXPECT_THROW(higher_covariant(w, circle_point(0.1), 0), UnsupportedOrder);
}

TEST(TensorNorm, IndependentOfOrthonormalFrame) {
  // oracle: |T|^2 = gN_ab T^a_ij T^b_kl g^ik g^jl
  Rng rng(14);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = rng.normal_matrix(3, 3), b = rng.normal_matrix(2, 2);
    CovariantTensor T;
    T.order = 2;
    T.domain_metric = MetricTensor(a * a.transpose() + Matrix::Identity(3, 3));
    T.value_metric = MetricTensor(b * b.transpose() + Matrix::Identity(2, 2));
    T.components = rng.normal_matrix(2, 9);
    const Matrix gi = T.domain_metric.matrix().inverse();
    const Matrix& gn = T.value_metric.matrix();
    double sq = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
              for (int l = 0; l < 3; ++l)
                sq += gn(p, q) * T.components(p, i * 3 + j) * T.components(q, k * 3 + l) * gi(i, k) * gi(j, l);
    EXPECT_NEAR(tensor_norm(T), std::sqrt(sq), 1e-12 * std::sqrt(sq));
  }
}

TEST(TensorNorm, RejectsIndefiniteMetric) {
  CovariantTensor T;
  T.order = 1;
  T.domain_metric = MetricTensor(Matrix::Identity(2, 2));
  T.value_metric = MetricTensor(vec({1.0, -1.0}).asDiagonal());
  T.components = Matrix::Identity(2, 2);
  EXPECT_THROW(tensor_norm(T), NumericalError);
}

TEST(Sasaki, ClosedFormCases) {
  const SmoothMap id = SmoothMap::from_formula(Manifold::euclidean(4), Manifold::euclidean(4), Identity{});
  EXPECT_NEAR(sasaki_norm_sq(id, vec({0.1, 0.2, 0.3, 0.4})), 4.0, 1e-14);
  const SmoothMap c = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Constant{});
  EXPECT_EQ(sasaki_norm_sq(c, vec({0.1, 0.2})), 0.0);
  EXPECT_NEAR(sasaki_norm_sq(wind(3.0), circle_point(1.0)), 9.0, 1e-12);
}

TEST(Sasaki, SplitsIntoTangentAndConnectorParts) {
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const SmoothMap u = i % 2 ? random_sphere_map(rng) : random_flat_map(rng, 2, 3);
    const Vector x = i % 2 ? random_sphere_point(rng, 2) : rng.normal_vector(2);
    const double t = tensor_norm(tangent_map(u, x)), h = tensor_norm(covariant_hessian(u, x));
    EXPECT_NEAR(sasaki_norm_sq(u, x), t * t + h * h, 1e-9 * (1.0 + t * t + h * h));
  }
}

TEST(Sasaki, ChristoffelSignFaultIsDetected) {
  cosob::testing::inject_christoffel_sign_fault(true);
  const CriterionResult faulty = run_criterion(1, {});
  cosob::testing::inject_christoffel_sign_fault(false);
  const CriterionResult clean = run_criterion(1, {});
  EXPECT_FALSE(faulty.pass);
  EXPECT_TRUE(clean.pass);
}

TEST(Renormalization, BoundedAndInvertible) {
  Rng rng(16);
  const SmoothMap spiral = make_example({FamilyId::Spiral, 1.5, 1.0, 1.0, 3, std::nullopt});
  for (int i = 0; i < 40; ++i) {
    const bool sphere = i % 2 == 0;
    const SmoothMap u = sphere ? random_sphere_map(rng) : spiral;
    const Vector x = sphere ? random_sphere_point(rng, 2) : Vector(0.5 * rng.unit_vector(3));
    const Renormalization r = hm_renormalize(u, x);
    EXPECT_LT(tensor_norm(r.renormalized), 1.0);
    const CovariantTensor h = covariant_hessian(u, x);
    const double scale = 1.0 + h.components.cwiseAbs().maxCoeff();
    EXPECT_LE((r.reconstructed.components - h.components).cwiseAbs().maxCoeff(), 1e-10 * scale);
  }
}

TEST(Renormalization, ConstantMapStaysZero) {
  const SmoothMap c = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Constant{});
  const Renormalization r = hm_renormalize(c, vec({0.2, 0.2}));
  EXPECT_EQ(tensor_norm(r.renormalized), 0.0);
  EXPECT_EQ(tensor_norm(r.reconstructed), 0.0);
}

TEST(Kato, GradientOfNormIsDominated) {
  // |grad |Tu|| <= |D^2_K u| by central differences along chart directions
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    const SmoothMap u = random_sphere_map(rng);
    const Vector x = random_sphere_point(rng, 2);
    const Manifold& M = u.domain();
    const Chart chart = M.chart_at(x);
    const Vector y0 = M.to_chart(chart, x);
    const Matrix g = M.metric(chart, y0).matrix();
    const double h = 1e-5;
    Vector d(2);
    for (int k = 0; k < 2; ++k) {
      Vector yp = y0, ym = y0;
      yp[k] += h;
      ym[k] -= h;
      d[k] = (tensor_norm(tangent_map(u, M.to_ambient(chart, yp))) -
              tensor_norm(tangent_map(u, M.to_ambient(chart, ym)))) /
             (2.0 * h);
    }
    EXPECT_LE(std::sqrt(d.dot(g.ldlt().solve(d))), tensor_norm(covariant_hessian(u, x)) + 1e-6);
  }
}
