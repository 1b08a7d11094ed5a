#include <gtest/gtest.h>

#include <cmath>

#include "cosob/error.hpp"
#include "cosob/gallery.hpp"
#include "cosob/jet.hpp"
#include "cosob/sampling.hpp"
#include "cosob/smooth_map.hpp"

using namespace cosob;

namespace {

struct Square {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * x[0]};
  }
};

struct Shift {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] + 1.0, x[1] * 2.0};
  }
};

struct SinProduct {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::sin;
    return {sin(x[0] * x[1])};
  }
};

// Largest error of first and second chart derivatives against the analytic jet.
std::pair<double, double> fd_errors(const SmoothMap& u, const Vector& x) {
  const Jet a = evaluate_jet(u, x, 2, Differentiation::Analytic);
  const Jet f = evaluate_jet_in_chart(u, x, a.domain_chart, 2, Differentiation::FiniteDifference);
  const int m = a.domain_chart.dim;
  const double e1 = (jet_derivative(a.ambient, m, 1) - jet_derivative(f.ambient, m, 1)).cwiseAbs().maxCoeff();
  const double e2 = (jet_derivative(a.ambient, m, 2) - jet_derivative(f.ambient, m, 2)).cwiseAbs().maxCoeff();
  return {e1, e2};
}

}  // namespace

TEST(SmoothMap, ValueLandsOnTarget) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const SmoothMap u = random_sphere_map(rng);
    const Vector x = random_sphere_point(rng, 2);
    EXPECT_LE(u.target().constraint_residual(u(x)), 1e-10);
  }
  const SmoothMap wind = make_example({FamilyId::GeodesicWind, 1.0, 1.0, 3.0, 1, std::nullopt});
  Vector x(2);
  x << std::cos(0.4), std::sin(0.4);
  EXPECT_LE(wind.target().constraint_residual(wind(x)), 1e-10);
}

TEST(SmoothMap, AnalyticAndFiniteDifferenceJetsAgree) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const SmoothMap u = t % 2 ? random_sphere_map(rng) : random_flat_map(rng, 3, 2);
    const Vector x = t % 2 ? random_sphere_point(rng, 2) : rng.normal_vector(3);
    const OracleCheck c = check_oracles(u, x);
    EXPECT_FALSE(c.flagged) << c.mismatch << " vs " << c.expected_error;
    EXPECT_LE(c.mismatch, 1e-5);
  }
}

TEST(SmoothMap, MismatchedOraclesAreFlagged) {
  // value oracle sin(xy), Taylor oracle of a different function
  const SmoothMap good = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(1), SinProduct{});
  const SmoothMap bad(
      Manifold::euclidean(2), Manifold::euclidean(1),
      [&good](const Vector& x) { return good(x); },
      [](std::span<const Taylor> x) { return std::vector<Taylor>{sin(x[0] * x[1]) + 0.01 * x[0] * x[0]}; });
  Vector x(2);
  x << 0.3, 0.7;
  EXPECT_FALSE(check_oracles(good, x).flagged);
  EXPECT_TRUE(check_oracles(bad, x).flagged);
}

TEST(SmoothMap, FiniteDifferenceErrorIsSecondOrder) {
  Rng rng(3);
  const SmoothMap u = random_flat_map(rng, 2, 2);
  const Vector x = rng.normal_vector(2);
  const auto [a1, a2] = fd_errors(u.with_fd_step(2e-2), x);
  const auto [b1, b2] = fd_errors(u.with_fd_step(1e-2), x);
  EXPECT_NEAR(a1 / b1, 4.0, 0.4);
  EXPECT_NEAR(a2 / b2, 4.0, 0.4);
}

TEST(SmoothMap, StepUnderflowRaisesNumericalError) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(1), Manifold::euclidean(1), Square{});
  Vector x(1);
  x << 1.0;
  EXPECT_THROW(evaluate_jet(u.with_fd_step(1e-20), x, 2, Differentiation::FiniteDifference), NumericalError);
}

TEST(SmoothMap, AnalyticModeNeedsAnOracle) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(1), Manifold::euclidean(1), Square{});
  Vector x(1);
  x << 1.0;
  EXPECT_THROW(evaluate_jet(u.without_analytic(), x, 2, Differentiation::Analytic), ConfigError);
  EXPECT_NO_THROW(evaluate_jet(u.without_analytic(), x, 2, Differentiation::Auto));
}

TEST(SmoothMap, JetOrderIsBounded) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(1), Manifold::euclidean(1), Square{});
  Vector x(1);
  x << 1.0;
  EXPECT_THROW(evaluate_jet(u, x, 5), UnsupportedOrder);
}

TEST(SmoothMap, CompositionMatchesSequentialEvaluation) {
  Rng rng(4);
  const SmoothMap f = random_flat_map(rng, 2, 3);
  const SmoothMap g = random_flat_map(rng, 3, 2);
  const SmoothMap gf = compose(g, f);
  const Vector x = rng.normal_vector(2);
  EXPECT_LE((gf(x) - g(f(x))).norm(), 1e-14);
  EXPECT_TRUE(gf.has_analytic());
  EXPECT_FALSE(check_oracles(gf, x).flagged);
  EXPECT_THROW(compose(f, f), ConfigError);
}

TEST(SmoothMap, ChartJetMatchesDefaultChart) {
  const SmoothMap u = SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Shift{});
  Vector x(2);
  x << 0.5, -0.5;
  const Jet j = evaluate_jet(u, x, 2);
  const Jet k = evaluate_jet_in_chart(u, x, j.domain_chart, 2);
  EXPECT_LE((j.value - k.value).norm(), 0.0);
  EXPECT_NEAR(j.ambient[1].coefficients()[2], 2.0, 1e-15);
}
