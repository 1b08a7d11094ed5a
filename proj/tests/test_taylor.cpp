#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cosob/taylor.hpp"

using namespace cosob;

namespace {

std::vector<Taylor> seeds(std::vector<double> p, int order) { return seed_variables(std::span<const double>(p), order); }

double partial(const Taylor& f, std::vector<int> alpha) { return f.derivative(std::span<const int>(alpha)); }

}  // namespace

TEST(TaylorSpace, MonomialCountsAreBinomial) {
  // number of monomials of degree <= d in n variables is C(n + d, d)
  for (int n = 1; n <= 4; ++n) {
    const TaylorSpace& s = taylor_space(n);
    for (int d = 0; d <= kMaxTaylorOrder; ++d) {
      double c = 1.0;
      for (int i = 1; i <= d; ++i) c = c * (n + i) / i;
      EXPECT_EQ(s.count(d), static_cast<int>(std::lround(c)));
    }
  }
}

TEST(TaylorSpace, IndexRoundTrip) {
  const TaylorSpace& s = taylor_space(3);
  for (int idx = 0; idx < s.size(); ++idx) {
    std::vector<int> alpha(s.exponent(idx).begin(), s.exponent(idx).end());
    EXPECT_EQ(s.index(alpha), idx);
  }
}

TEST(Taylor, ExponentialMixedPartials) {
  const auto x = seeds({0.3, -0.2}, 4);
  const Taylor f = exp(x[0] + 2.0 * x[1]);
  const double e = std::exp(0.3 - 0.4);
  EXPECT_NEAR(partial(f, {0, 0}), e, 1e-15);
  EXPECT_NEAR(partial(f, {1, 2}), 4.0 * e, 1e-13);
  EXPECT_NEAR(partial(f, {2, 2}), 4.0 * e, 1e-13);
  EXPECT_NEAR(partial(f, {0, 4}), 16.0 * e, 1e-12);
}

TEST(Taylor, PythagoreanIdentityIsExactAsSeries) {
  const auto x = seeds({0.7, 1.1}, 4);
  const Taylor t = x[0] * x[1];
  const Taylor one = sin(t) * sin(t) + cos(t) * cos(t);
  EXPECT_NEAR(one.coefficients()[0], 1.0, 1e-15);
  for (std::size_t i = 1; i < one.coefficients().size(); ++i) EXPECT_NEAR(one.coefficients()[i], 0.0, 1e-14);
}

TEST(Taylor, GeometricSeries) {
  const auto x = seeds({0.0}, 4);
  const Taylor f = 1.0 / (1.0 - x[0]);
  for (int k = 0; k <= 4; ++k) {
    // d^k/dx^k (1 - x)^-1 at 0 is k!
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    EXPECT_NEAR(partial(f, {k}), fact, 1e-12);
  }
}

TEST(Taylor, LogInvertsExp) {
  const auto x = seeds({0.4, -1.3, 0.2}, 4);
  const Taylor s = x[0] - 0.5 * x[1] + x[2] * x[0];
  const Taylor back = log(exp(s));
  for (std::size_t i = 0; i < back.coefficients().size(); ++i)
    EXPECT_NEAR(back.coefficients()[i], s.coefficients()[i], 1e-13);
}

TEST(Taylor, PowHalfMatchesSqrt) {
  const auto x = seeds({1.7, 0.4}, 4);
  const Taylor r = x[0] * x[0] + x[1];
  const Taylor a = pow(r, 0.5), b = sqrt(r);
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) EXPECT_NEAR(a.coefficients()[i], b.coefficients()[i], 1e-13);
}

TEST(Taylor, Atan2Gradient) {
  const double px = -0.8, py = 0.6;
  const auto x = seeds({px, py}, 2);
  const Taylor a = atan2(x[1], x[0]);
  const double r2 = px * px + py * py;
  EXPECT_NEAR(a.value(), std::atan2(py, px), 1e-15);
  EXPECT_NEAR(partial(a, {1, 0}), -py / r2, 1e-14);
  EXPECT_NEAR(partial(a, {0, 1}), px / r2, 1e-14);
  // atan2 is harmonic away from the origin
  EXPECT_NEAR(partial(a, {2, 0}) + partial(a, {0, 2}), 0.0, 1e-13);
}

TEST(Taylor, DerivativeTensorIsSymmetric) {
  const auto x = seeds({0.2, 0.5, -0.3}, 3);
  const Taylor f = sin(x[0] * x[1]) * exp(x[2]) + x[0] * x[1] * x[2];
  const std::vector<double> t = derivative_tensor(f, 3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double v = t[(i * 3 + j) * 3 + k];
        EXPECT_DOUBLE_EQ(v, t[(j * 3 + i) * 3 + k]);
        EXPECT_DOUBLE_EQ(v, t[(i * 3 + k) * 3 + j]);
      }
  // d^3/dx dy dz of sin(xy) e^z + xyz is (cos(xy) - xy sin(xy)) e^z + 1
  EXPECT_NEAR(t[(0 * 3 + 1) * 3 + 2],
              1.0 + (std::cos(0.1) - 0.1 * std::sin(0.1)) * std::exp(-0.3), 1e-13);
}

TEST(Taylor, PartialLowersOrder) {
  const auto x = seeds({0.5, 0.25}, 3);
  const Taylor f = x[0] * x[0] * x[1];
  const Taylor fx = f.partial(0);
  EXPECT_EQ(fx.order(), 2);
  EXPECT_NEAR(fx.value(), 2.0 * 0.5 * 0.25, 1e-15);
  EXPECT_NEAR(partial(fx, {1, 1}), 2.0, 1e-14);
}
