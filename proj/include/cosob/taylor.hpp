#pragma once

// Truncated multivariate Taylor polynomials.
//
// A Taylor value carries the coefficients of a smooth function's expansion
// around a base point in `nvars` variables, truncated at total degree
// `order` (<= kMaxTaylorOrder). Arithmetic and elementary functions act on
// the truncated series exactly, so evaluating any smooth formula on seeded
// variables yields all its partial derivatives up to `order` to rounding
// error. Constants (no variables) mix freely with series.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cosob {

inline constexpr int kMaxTaylorOrder = 4;
inline constexpr int kMaxTaylorVars = 8;

class TaylorSpace {
 public:
  explicit TaylorSpace(int nvars);

  int nvars() const { return nvars_; }
  /// Number of monomials of total degree <= d.
  int count(int d) const { return count_[d]; }
  int size() const { return count_[kMaxTaylorOrder]; }
  int degree(int idx) const { return degree_[idx]; }
  const std::vector<std::uint8_t>& exponent(int idx) const { return exps_[idx]; }
  /// Index of the monomial with the given exponents, -1 if degree exceeds the max.
  int index(std::span<const int> alpha) const;
  /// Index of exponent(idx) + e_var, -1 if out of range.
  int raise(int idx, int var) const { return raise_[idx * nvars_ + var]; }
  /// alpha! for the monomial at idx.
  double factorial(int idx) const { return fact_[idx]; }

  struct Pair {
    int a, b, r;
  };
  /// Coefficient products contributing to a product truncated at degree d.
  std::span<const Pair> pairs(int d) const { return {pairs_.data(), static_cast<std::size_t>(pair_end_[d])}; }

 private:
  int nvars_;
  std::array<int, kMaxTaylorOrder + 1> count_{};
  std::vector<std::vector<std::uint8_t>> exps_;
  std::vector<int> degree_;
  std::vector<int> lookup_;
  std::vector<int> raise_;
  std::vector<double> fact_;
  std::vector<Pair> pairs_;
  std::array<int, kMaxTaylorOrder + 1> pair_end_{};
};

/// Shared, immutable space for the given number of variables.
const TaylorSpace& taylor_space(int nvars);

class Taylor {
 public:
  Taylor() : c_(1, 0.0) {}
  Taylor(double value) : c_(1, value) {}  // NOLINT: implicit promotion of constants

  static Taylor constant(int nvars, int order, double value);
  /// The affine series value + t_var.
  static Taylor variable(int nvars, int order, int var, double value);
  /// Series with prescribed coefficients (monomial order of the space).
  static Taylor from_coefficients(int nvars, int order, std::vector<double> coeffs);

  bool is_constant() const { return space_ == nullptr; }
  int nvars() const { return space_ ? space_->nvars() : 0; }
  int order() const { return space_ ? order_ : kMaxTaylorOrder; }
  double value() const { return c_[0]; }
  const std::vector<double>& coefficients() const { return c_; }
  const TaylorSpace* space() const { return space_; }

  /// Partial derivative d^alpha at the base point, |alpha| <= order.
  double derivative(std::span<const int> alpha) const;
  /// Series of the partial derivative along `var` (order drops by one).
  Taylor partial(int var) const;
  /// Drop all terms above degree d.
  Taylor truncated(int d) const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);
  Taylor& operator*=(double s);

  friend Taylor operator-(Taylor a);
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(Taylor a, const Taylor& b) { return a /= b; }
  friend Taylor operator+(Taylor a, double b) { a.c_[0] += b; return a; }
  friend Taylor operator+(double b, Taylor a) { a.c_[0] += b; return a; }
  friend Taylor operator-(Taylor a, double b) { a.c_[0] -= b; return a; }
  friend Taylor operator-(double b, Taylor a) { return -(a - b); }
  friend Taylor operator*(Taylor a, double b) { return a *= b; }
  friend Taylor operator*(double b, Taylor a) { return a *= b; }
  friend Taylor operator/(Taylor a, double b) { return a *= (1.0 / b); }
  friend Taylor operator/(double b, const Taylor& a);

  /// f(self) given f^(n)(value()) for n = 0..order().
  Taylor compose(std::span<const double> derivs) const;

 private:
  Taylor(const TaylorSpace* space, int order, std::vector<double> c)
      : space_(space), order_(order), c_(std::move(c)) {}
  void promote_to(const TaylorSpace* space, int order);

  const TaylorSpace* space_ = nullptr;
  int order_ = 0;
  std::vector<double> c_;
};

Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor exp(const Taylor& x);
Taylor log(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor pow(const Taylor& x, double a);
Taylor atan(const Taylor& x);
Taylor atan2(const Taylor& y, const Taylor& x);

inline double value_of(double x) { return x; }
inline double value_of(const Taylor& x) { return x.value(); }

/// Seeds `point` as the base of a Taylor expansion in point.size() variables.
std::vector<Taylor> seed_variables(std::span<const double> point, int order);

/// All order-k partials of f in m variables, flattened as f[i1 * m^(k-1) + ... + ik].
std::vector<double> derivative_tensor(const Taylor& f, int m, int k);

}  // namespace cosob
