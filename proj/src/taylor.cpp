#include "cosob/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cosob {

namespace {

constexpr int kBase = kMaxTaylorOrder + 1;

void append_degree(int nvars, int remaining, int var, std::vector<std::uint8_t>& cur,
                   std::vector<std::vector<std::uint8_t>>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    append_degree(nvars, remaining - e, var + 1, cur, out);
  }
}

double factorial_of(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TaylorSpace::TaylorSpace(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxTaylorVars) throw std::invalid_argument("TaylorSpace: unsupported variable count");
  for (int d = 0; d <= kMaxTaylorOrder; ++d) {
    if (nvars == 0) {
      if (d == 0) exps_.emplace_back();
    } else {
      std::vector<std::uint8_t> cur(nvars, 0);
      append_degree(nvars, d, 0, cur, exps_);
    }
    count_[d] = static_cast<int>(exps_.size());
  }
  const int n = static_cast<int>(exps_.size());
  int table = 1;
  for (int i = 0; i < nvars; ++i) table *= kBase;
  lookup_.assign(table, -1);
  degree_.resize(n);
  fact_.resize(n);
  for (int idx = 0; idx < n; ++idx) {
    int key = 0, mul = 1, deg = 0;
    double f = 1.0;
    for (int v = 0; v < nvars; ++v) {
      key += exps_[idx][v] * mul;
      mul *= kBase;
      deg += exps_[idx][v];
      f *= factorial_of(exps_[idx][v]);
    }
    lookup_[key] = idx;
    degree_[idx] = deg;
    fact_[idx] = f;
  }
  raise_.assign(static_cast<std::size_t>(n) * std::max(nvars, 1), -1);
  std::vector<int> alpha(nvars);
  for (int idx = 0; idx < n; ++idx) {
    for (int v = 0; v < nvars; ++v) {
      for (int w = 0; w < nvars; ++w) alpha[w] = exps_[idx][w];
      ++alpha[v];
      raise_[idx * nvars + v] = index(alpha);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > kMaxTaylorOrder) continue;
      for (int w = 0; w < nvars; ++w) alpha[w] = exps_[a][w] + exps_[b][w];
      pairs_.push_back({a, b, index(alpha)});
    }
  }
  std::stable_sort(pairs_.begin(), pairs_.end(), [this](const Pair& x, const Pair& y) {
    return degree_[x.a] + degree_[x.b] < degree_[y.a] + degree_[y.b];
  });
  for (int d = 0; d <= kMaxTaylorOrder; ++d) {
    pair_end_[d] = static_cast<int>(std::count_if(pairs_.begin(), pairs_.end(), [&](const Pair& p) {
      return degree_[p.a] + degree_[p.b] <= d;
    }));
  }
}

int TaylorSpace::index(std::span<const int> alpha) const {
  int key = 0, mul = 1, deg = 0;
  for (int v = 0; v < nvars_; ++v) {
    if (alpha[v] < 0) return -1;
    deg += alpha[v];
    if (deg > kMaxTaylorOrder) return -1;
    key += alpha[v] * mul;
    mul *= kBase;
  }
  return lookup_[key];
}

const TaylorSpace& taylor_space(int nvars) {
  static std::array<std::unique_ptr<TaylorSpace>, kMaxTaylorVars + 1> spaces;
  static std::array<std::once_flag, kMaxTaylorVars + 1> flags;
  if (nvars < 0 || nvars > kMaxTaylorVars) throw std::invalid_argument("taylor_space: unsupported variable count");
  std::call_once(flags[nvars], [nvars] { spaces[nvars] = std::make_unique<TaylorSpace>(nvars); });
  return *spaces[nvars];
}

Taylor Taylor::constant(int nvars, int order, double value) {
  const TaylorSpace& s = taylor_space(nvars);
  std::vector<double> c(s.count(order), 0.0);
  c[0] = value;
  return Taylor(&s, order, std::move(c));
}

Taylor Taylor::variable(int nvars, int order, int var, double value) {
  Taylor t = constant(nvars, order, value);
  if (order >= 1) t.c_[1 + var] = 1.0;
  return t;
}

Taylor Taylor::from_coefficients(int nvars, int order, std::vector<double> coeffs) {
  const TaylorSpace& s = taylor_space(nvars);
  if (static_cast<int>(coeffs.size()) != s.count(order)) throw std::invalid_argument("Taylor: coefficient count");
  return Taylor(&s, order, std::move(coeffs));
}

void Taylor::promote_to(const TaylorSpace* space, int order) {
  const double v = c_[0];
  space_ = space;
  order_ = order;
  c_.assign(space->count(order), 0.0);
  c_[0] = v;
}

double Taylor::derivative(std::span<const int> alpha) const {
  int deg = 0;
  for (int a : alpha) deg += a;
  if (deg == 0) return c_[0];
  if (!space_) return 0.0;
  if (deg > order_) throw std::out_of_range("Taylor::derivative: order exceeds truncation");
  const int idx = space_->index(alpha);
  return c_[idx] * space_->factorial(idx);
}

Taylor Taylor::partial(int var) const {
  if (!space_) return Taylor(0.0);
  if (order_ == 0) throw std::out_of_range("Taylor::partial: no derivative information left");
  const int d = order_ - 1;
  std::vector<double> out(space_->count(d), 0.0);
  for (int idx = 0; idx < space_->count(d); ++idx) {
    const int up = space_->raise(idx, var);
    out[idx] = (space_->exponent(idx)[var] + 1) * c_[up];
  }
  return Taylor(space_, d, std::move(out));
}

Taylor Taylor::truncated(int d) const {
  if (!space_ || d >= order_) return *this;
  return Taylor(space_, d, std::vector<double>(c_.begin(), c_.begin() + space_->count(d)));
}

Taylor& Taylor::operator+=(const Taylor& o) {
  if (!o.space_) {
    c_[0] += o.c_[0];
    return *this;
  }
  if (!space_) promote_to(o.space_, o.order_);
  if (space_ != o.space_) throw std::invalid_argument("Taylor: mismatched variable spaces");
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(space_->count(order_));
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  if (!o.space_) {
    c_[0] -= o.c_[0];
    return *this;
  }
  if (!space_) promote_to(o.space_, o.order_);
  if (space_ != o.space_) throw std::invalid_argument("Taylor: mismatched variable spaces");
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(space_->count(order_));
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Taylor operator-(Taylor a) {
  for (double& v : a.c_) v = -v;
  return a;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  if (!a.space_) return Taylor(b) *= a.c_[0];
  if (!b.space_) return Taylor(a) *= b.c_[0];
  if (a.space_ != b.space_) throw std::invalid_argument("Taylor: mismatched variable spaces");
  const int d = std::min(a.order_, b.order_);
  std::vector<double> out(a.space_->count(d), 0.0);
  for (const auto& p : a.space_->pairs(d)) out[p.r] += a.c_[p.a] * b.c_[p.b];
  return Taylor(a.space_, d, std::move(out));
}

Taylor& Taylor::operator*=(const Taylor& o) {
  *this = *this * o;
  return *this;
}

Taylor Taylor::compose(std::span<const double> derivs) const {
  if (!space_) return Taylor(derivs[0]);
  Taylor t = *this;
  t.c_[0] = 0.0;
  Taylor r = Taylor::constant(space_->nvars(), order_, derivs[order_] / factorial_of(order_));
  for (int n = order_ - 1; n >= 0; --n) {
    r = r * t;
    r.c_[0] += derivs[n] / factorial_of(n);
  }
  return r;
}

namespace {

Taylor reciprocal(const Taylor& x) {
  const double x0 = x.value();
  std::array<double, kMaxTaylorOrder + 1> d{};
  double p = 1.0 / x0;
  for (int n = 0; n <= kMaxTaylorOrder; ++n) {
    d[n] = ((n % 2) ? -1.0 : 1.0) * factorial_of(n) * p;
    p /= x0;
  }
  return x.compose(d);
}

}  // namespace

Taylor& Taylor::operator/=(const Taylor& o) {
  if (!o.space_) {
    for (double& v : c_) v /= o.c_[0];
    return *this;
  }
  *this = *this * reciprocal(o);
  return *this;
}

Taylor operator/(double b, const Taylor& a) { return reciprocal(a) *= b; }

Taylor sin(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 5> d{s, c, -s, -c, s};
  return x.compose(d);
}

Taylor cos(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 5> d{c, -s, -c, s, c};
  return x.compose(d);
}

Taylor exp(const Taylor& x) {
  const double e = std::exp(x.value());
  const std::array<double, 5> d{e, e, e, e, e};
  return x.compose(d);
}

Taylor log(const Taylor& x) {
  const double x0 = x.value();
  std::array<double, kMaxTaylorOrder + 1> d{};
  d[0] = std::log(x0);
  double p = 1.0 / x0;
  for (int n = 1; n <= kMaxTaylorOrder; ++n) {
    d[n] = ((n % 2) ? 1.0 : -1.0) * factorial_of(n - 1) * p;
    p /= x0;
  }
  return x.compose(d);
}

Taylor pow(const Taylor& x, double a) {
  const double x0 = x.value();
  std::array<double, kMaxTaylorOrder + 1> d{};
  double coef = 1.0;
  for (int n = 0; n <= kMaxTaylorOrder; ++n) {
    d[n] = coef * std::pow(x0, a - n);
    coef *= (a - n);
  }
  return x.compose(d);
}

Taylor sqrt(const Taylor& x) { return pow(x, 0.5); }

Taylor atan(const Taylor& x) {
  const double th = std::atan(x.value());
  const double c = std::cos(th);
  std::array<double, kMaxTaylorOrder + 1> d{};
  d[0] = th;
  for (int n = 1; n <= kMaxTaylorOrder; ++n) {
    d[n] = factorial_of(n - 1) * std::pow(c, n) * std::sin(n * (th + std::numbers::pi / 2));
  }
  return x.compose(d);
}

Taylor atan2(const Taylor& y, const Taylor& x) {
  const double y0 = y.value(), x0 = x.value();
  const double base = std::atan2(y0, x0);
  if (std::abs(x0) >= std::abs(y0)) {
    return atan(y / x) + (base - std::atan(y0 / x0));
  }
  return -atan(x / y) + (base + std::atan(x0 / y0));
}

std::vector<Taylor> seed_variables(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  std::vector<Taylor> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Taylor::variable(n, order, i, point[i]));
  return out;
}

std::vector<double> derivative_tensor(const Taylor& f, int m, int k) {
  int total = 1;
  for (int i = 0; i < k; ++i) total *= m;
  std::vector<double> out(total, 0.0);
  if (f.is_constant() && k > 0) return out;
  std::vector<int> alpha(m);
  for (int flat = 0; flat < total; ++flat) {
    std::fill(alpha.begin(), alpha.end(), 0);
    int rem = flat;
    for (int s = 0; s < k; ++s) {
      ++alpha[rem % m];
      rem /= m;
    }
    out[flat] = f.derivative(alpha);
  }
  return out;
}

}  // namespace cosob
