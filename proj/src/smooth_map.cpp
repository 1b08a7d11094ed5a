#include "cosob/smooth_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "cosob/error.hpp"

namespace cosob {

SmoothMap::SmoothMap(Manifold domain, Manifold target, ValueOracle value, TaylorOracle analytic,
                     std::optional<double> fd_step)
    : domain_(std::move(domain)),
      target_(std::move(target)),
      value_(std::move(value)),
      analytic_(std::move(analytic)),
      fd_step_(fd_step) {
  if (!value_) throw ConfigError("SmoothMap: value oracle is required");
  if (fd_step_ && !(*fd_step_ > 0.0)) throw ConfigError("SmoothMap: fd_step must be positive");
}

SmoothMap SmoothMap::without_analytic() const { return SmoothMap(domain_, target_, value_, {}, fd_step_); }

SmoothMap SmoothMap::with_fd_step(double h) const { return SmoothMap(domain_, target_, value_, analytic_, h); }

SmoothMap compose(const SmoothMap& g, const SmoothMap& f) {
  if (!(f.target() == g.domain())) throw ConfigError("compose: target of the inner map differs from the outer domain");
  ValueOracle value = [g, f](const Vector& x) { return g(f(x)); };
  TaylorOracle analytic;
  if (g.has_analytic() && f.has_analytic()) {
    analytic = [g, f](std::span<const Taylor> x) {
      const std::vector<Taylor> y = f(x);
      return g(std::span<const Taylor>(y));
    };
  }
  return SmoothMap(f.domain(), g.target(), std::move(value), std::move(analytic), f.fd_step());
}

double fd_step_for_order(int d, double scale) { return std::pow(kFdEpsilon, 1.0 / (d + 2)) * scale; }

namespace {

// Central stencils: offsets -2..2, weights for derivative orders 0..4 (error O(h^2)).
constexpr std::array<std::array<double, 5>, 5> kStencil{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

std::vector<Taylor> fd_ambient_series(const SmoothMap& u, const Chart& chart, const Vector& y0, int order) {
  const int m = chart.dim;
  const int n = u.target().ambient_dim();
  const TaylorSpace& space = taylor_space(m);
  const int ncoef = space.count(order);
  std::vector<std::vector<double>> coeffs(n, std::vector<double>(ncoef, 0.0));

  auto sample = [&](const Vector& y) {
    const Vector x = u.domain().to_ambient(chart, y);
    return u.target().project(u(x));
  };
  const Vector center = sample(y0);
  for (int k = 0; k < n; ++k) coeffs[k][0] = center[k];

  std::map<std::pair<int, std::vector<int>>, Vector> cache;
  std::vector<int> offset(m);
  for (int idx = 1; idx < ncoef; ++idx) {
    const auto& alpha = space.exponent(idx);
    const int d = space.degree(idx);
    const double h = u.fd_step() ? *u.fd_step() : fd_step_for_order(d, 1.0);
    if (h < 1e-14 * std::max(1.0, y0.norm())) throw NumericalError("finite-difference step underflow");
    Vector acc = Vector::Zero(n);
    // odometer over the tensor product of the active 1-D stencils
    std::vector<int> digit(m);
    for (int v = 0; v < m; ++v) digit[v] = alpha[v] == 0 ? 2 : 0;
    while (true) {
      double weight = 1.0;
      for (int v = 0; v < m; ++v) {
        offset[v] = digit[v] - 2;
        weight *= kStencil[alpha[v]][digit[v]];
      }
      if (weight != 0.0) {
        auto key = std::make_pair(d, offset);
        auto it = cache.find(key);
        if (it == cache.end()) {
          Vector y = y0;
          for (int v = 0; v < m; ++v) y[v] += h * offset[v];
          it = cache.emplace(std::move(key), sample(y)).first;
        }
        acc += weight * it->second;
      }
      int v = 0;
      while (v < m) {
        if (alpha[v] == 0) {
          ++v;
          continue;
        }
        if (++digit[v] < 5) break;
        digit[v] = 0;
        ++v;
      }
      if (v == m) break;
    }
    const double scale = 1.0 / (std::pow(h, d) * space.factorial(idx));
    for (int k = 0; k < n; ++k) coeffs[k][idx] = acc[k] * scale;
  }
  std::vector<Taylor> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(Taylor::from_coefficients(m, order, std::move(coeffs[k])));
  return out;
}

}  // namespace

Jet evaluate_jet_in_chart(const SmoothMap& u, const Vector& x, const Chart& domain_chart, int order,
                          Differentiation mode) {
  if (order < 0 || order > kMaxTaylorOrder) throw UnsupportedOrder("jet order must be in 0..4");
  if (x.size() != u.domain().ambient_dim()) throw DomainError("evaluate_jet: point has wrong dimension");
  const bool analytic = mode == Differentiation::Analytic || (mode == Differentiation::Auto && u.has_analytic());
  if (analytic && !u.has_analytic()) throw ConfigError("evaluate_jet: map has no analytic oracle");

  Jet jet;
  jet.order = order;
  jet.x = x;
  jet.domain_chart = domain_chart;
  jet.y0 = u.domain().to_chart(domain_chart, x);
  jet.y = seed_variables(std::span<const double>(jet.y0.data(), static_cast<std::size_t>(jet.y0.size())), order);
  jet.analytic = analytic;
  if (analytic) {
    const auto xt = chart_to_ambient<Taylor>(domain_chart, jet.y);
    jet.ambient = u(std::span<const Taylor>(xt));
  } else {
    jet.ambient = fd_ambient_series(u, domain_chart, jet.y0, order);
  }
  if (static_cast<int>(jet.ambient.size()) != u.target().ambient_dim())
    throw ConfigError("evaluate_jet: oracle returned wrong target dimension");
  jet.value.resize(u.target().ambient_dim());
  for (int k = 0; k < jet.value.size(); ++k) jet.value[k] = jet.ambient[k].value();
  if (!std::isfinite(jet.value.norm())) throw DomainError("evaluate_jet: map is undefined at this point");
  jet.target_chart = u.target().chart_at(jet.value);
  jet.w0 = u.target().to_chart(jet.target_chart, jet.value);
  jet.chart = ambient_to_chart<Taylor>(jet.target_chart, jet.ambient);
  return jet;
}

Jet evaluate_jet(const SmoothMap& u, const Vector& x, int order, Differentiation mode) {
  return evaluate_jet_in_chart(u, x, u.domain().chart_at(x), order, mode);
}

OracleCheck check_oracles(const SmoothMap& u, const Vector& x) {
  OracleCheck out;
  if (!u.has_analytic()) return out;
  const Jet a = evaluate_jet(u, x, 2, Differentiation::Analytic);
  const Jet f = evaluate_jet_in_chart(u, x, a.domain_chart, 2, Differentiation::FiniteDifference);
  double scale = 1.0;
  for (std::size_t k = 0; k < a.ambient.size(); ++k) {
    const auto& ca = a.ambient[k].coefficients();
    const auto& cf = f.ambient[k].coefficients();
    for (std::size_t i = 0; i < ca.size(); ++i) {
      out.mismatch = std::max(out.mismatch, std::abs(ca[i] - cf[i]));
      scale = std::max(scale, std::abs(ca[i]));
    }
  }
  const double h1 = u.fd_step() ? *u.fd_step() : fd_step_for_order(1, 1.0);
  const double h2 = u.fd_step() ? *u.fd_step() : fd_step_for_order(2, 1.0);
  out.expected_error = (h1 * h1 + h2 * h2) * scale;
  out.flagged = out.mismatch > 100.0 * out.expected_error;
  return out;
}

}  // namespace cosob
