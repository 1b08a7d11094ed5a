#include "cosob/embedding.hpp"

#include <cmath>

#include "cosob/error.hpp"

namespace cosob {

namespace {

struct Helix {
  int nu;
  HelixParams h;
  template <class S>
  std::vector<S> operator()(std::span<const S> t) const {
    using std::cos;
    using std::sin;
    std::vector<S> out;
    out.reserve(3 * nu);
    for (int i = 0; i < nu; ++i) {
      out.push_back(h.lambda * t[i]);
      out.push_back(h.gamma * cos(h.mu * t[i]));
      out.push_back(h.gamma * sin(h.mu * t[i]));
    }
    return out;
  }
};

struct Identity {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x.begin(), x.end()};
  }
};

// Local second-order data of an embedding at a source point.
struct EmbeddingFrame {
  Matrix chart_jacobian;  // source chart -> source ambient
  MetricTensor metric;    // source chart metric
  Matrix jacobian;        // source chart -> R^N
  Matrix hessian;         // N x m^2, empty for first-order frames
  Matrix normal;          // I - P onto the image tangent space
  int m = 0;

  Vector chart_vector(const Vector& v) const {
    return metric.matrix().ldlt().solve(chart_jacobian.transpose() * v);
  }
  Vector second_form(const Vector& v1, const Vector& v2) const {
    const Vector c1 = chart_vector(v1), c2 = chart_vector(v2);
    return normal * (hessian * kronecker<double>(c1, c2));
  }
};

EmbeddingFrame frame_at(const IsometricEmbedding& iota, const Vector& x, Differentiation mode, int order = 2) {
  const Jet jet = evaluate_jet(iota.map, x, order, mode);
  EmbeddingFrame f;
  f.m = jet.domain_chart.dim;
  const auto seeds = seed_variables(std::span<const double>(jet.y0.data(), static_cast<std::size_t>(jet.y0.size())), 1);
  f.chart_jacobian = jet_derivative(chart_to_ambient<Taylor>(jet.domain_chart, std::span<const Taylor>(seeds)), f.m, 1);
  f.metric = iota.source().metric(jet.domain_chart, jet.y0);
  f.jacobian = jet_derivative(jet.ambient, f.m, 1);
  if (order >= 2) f.hessian = jet_derivative(jet.ambient, f.m, 2);
  const Matrix gram = f.jacobian.transpose() * f.jacobian;
  const Matrix proj = f.jacobian * gram.ldlt().solve(f.jacobian.transpose());
  f.normal = Matrix::Identity(proj.rows(), proj.cols()) - proj;
  return f;
}

}  // namespace

IsometricEmbedding helical_embed(int nu, double lambda, double gamma, double mu) {
  if (nu < 1 || nu > kMaxTaylorVars) throw ConfigError("helical_embed: nu must be in 1..8");
  if (std::abs(lambda * lambda + gamma * gamma * mu * mu - 1.0) > 1e-12)
    throw ConfigError("helical_embed: requires lambda^2 + gamma^2 mu^2 = 1");
  if (!(gamma > 0.0 && mu > 0.0)) throw ConfigError("helical_embed: gamma and mu must be positive");
  const HelixParams h{lambda, gamma, mu};
  return {SmoothMap::from_formula(Manifold::euclidean(nu), Manifold::euclidean(3 * nu), Helix{nu, h}), h};
}

IsometricEmbedding inclusion(const Manifold& m) {
  return {SmoothMap::from_formula(m, Manifold::euclidean(m.ambient_dim()), Identity{}), std::nullopt};
}

IsometricEmbedding compose(const IsometricEmbedding& outer, const IsometricEmbedding& inner) {
  return {compose(outer.map, inner.map), std::nullopt};
}

double isometry_residual(const IsometricEmbedding& iota, const Vector& x, Differentiation mode) {
  const EmbeddingFrame f = frame_at(iota, x, mode, 1);
  return (f.jacobian.transpose() * f.jacobian - f.metric.matrix()).cwiseAbs().maxCoeff();
}

Vector second_fundamental_form(const IsometricEmbedding& iota, const Vector& x, const Vector& v1, const Vector& v2,
                               Differentiation mode) {
  return frame_at(iota, x, mode).second_form(v1, v2);
}

Vector helical_second_fundamental_form(const HelixParams& h, const Vector& t, const Vector& v1, const Vector& v2) {
  const int nu = static_cast<int>(t.size());
  Vector a = Vector::Zero(3 * nu);
  for (int i = 0; i < nu; ++i) {
    const double s = -h.gamma * h.mu * h.mu * v1[i] * v2[i];
    a[3 * i + 1] = s * std::cos(h.mu * t[i]);
    a[3 * i + 2] = s * std::sin(h.mu * t[i]);
  }
  return a;
}

double helical_bound_constant(int nu, const HelixParams& h) { return std::sqrt(nu) / (h.gamma * h.mu * h.mu); }

double sampled_bound_constant(const IsometricEmbedding& iota, const Vector& x, int samples, Rng& rng) {
  const EmbeddingFrame f = frame_at(iota, x, Differentiation::Auto);
  const Matrix frame = f.chart_jacobian * f.metric.orthonormal_frame();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector v = frame * rng.unit_vector(f.m);
    worst = std::max(worst, v.squaredNorm() / f.second_form(v, v).norm());
  }
  return worst;
}

ExtrinsicSplit extrinsic_split(const SmoothMap& u, const IsometricEmbedding& iota, const Vector& x,
                               Differentiation mode) {
  const Jet jet = evaluate_jet(u, x, 2, mode);
  const CovariantTensor tu = tangent_map(u, jet);
  const CovariantTensor hess = covariant_hessian(u, jet);
  const int m = tu.domain_dim();

  const EmbeddingFrame f = frame_at(iota, jet.value, mode);
  CovariantTensor normal;
  normal.order = 2;
  normal.base_point = x;
  normal.domain_metric = tu.domain_metric;
  normal.value_metric = MetricTensor::identity(iota.ambient_dim());
  normal.components.resize(iota.ambient_dim(), m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      normal.components.col(i * m + j) = f.second_form(tu.components.col(i), tu.components.col(j));

  const SmoothMap composite = compose(iota.map, u);
  const Jet cjet = evaluate_jet_in_chart(composite, x, jet.domain_chart, 2, mode);
  ExtrinsicSplit out;
  out.lhs = std::pow(tensor_norm(covariant_hessian(composite, cjet)), 2);
  out.intrinsic = std::pow(tensor_norm(hess), 2);
  out.normal = std::pow(tensor_norm(normal), 2);
  return out;
}

}  // namespace cosob
