#include "cosob/jet.hpp"

#include <cmath>

#include "cosob/error.hpp"

namespace cosob {

namespace {

int ipow(int m, int k) {
  int r = 1;
  for (int i = 0; i < k; ++i) r *= m;
  return r;
}

Matrix derivative_matrix(const std::vector<Taylor>& f, int m, int k) { return jet_derivative(f, m, k); }

/// kron(E, ..., E) with k factors; maps frame components to chart components.
Matrix frame_power(const Matrix& e, int k) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < k; ++i) out = kronecker<double>(out, e);
  return out;
}

/// Jacobian of the target chart parametrization at w0 (ambient_dim x n).
Matrix target_chart_jacobian(const Jet& jet) {
  const auto seeds = seed_variables(std::span<const double>(jet.w0.data(), static_cast<std::size_t>(jet.w0.size())), 1);
  const auto x = chart_to_ambient<Taylor>(jet.target_chart, seeds);
  return derivative_matrix(x, static_cast<int>(jet.w0.size()), 1);
}

void require_order(const Jet& jet, int k) {
  if (jet.order < k) throw UnsupportedOrder("jet order is too low for the requested derivative");
}

CovariantTensor make_tensor(int order, const Jet& jet, Matrix components, const MetricTensor& gM, int value_dim) {
  CovariantTensor t;
  t.order = order;
  t.base_point = jet.x;
  t.components = std::move(components);
  t.domain_metric = gM;
  t.value_metric = MetricTensor::identity(value_dim);
  return t;
}

MetricTensor domain_metric(const SmoothMap& u, const Jet& jet) { return u.domain().metric(jet.domain_chart, jet.y0); }

bool is_zero(const Taylor& t) { return t.is_constant() && t.value() == 0.0; }

/// Inverse of a symmetric positive definite matrix of series (Gauss-Jordan, no pivoting).
std::vector<Taylor> invert_spd(std::vector<Taylor> a, int n) {
  std::vector<Taylor> inv(static_cast<std::size_t>(n) * n, Taylor(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Taylor(1.0);
  for (int p = 0; p < n; ++p) {
    const Taylor piv = 1.0 / a[p * n + p];
    for (int j = 0; j < n; ++j) {
      a[p * n + j] = a[p * n + j] * piv;
      inv[p * n + j] = inv[p * n + j] * piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == p || is_zero(a[r * n + p])) continue;
      const Taylor f = a[r * n + p];
      for (int j = 0; j < n; ++j) {
        a[r * n + j] = a[r * n + j] - f * a[p * n + j];
        inv[r * n + j] = inv[r * n + j] - f * inv[p * n + j];
      }
    }
  }
  return inv;
}

}  // namespace

Matrix jet_derivative(const std::vector<Taylor>& f, int m, int k) {
  Matrix out(static_cast<Eigen::Index>(f.size()), ipow(m, k));
  for (std::size_t a = 0; a < f.size(); ++a) {
    const auto d = derivative_tensor(f[a], m, k);
    for (std::size_t c = 0; c < d.size(); ++c) out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = d[c];
  }
  return out;
}

double CovariantTensor::operator()(int value, std::span<const int> args) const {
  const int m = domain_dim();
  int col = 0;
  for (int a : args) col = col * m + a;
  return components(value, col);
}

double CovariantTensor::slot_asymmetry(int s, int t) const {
  const int m = domain_dim();
  // slot 0 is the most significant digit of the column index
  const int ws = ipow(m, order - 1 - s), wt = ipow(m, order - 1 - t);
  double worst = 0.0;
  for (int col = 0; col < components.cols(); ++col) {
    const int ds = (col / ws) % m, dt = (col / wt) % m;
    const int other = col + (dt - ds) * ws + (ds - dt) * wt;
    worst = std::max(worst, (components.col(col) - components.col(other)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double CovariantTensor::max_asymmetry() const {
  double worst = 0.0;
  for (int s = 0; s + 1 < order; ++s)
    for (int t = s + 1; t < order; ++t) worst = std::max(worst, slot_asymmetry(s, t));
  return worst;
}

double tensor_norm(const CovariantTensor& t, const MetricTensor& gM, const MetricTensor& gN) {
  if (gM.dim() != t.domain_dim() || gN.dim() != t.value_dim()) throw ConfigError("tensor_norm: dimension mismatch");
  if (!gN.is_positive_definite() || !gM.is_positive_definite())
    throw NumericalError("tensor_norm: metric is not symmetric positive definite");
  const Matrix frame = t.components * frame_power(gM.orthonormal_frame(), t.order);
  double sq = (frame.transpose() * gN.matrix() * frame).trace();
  return std::sqrt(std::max(0.0, sq));
}

double tensor_norm(const CovariantTensor& t) { return tensor_norm(t, t.domain_metric, t.value_metric); }

CovariantTensor tangent_map(const SmoothMap& u, const Jet& jet) {
  require_order(jet, 1);
  const int m = jet.domain_chart.dim;
  return make_tensor(1, jet, derivative_matrix(jet.ambient, m, 1), domain_metric(u, jet), u.target().ambient_dim());
}

CovariantTensor tangent_map(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return tangent_map(u, evaluate_jet(u, x, 1, mode));
}

DoubleMorphism second_tangent(const Jet& jet) {
  require_order(jet, 2);
  const int m = jet.domain_chart.dim;
  DoubleMorphism f;
  f.base_x = jet.y0;
  f.base_y = jet.w0;
  f.f1 = derivative_matrix(jet.chart, m, 1);
  f.f2 = f.f1;
  f.f12 = f.f1;
  f.f12hat = derivative_matrix(jet.chart, m, 2);
  return f;
}

DoubleMorphism second_tangent(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return second_tangent(evaluate_jet(u, x, 2, mode));
}

CovariantTensor covariant_hessian(const SmoothMap& u, const Jet& jet) {
  require_order(jet, 2);
  const int m = jet.domain_chart.dim;
  const Matrix d1 = derivative_matrix(jet.ambient, m, 1);
  Matrix h = u.target().tangent_projector(jet.value) * derivative_matrix(jet.ambient, m, 2);
  const ChristoffelSymbols gam = u.domain().christoffel(jet.domain_chart, jet.y0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        const double g = gam(l, i, j);
        if (g != 0.0) h.col(i * m + j) -= g * d1.col(l);
      }
  return make_tensor(2, jet, std::move(h), domain_metric(u, jet), u.target().ambient_dim());
}

CovariantTensor covariant_hessian(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return covariant_hessian(u, evaluate_jet(u, x, 2, mode));
}

CovariantTensor covariant_hessian_chart(const SmoothMap& u, const Jet& jet) {
  require_order(jet, 2);
  const int m = jet.domain_chart.dim;
  const int n = jet.target_chart.dim;
  const Matrix d1 = derivative_matrix(jet.chart, m, 1);
  Matrix h = derivative_matrix(jet.chart, m, 2);
  const ChristoffelSymbols gm = u.domain().christoffel(jet.domain_chart, jet.y0);
  const ChristoffelSymbols gn = u.target().christoffel(jet.target_chart, jet.w0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int col = i * m + j;
      for (int l = 0; l < m; ++l) h.col(col) -= gm(l, i, j) * d1.col(l);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) h(a, col) += gn(a, b, c) * d1(b, i) * d1(c, j);
    }
  return make_tensor(2, jet, target_chart_jacobian(jet) * h, domain_metric(u, jet), u.target().ambient_dim());
}

CovariantTensor covariant_hessian_chart(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return covariant_hessian_chart(u, evaluate_jet(u, x, 2, mode));
}

CovariantTensor higher_covariant(const SmoothMap& u, const Jet& jet, int k) {
  if (k < 1 || k > kMaxTaylorOrder) throw UnsupportedOrder("higher_covariant: order must be in 1..4");
  require_order(jet, k);
  if (k == 1) return tangent_map(u, jet);
  const int m = jet.domain_chart.dim;
  const int n = jet.target_chart.dim;
  const auto gm = chart_christoffel<Taylor>(jet.domain_chart, jet.y);
  const auto gn = chart_christoffel<Taylor>(jet.target_chart, jet.chart);

  std::vector<Taylor> dw(static_cast<std::size_t>(n) * m);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) dw[a * m + i] = jet.chart[a].partial(i);

  std::vector<Taylor> cur = dw;
  for (int j = 1; j < k; ++j) {
    const int width = ipow(m, j);
    std::vector<Taylor> next(static_cast<std::size_t>(n) * width * m);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < m; ++i)
        for (int idx = 0; idx < width; ++idx) {
          Taylor val = cur[a * width + idx].partial(i);
          for (int s = 0; s < j; ++s) {
            const int w = ipow(m, j - 1 - s);
            const int digit = (idx / w) % m;
            for (int l = 0; l < m; ++l) {
              const Taylor& g = gm[(l * m + i) * m + digit];
              if (is_zero(g)) continue;
              val -= g * cur[a * width + idx + (l - digit) * w];
            }
          }
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
              const Taylor& g = gn[(a * n + b) * n + c];
              if (is_zero(g)) continue;
              val += g * dw[b * m + i] * cur[c * width + idx];
            }
          next[a * width * m + i * width + idx] = std::move(val);
        }
    cur = std::move(next);
  }
  const int width = ipow(m, k);
  Matrix chart(n, width);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < width; ++c) chart(a, c) = cur[a * width + c].value();
  return make_tensor(k, jet, target_chart_jacobian(jet) * chart, domain_metric(u, jet), u.target().ambient_dim());
}

CovariantTensor higher_covariant(const SmoothMap& u, const Vector& x, int k, Differentiation mode) {
  if (k < 1 || k > kMaxTaylorOrder) throw UnsupportedOrder("higher_covariant: order must be in 1..4");
  return higher_covariant(u, evaluate_jet(u, x, k, mode), k);
}

double sasaki_norm_sq(const SmoothMap& u, const Jet& jet) {
  require_order(jet, 2);
  const int m = jet.domain_chart.dim;
  const int n = jet.target_chart.dim;
  const Matrix p = derivative_matrix(jet.chart, m, 1);   // fiber point of T*M x TN
  const Matrix dp = derivative_matrix(jet.chart, m, 2);  // d_i p^a_j at column i*m+j
  const ChristoffelSymbols gm = u.domain().christoffel(jet.domain_chart, jet.y0);
  const ChristoffelSymbols gn = u.target().christoffel(jet.target_chart, jet.w0);
  const MetricTensor gM = domain_metric(u, jet);
  const MetricTensor gN = u.target().metric(jet.target_chart, jet.w0);

  // Tangent vectors of the total space are (V_M, V_N, V_F) with V_F indexed a*m+j.
  const int dim = m + n + n * m;
  // connector K: fiber part plus connection terms of both factors
  Matrix connector = Matrix::Zero(n * m, dim);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) {
      const int row = a * m + j;
      connector(row, m + n + row) = 1.0;
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += gn(a, b, c) * p(c, j);
        connector(row, m + b) += s;
      }
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += gm(l, i, j) * p(a, l);
        connector(row, i) -= s;
      }
    }
  Matrix horizontal = Matrix::Zero(n, dim);
  horizontal.block(0, m, n, n).setIdentity();
  const Matrix fiber_metric = kronecker<double>(gN.matrix(), gM.matrix().inverse());
  const Matrix sasaki = horizontal.transpose() * gN.matrix() * horizontal +
                        connector.transpose() * fiber_metric * connector;

  const Matrix frame = gM.orthonormal_frame();
  double total = 0.0;
  for (int col = 0; col < m; ++col) {
    const Vector e = frame.col(col);
    Vector v(dim);
    v.head(m) = e;
    v.segment(m, n) = p * e;
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += dp(a, i * m + j) * e[i];
        v[m + n + a * m + j] = s;
      }
    total += v.dot(sasaki * v);
  }
  return total;
}

double sasaki_norm_sq(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return sasaki_norm_sq(u, evaluate_jet(u, x, 2, mode));
}

Renormalization hm_renormalize(const SmoothMap& u, const Jet& jet) {
  require_order(jet, 2);
  const int m = jet.domain_chart.dim;
  const int na = u.target().ambient_dim();
  const MetricTensor gM = domain_metric(u, jet);

  // f o Tu as a series: G = dF / sqrt(1 + |dF|^2), |dF|^2 = g^{ij} <d_i F, d_j F>
  const auto gseries = invert_spd(chart_metric<Taylor>(jet.domain_chart, jet.y), m);
  std::vector<Taylor> df(static_cast<std::size_t>(na) * m);
  for (int a = 0; a < na; ++a)
    for (int i = 0; i < m; ++i) df[a * m + i] = jet.ambient[a].partial(i);
  Taylor sq(0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (is_zero(gseries[i * m + j])) continue;
      Taylor dot(0.0);
      for (int a = 0; a < na; ++a) dot += df[a * m + i] * df[a * m + j];
      sq += gseries[i * m + j] * dot;
    }
  const Taylor scale = 1.0 / sqrt(1.0 + sq);

  Matrix renormalized(na, m), d_raw(na, m * m);
  for (int a = 0; a < na; ++a)
    for (int j = 0; j < m; ++j) {
      const Taylor g = df[a * m + j] * scale;
      renormalized(a, j) = g.value();
      for (int i = 0; i < m; ++i) d_raw(a, i * m + j) = g.partial(i).value();
    }
  Matrix deriv = u.target().tangent_projector(jet.value) * d_raw;
  const ChristoffelSymbols gam = u.domain().christoffel(jet.domain_chart, jet.y0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) deriv.col(i * m + j) -= gam(l, i, j) * renormalized.col(l);

  // Orthonormal-frame coordinates: xi~ = dF E, Y~_a = D(f o Tu)[E e_a] E.
  const Matrix e = gM.orthonormal_frame();
  const Matrix d1 = derivative_matrix(jet.ambient, m, 1);
  const Matrix xi = d1 * e;
  const double s = std::sqrt(1.0 + xi.squaredNorm());
  const Eigen::Map<const Vector> xi_vec(xi.data(), xi.size());
  const Matrix resolvent = Matrix::Identity(xi.size(), xi.size()) - xi_vec * xi_vec.transpose() / (s * s);
  const Eigen::PartialPivLU<Matrix> lu(resolvent);

  const Matrix deriv_frame = deriv * frame_power(e, 2);
  Matrix z_frame(na, m * m);
  for (int a = 0; a < m; ++a) {
    Matrix y = deriv_frame.middleCols(a * m, m);
    const Eigen::Map<const Vector> y_vec(y.data(), y.size());
    const Vector z = lu.solve(s * y_vec);
    z_frame.middleCols(a * m, m) = Eigen::Map<const Matrix>(z.data(), na, m);
  }
  const Matrix reconstructed = z_frame * frame_power(e.inverse(), 2);

  Renormalization out;
  out.renormalized = make_tensor(1, jet, std::move(renormalized), gM, na);
  out.derivative = make_tensor(2, jet, std::move(deriv), gM, na);
  out.reconstructed = make_tensor(2, jet, reconstructed, gM, na);
  return out;
}

Renormalization hm_renormalize(const SmoothMap& u, const Vector& x, Differentiation mode) {
  return hm_renormalize(u, evaluate_jet(u, x, 2, mode));
}

}  // namespace cosob
