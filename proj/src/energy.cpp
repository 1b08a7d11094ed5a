#include "cosob/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "cosob/error.hpp"
#include "cosob/jet.hpp"
#include "cosob/multinorms.hpp"
#include "cosob/parallel.hpp"

namespace cosob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void QuadratureSpec::validate() const {
  if (!(r > 0.0)) throw ConfigError("quadrature: r must be positive");
  if (kind == DomainKind::Annulus && !(r_in > 0.0 && r_in < r)) throw ConfigError("quadrature: need 0 < r_in < r");
  if (n_annuli < kRatioWindow - 1) throw ConfigError("quadrature: n_annuli must be at least 4");
  if (radial_nodes < 2 || angular_nodes < 2) throw ConfigError("quadrature: node counts must be at least 2");
  if (threads < 0) throw ConfigError("quadrature: threads must be nonnegative");
}

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Finite:
      return "finite";
    case Classification::Divergent:
      return "divergent";
    case Classification::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Classification parse_classification(const std::string& s) {
  if (s == "finite") return Classification::Finite;
  if (s == "divergent") return Classification::Divergent;
  if (s == "inconclusive") return Classification::Inconclusive;
  throw ConfigError("unknown classification: " + s);
}

bool EnergyReport::infinite() const { return std::isinf(value); }

std::string EnergyReport::to_json() const {
  nlohmann::ordered_json j;
  j["value"] = infinite() ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(value);
  j["classification"] = classification_name(classification);
  j["ratio"] = std::isinf(growth_ratio) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(growth_ratio);
  j["n_annuli"] = n_annuli;
  j["est_error"] = est_error;
  j["annular_sums"] = annular_sums;
  return j.dump();
}

double growth_ratio(const std::vector<double>& sums) {
  const int n = static_cast<int>(sums.size());
  if (n < kRatioWindow) return 0.0;
  const double inner = sums[n - 1], outer = sums[n - kRatioWindow];
  if (inner == 0.0) return 0.0;
  if (outer == 0.0) return kInf;
  return std::pow(inner / outer, 1.0 / (kRatioWindow - 1));
}

Classification classify_ratio(double ratio) {
  if (ratio >= 1.0 + kRatioMargin) return Classification::Divergent;
  if (ratio <= 1.0 - kRatioMargin) return Classification::Finite;
  return Classification::Inconclusive;
}

std::pair<std::vector<double>, std::vector<double>> gauss_gegenbauer(int n, double a) {
  if (n < 1) throw ConfigError("gauss quadrature: n must be positive");
  if (!(a > -1.0)) throw ConfigError("gauss quadrature: weight exponent must exceed -1");
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the symmetric weight
  Matrix jac = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 * i + 2.0 * a;
    const double b = std::sqrt(i * (i + 2.0 * a) / ((s + 1.0) * (s - 1.0)));
    jac(i, i - 1) = jac(i - 1, i) = b;
  }
  const double mass = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    w[i] = mass * v * v;
  }
  // symmetrize to remove eigen-solver noise
  for (int i = 0; i < n / 2; ++i) {
    const double xs = 0.5 * (x[n - 1 - i] - x[i]);
    const double ws = 0.5 * (w[i] + w[n - 1 - i]);
    x[i] = -xs;
    x[n - 1 - i] = xs;
    w[i] = w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) { return gauss_gegenbauer(n, 0.0); }

SphereRule sphere_rule(int dim, int angular_nodes) {
  if (dim < 1) throw ConfigError("sphere_rule: dim must be positive");
  SphereRule rule;
  if (dim == 1) {
    rule.directions = Matrix(1, 2);
    rule.directions << 1.0, -1.0;
    rule.weights = {1.0, 1.0};
    return rule;
  }
  const int na = 2 * angular_nodes;
  const int npolar = dim - 2;
  // polar angle i carries the weight sin^(dim-2-i); with t = cos(theta) this is (1 - t^2)^((dim-3-i)/2)
  std::vector<std::pair<std::vector<double>, std::vector<double>>> polar;
  for (int i = 0; i < npolar; ++i) polar.push_back(gauss_gegenbauer(angular_nodes, 0.5 * (dim - 3 - i)));
  int count = na;
  for (int i = 0; i < npolar; ++i) count *= angular_nodes;
  rule.directions = Matrix(dim, count);
  rule.weights.resize(count);
  std::vector<int> idx(npolar, 0);
  for (int c = 0; c < count; ++c) {
    int rem = c / na;
    const int ia = c % na;
    for (int i = npolar - 1; i >= 0; --i) {
      idx[i] = rem % angular_nodes;
      rem /= angular_nodes;
    }
    double w = 2.0 * std::numbers::pi / na;
    double s = 1.0;  // product of sines so far
    for (int i = 0; i < npolar; ++i) {
      const double t = polar[i].first[idx[i]];
      w *= polar[i].second[idx[i]];
      rule.directions(i, c) = s * t;
      s *= std::sqrt(1.0 - t * t);
    }
    const double phi = 2.0 * std::numbers::pi * ia / na;
    rule.directions(dim - 2, c) = s * std::cos(phi);
    rule.directions(dim - 1, c) = s * std::sin(phi);
    rule.weights[c] = w;
  }
  return rule;
}

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw DomainError("integrand is undefined on part of the domain");
  return v;
}

// Integral over {r_lo < |x| < r_hi} in R^m.
double shell_integral(const PointIntegrand& f, int m, double r_lo, double r_hi, const std::vector<double>& gx,
                      const std::vector<double>& gw, const SphereRule& sphere) {
  std::vector<double> terms;
  terms.reserve(gx.size() * sphere.weights.size());
  const double half = 0.5 * (r_hi - r_lo), mid = 0.5 * (r_hi + r_lo);
  for (std::size_t k = 0; k < gx.size(); ++k) {
    const double rho = mid + half * gx[k];
    const double wr = half * gw[k] * std::pow(rho, m - 1);
    for (std::size_t d = 0; d < sphere.weights.size(); ++d) {
      const Vector x = rho * sphere.directions.col(static_cast<Eigen::Index>(d));
      terms.push_back(wr * sphere.weights[d] * checked(f(x)));
    }
  }
  return pairwise_sum(terms);
}

double surface_integral(const PointIntegrand& f, double radius, int dim, const SphereRule& sphere) {
  std::vector<double> terms;
  terms.reserve(sphere.weights.size());
  const double scale = std::pow(radius, dim - 1);
  for (std::size_t d = 0; d < sphere.weights.size(); ++d) {
    const Vector x = radius * sphere.directions.col(static_cast<Eigen::Index>(d));
    terms.push_back(scale * sphere.weights[d] * checked(f(x)));
  }
  return pairwise_sum(terms);
}

}  // namespace

EnergyReport integrate(const Manifold& domain, const PointIntegrand& f, const QuadratureSpec& spec) {
  spec.validate();
  EnergyReport rep;
  const int coarse_radial = std::max(1, spec.radial_nodes / 2);
  const int coarse_angular = std::max(1, spec.angular_nodes / 2);

  if (spec.kind == DomainKind::Sphere || spec.kind == DomainKind::Circle) {
    const bool circle = spec.kind == DomainKind::Circle;
    if (circle ? domain.kind() != Manifold::Kind::Circle : domain.kind() != Manifold::Kind::Sphere)
      throw ConfigError("quadrature: domain kind does not match the map's domain");
    const int dim = domain.ambient_dim();
    // the circle uses a denser trapezoid rule than the sphere's azimuth
    const int fine_nodes = circle ? 4 * spec.angular_nodes : spec.angular_nodes;
    const int coarse_nodes = circle ? 2 * spec.angular_nodes : coarse_angular;
    double fine = 0.0, coarse = 0.0;
    parallel_for(2, spec.threads, [&](int i) {
      const SphereRule rule = sphere_rule(dim, i == 0 ? fine_nodes : coarse_nodes);
      (i == 0 ? fine : coarse) = surface_integral(f, domain.radius(), dim, rule);
    });
    rep.value = fine;
    rep.annular_sums = {fine};
    rep.growth_ratio = 0.0;
    rep.classification = Classification::Finite;
    rep.est_error = std::abs(fine - coarse);
    rep.n_annuli = 1;
    return rep;
  }

  if (domain.kind() != Manifold::Kind::Euclidean) throw ConfigError("quadrature: balls and annuli need a flat domain");
  const int m = domain.dim();
  const int n = spec.n_annuli;
  std::vector<double> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    if (spec.kind == DomainKind::Ball) {
      hi[i] = std::ldexp(spec.r, -i);
      lo[i] = std::ldexp(spec.r, -(i + 1));
    } else {
      const double width = (spec.r - spec.r_in) / n;
      hi[i] = spec.r - i * width;
      lo[i] = i + 1 == n ? spec.r_in : spec.r - (i + 1) * width;
    }
  }
  const auto [fx, fw] = gauss_legendre(spec.radial_nodes);
  const auto [cx, cw] = gauss_legendre(coarse_radial);
  const SphereRule fine_sphere = sphere_rule(m, spec.angular_nodes);
  const SphereRule coarse_sphere = sphere_rule(m, coarse_angular);
  std::vector<double> fine(n), coarse(n);
  parallel_for(2 * n, spec.threads, [&](int t) {
    const int i = t / 2;
    if (t % 2 == 0)
      fine[i] = shell_integral(f, m, lo[i], hi[i], fx, fw, fine_sphere);
    else
      coarse[i] = shell_integral(f, m, lo[i], hi[i], cx, cw, coarse_sphere);
  });

  rep.annular_sums = fine;
  rep.n_annuli = n;
  const double fine_total = pairwise_sum(fine);
  const double coarse_total = pairwise_sum(coarse);
  if (spec.kind == DomainKind::Annulus) {
    rep.value = fine_total;
    rep.growth_ratio = 0.0;
    rep.classification = Classification::Finite;
    rep.est_error = std::abs(fine_total - coarse_total);
    return rep;
  }
  rep.growth_ratio = growth_ratio(fine);
  rep.classification = classify_ratio(rep.growth_ratio);
  switch (rep.classification) {
    case Classification::Divergent:
      rep.value = kInf;
      rep.est_error = kInf;
      break;
    case Classification::Finite: {
      // geometric tail over the unresolved core
      const double rho = rep.growth_ratio;
      const double tail = fine.back() * rho / (1.0 - rho);
      rep.value = fine_total + tail;
      rep.est_error = std::abs(fine_total - coarse_total) + std::abs(tail);
      break;
    }
    case Classification::Inconclusive:
      rep.value = fine_total;
      rep.est_error = kInf;
      break;
  }
  return rep;
}

bool Sublevel::contains(const Vector& v) const {
  if (v.size() != lo.size() || v.size() != hi.size()) throw ConfigError("sublevel window dimension mismatch");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  return true;
}

double energy_density(const SmoothMap& u, const Vector& x, int j, double q) {
  if (j < 1 || j > kMaxTaylorOrder) throw UnsupportedOrder("energy: order must be in 1..4");
  const Jet jet = evaluate_jet(u, x, j);
  double norm = 0.0;
  if (j == 1)
    norm = tensor_norm(tangent_map(u, jet));
  else if (j == 2)
    norm = tensor_norm(covariant_hessian(u, jet));
  else
    norm = tensor_norm(higher_covariant(u, jet, j));
  return std::pow(norm, q);
}

namespace {

PointIntegrand restrict_to(const SmoothMap& u, PointIntegrand f, const std::optional<Sublevel>& sublevel) {
  if (!sublevel) return f;
  return [&u, f = std::move(f), box = *sublevel](const Vector& x) { return box.contains(u(x)) ? f(x) : 0.0; };
}

}  // namespace

EnergyReport energy(const SmoothMap& u, int j, double q, const QuadratureSpec& spec,
                    const std::optional<Sublevel>& sublevel) {
  if (j < 1 || j > kMaxTaylorOrder) throw UnsupportedOrder("energy: order must be in 1..4");
  if (!(q >= 1.0)) throw ConfigError("energy: exponent must be at least 1");
  PointIntegrand f = [&u, j, q](const Vector& x) { return energy_density(u, x, j, q); };
  return integrate(u.domain(), restrict_to(u, std::move(f), sublevel), spec);
}

std::vector<AnnulusIntegral> annular_profile(const SmoothMap& u, int j, double q, const QuadratureSpec& spec) {
  const EnergyReport rep = energy(u, j, q, spec);
  std::vector<AnnulusIntegral> out;
  for (int i = 0; i < static_cast<int>(rep.annular_sums.size()); ++i) {
    AnnulusIntegral a;
    a.integral = rep.annular_sums[i];
    if (spec.kind == DomainKind::Ball) {
      a.r_hi = std::ldexp(spec.r, -i);
      a.r_lo = std::ldexp(spec.r, -(i + 1));
    } else if (spec.kind == DomainKind::Annulus) {
      const double width = (spec.r - spec.r_in) / spec.n_annuli;
      a.r_hi = spec.r - i * width;
      a.r_lo = spec.r - (i + 1) * width;
    } else {
      a.r_lo = a.r_hi = u.domain().radius();
    }
    out.push_back(a);
  }
  return out;
}

double chainrule_density(const SmoothMap& u, const Vector& x, int k) {
  if (k < 1 || k > 3) throw UnsupportedOrder("chainrule_integral: k must be in 1..3");
  const Jet jet = evaluate_jet(u, x, k);
  const int m = jet.domain_chart.dim;
  std::vector<Matrix> derivs;
  for (int j = 1; j <= k; ++j) derivs.push_back(jet_derivative(jet.ambient, m, j));
  return ktuple_norm_morphism(KTupleMorphism::prolongation(k, derivs));
}

EnergyReport chainrule_integral(const SmoothMap& u, int k, const QuadratureSpec& spec,
                                const std::optional<Sublevel>& sublevel) {
  if (k < 1 || k > 3) throw UnsupportedOrder("chainrule_integral: k must be in 1..3");
  PointIntegrand f = [&u, k](const Vector& x) { return chainrule_density(u, x, k); };
  return integrate(u.domain(), restrict_to(u, std::move(f), sublevel), spec);
}

namespace {

double radical_inverse(int index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};

std::vector<Vector> oscillation_samples(const Manifold& domain, const QuadratureSpec& spec, int samples) {
  std::vector<Vector> pts;
  const int dim = domain.ambient_dim();
  const bool ball = spec.kind == DomainKind::Ball || spec.kind == DomainKind::Annulus;
  const double outer = ball ? spec.r : 1.0;
  const double inner = spec.kind == DomainKind::Ball ? std::ldexp(spec.r, -spec.n_annuli)
                       : spec.kind == DomainKind::Annulus ? spec.r_in
                                                          : 1e-3;
  for (int i = 1; static_cast<int>(pts.size()) < 2 * samples && i < 1000 * samples; ++i) {
    Vector x(dim);
    if (spec.kind == DomainKind::Circle) {
      const double t = 2.0 * std::numbers::pi * radical_inverse(i, 2);
      x << std::cos(t), std::sin(t);
    } else {
      for (int d = 0; d < dim; ++d) x[d] = outer * (2.0 * radical_inverse(i, kPrimes[d]) - 1.0);
      const double nrm = x.norm();
      if (nrm > outer || nrm < inner) continue;
      if (!ball) x /= nrm;
    }
    if (!ball) x *= domain.radius();
    pts.push_back(x);
    pts.push_back(-x);
  }
  return pts;
}

}  // namespace

double oscillation(const SmoothMap& u, const QuadratureSpec& spec, int samples) {
  spec.validate();
  if (samples < 1) throw ConfigError("oscillation: samples must be positive");
  if (u.domain().ambient_dim() > static_cast<int>(std::size(kPrimes))) throw ConfigError("oscillation: dimension too large");
  const auto pts = oscillation_samples(u.domain(), spec, samples);
  std::vector<Vector> images(pts.size());
  parallel_for(static_cast<int>(pts.size()), spec.threads,
               [&](int i) { images[i] = u.target().project(u(pts[i])); });
  std::vector<double> best(images.size(), 0.0);
  parallel_for(static_cast<int>(images.size()), spec.threads, [&](int i) {
    for (std::size_t j = i + 1; j < images.size(); ++j)
      best[i] = std::max(best[i], u.target().distance(images[i], images[j]));
  });
  double osc = 0.0;
  for (double b : best) osc = std::max(osc, b);
  return osc;
}

std::string gn_status_name(GnStatus s) {
  switch (s) {
    case GnStatus::Finite:
      return "finite";
    case GnStatus::Infinite:
      return "infinite";
    case GnStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

GnRatio gn_ratio(const SmoothMap& u, int k, int j, double p, const QuadratureSpec& spec, int osc_samples) {
  if (!(1 <= j && j < k)) throw ConfigError("gn_ratio: requires 1 <= j < k");
  if (!(p >= 1.0)) throw ConfigError("gn_ratio: p must be at least 1");
  GnRatio g;
  g.lhs_energy = energy(u, j, k * p / j, spec);
  g.rhs_energy = energy(u, k, p, spec);
  g.osc = oscillation(u, spec, osc_samples);
  const double osc_exp = (k - j) * p / j;
  g.lhs = g.lhs_energy.value;
  g.rhs = g.osc == 0.0 ? 0.0 : std::pow(g.osc, osc_exp) * g.rhs_energy.value;
  const auto cl = g.lhs_energy.classification, cr = g.rhs_energy.classification;
  if (cl == Classification::Inconclusive || cr == Classification::Inconclusive) {
    g.status = GnStatus::Inconclusive;
  } else if (cl == Classification::Divergent) {
    g.status = cr == Classification::Divergent ? GnStatus::Inconclusive : GnStatus::Infinite;
  } else if (cr == Classification::Divergent) {
    g.status = GnStatus::Finite;
    g.ratio = 0.0;
  } else if (g.rhs <= 1e-9 * std::max(1.0, g.lhs)) {
    g.status = g.lhs <= 1e-9 ? GnStatus::Inconclusive : GnStatus::Infinite;
  } else {
    g.status = GnStatus::Finite;
    g.ratio = g.lhs / g.rhs;
  }
  if (g.status == GnStatus::Infinite) g.ratio = kInf;
  if (g.status == GnStatus::Inconclusive) g.ratio = std::numeric_limits<double>::quiet_NaN();
  return g;
}

}  // namespace cosob
