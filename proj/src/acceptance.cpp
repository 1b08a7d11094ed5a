#include "cosob/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "cosob/embedding.hpp"
#include "cosob/error.hpp"
#include "cosob/gallery.hpp"
#include "cosob/jet.hpp"
#include "cosob/multinorms.hpp"
#include "cosob/parallel.hpp"
#include "cosob/sampling.hpp"

namespace cosob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

ExampleFamily family(FamilyId id, double alpha, int m, double beta = 1.0, double ell = 1.0) {
  ExampleFamily f;
  f.id = id;
  f.alpha = alpha;
  f.beta = beta;
  f.ell = ell;
  f.m = m;
  return f;
}

QuadratureSpec ball_spec(double r, int threads) {
  QuadratureSpec q;
  q.kind = DomainKind::Ball;
  q.r = r;
  q.n_annuli = 12;
  q.threads = threads;
  return q;
}

QuadratureSpec circle_spec(int threads) {
  QuadratureSpec q;
  q.kind = DomainKind::Circle;
  q.threads = threads;
  return q;
}

/// Uniform point of the ball shell a <= |x| <= b in R^m.
Vector shell_point(Rng& rng, int m, double a, double b) { return rng.uniform(a, b) * rng.unit_vector(m); }

/// Per-sample worst values, reduced in index order.
double max_of(const std::vector<double>& v) {
  double w = 0.0;
  for (double x : v) w = std::max(w, x);
  return w;
}

int count_if_over(const std::vector<double>& v, double tol) {
  int n = 0;
  for (double x : v) n += x > tol;
  return n;
}

// Sample list of (map, point) pairs drawn before any parallel work.
struct Sample {
  std::shared_ptr<const SmoothMap> map;
  Vector x;
};

std::vector<Sample> sphere_and_flat_samples(std::uint64_t seed, int sphere_count, int flat_count) {
  Rng rng(seed);
  std::vector<Sample> out;
  for (int i = 0; i < sphere_count; ++i) {
    auto u = std::make_shared<const SmoothMap>(random_sphere_map(rng));
    out.push_back({u, random_sphere_point(rng, 2)});
  }
  for (int i = 0; i < flat_count; ++i) {
    const int m = rng.uniform_int(1, 4), n = rng.uniform_int(1, 4);
    auto u = std::make_shared<const SmoothMap>(random_flat_map(rng, m, n));
    out.push_back({u, rng.normal_vector(m)});
  }
  return out;
}

// Criterion 1: Sasaki split of |T^2 u|^2 against |Tu|^2 + |D_K Tu|^2.
CriterionResult sasaki_identity(const AcceptanceOptions& opts) {
  CriterionResult r{1, "sasaki identity", "|T^2u|^2_S = |Tu|^2 + |D_K Tu|^2 on 100 sphere + 100 flat maps", "",
                    "1e-9 analytic, 1e-6 finite differences", false, 0.0, 5000.0};
  const auto samples = sphere_and_flat_samples(101, 100, 100);
  const int n = static_cast<int>(samples.size());
  std::vector<double> err_a(n), err_fd(n);
  parallel_for(n, opts.threads, [&](int i) {
    const auto& s = samples[i];
    for (auto mode : {Differentiation::Analytic, Differentiation::FiniteDifference}) {
      const Jet jet = evaluate_jet(*s.map, s.x, 2, mode);
      const double t = tensor_norm(tangent_map(*s.map, jet));
      const double h = tensor_norm(covariant_hessian(*s.map, jet));
      const double e = std::abs(sasaki_norm_sq(*s.map, jet) - (t * t + h * h));
      (mode == Differentiation::Analytic ? err_a : err_fd)[i] = e;
    }
  });
  const int bad = count_if_over(err_a, 1e-9) + count_if_over(err_fd, 1e-6);
  r.observed = "max error analytic " + num(max_of(err_a)) + ", fd " + num(max_of(err_fd)) + "; violations " +
               std::to_string(bad);
  r.pass = bad == 0;
  return r;
}

// Criterion 2: chart Christoffel Hessian against the ambient Gauss-formula Hessian.
CriterionResult dual_realization(const AcceptanceOptions& opts) {
  CriterionResult r{2, "dual covariant realization", "chart and ambient D_K(Tu) agree on 100 sphere maps", "",
                    "1e-6 finite differences", false, 0.0, 5000.0};
  const auto samples = sphere_and_flat_samples(202, 100, 0);
  const int n = static_cast<int>(samples.size());
  std::vector<double> err(n);
  parallel_for(n, opts.threads, [&](int i) {
    const auto& s = samples[i];
    const Jet jet = evaluate_jet(*s.map, s.x, 2, Differentiation::FiniteDifference);
    err[i] = (covariant_hessian(*s.map, jet).components - covariant_hessian_chart(*s.map, jet).components)
                 .cwiseAbs()
                 .maxCoeff();
  });
  const int bad = count_if_over(err, 1e-6);
  r.observed = "max difference " + num(max_of(err)) + "; violations " + std::to_string(bad);
  r.pass = bad == 0;
  return r;
}

// Criterion 3: geodesic winding has vanishing covariant Hessian and energy 2 pi ell^2.
CriterionResult geodesic_annihilation(const AcceptanceOptions& opts) {
  CriterionResult r{3, "geodesic annihilation", "max |D^2_K u| <= 1e-8 on 10^4 points; energy = 18 pi", "",
                    "1e-8 pointwise, 1e-6 energy", false, 0.0, 2000.0};
  const SmoothMap u = make_example(family(FamilyId::GeodesicWind, 1.0, 1, 1.0, 3.0));
  constexpr int kPoints = 10000;
  std::vector<double> h(kPoints);
  parallel_for(kPoints, opts.threads, [&](int i) {
    const double t = 2.0 * std::numbers::pi * (i + 0.5) / kPoints;
    Vector x(2);
    x << std::cos(t), std::sin(t);
    h[i] = tensor_norm(covariant_hessian(u, x));
  });
  const EnergyReport e = energy(u, 1, 2.0, circle_spec(opts.threads));
  const double exact = 2.0 * std::numbers::pi * 9.0;
  const double hmax = max_of(h);
  r.observed = "max |D^2_K u| " + num(hmax) + "; energy " + num(e.value) + " (normalized " +
               num(e.value / (2.0 * std::numbers::pi)) + ")";
  r.pass = hmax <= 1e-8 && std::abs(e.value - exact) <= 1e-6;
  return r;
}

// Criterion 4: geodesic_radial(alpha=2) on B^5 has finite D^2 energy and divergent Tu energy.
CriterionResult strict_inclusion(const AcceptanceOptions& opts) {
  CriterionResult r{4, "strict inclusion", "int |D^2_K u| finite, int |Tu|^2 divergent on B^5", "",
                    "ratio margin 0.05, 12 annuli", false, 0.0, 10000.0};
  const SmoothMap u = make_example(family(FamilyId::GeodesicRadial, 2.0, 5));
  const QuadratureSpec q = ball_spec(1.0, opts.threads);
  const EnergyReport d2 = energy(u, 2, 1.0, q);
  const EnergyReport d1 = energy(u, 1, 2.0, q);
  r.observed = "D^2: " + classification_name(d2.classification) + " (ratio " + num(d2.growth_ratio) +
               "); Tu: " + classification_name(d1.classification) + " (ratio " + num(d1.growth_ratio) + ")";
  r.pass = d2.classification == Classification::Finite && d1.classification == Classification::Divergent;
  return r;
}

// Criterion 5: the spiral fails the second-order chain-rule integrability condition.
CriterionResult chain_rule_failure(const AcceptanceOptions& opts) {
  CriterionResult r{5, "chain-rule failure", "spiral k=2 chain-rule integral divergent; |Tu| = a|x|^(-a-1)", "",
                    "ratio margin 0.05; 1e-12 relative", false, 0.0, 10000.0};
  const double alpha = 1.5;
  const SmoothMap u = make_example(family(FamilyId::Spiral, alpha, 3));
  Sublevel circle{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)};
  const EnergyReport c = chainrule_integral(u, 2, ball_spec(1.0, opts.threads), circle);

  Rng rng(505);
  constexpr int kPoints = 1000;
  std::vector<Vector> pts(kPoints);
  for (auto& p : pts) p = shell_point(rng, 3, 0.05, 1.0);
  std::vector<double> rel(kPoints);
  parallel_for(kPoints, opts.threads, [&](int i) {
    const double expect = alpha * std::pow(pts[i].norm(), -alpha - 1.0);
    rel[i] = std::abs(tensor_norm(tangent_map(u, pts[i], Differentiation::Analytic)) - expect) / expect;
  });
  r.observed = "chain-rule " + classification_name(c.classification) + " (ratio " + num(c.growth_ratio) +
               "); max relative |Tu| error " + num(max_of(rel));
  r.pass = c.classification == Classification::Divergent && max_of(rel) <= 1e-12;
  return r;
}

// Criterion 6: the oscillating power has |Du|^3 non-integrable on its [-1, 1] sublevel set.
CriterionResult third_order_example(const AcceptanceOptions& opts) {
  CriterionResult r{6, "third-order example",
                    "int over u^-1([-1,1]) of |Du|^3 divergent; |Du| >= 0.9 (b-a)|x|^(b-a-1) for |x| <= 1/8", "",
                    "ratio margin 0.05", false, 0.0, 10000.0};
  const double alpha = 1.0, beta = 1.2, delta = 0.125, gamma = 0.9;
  const SmoothMap u = make_example(family(FamilyId::OscPower, alpha, 2, beta));
  Sublevel unit{Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
  const EnergyReport e = energy(u, 1, 3.0, ball_spec(delta, opts.threads), unit);

  Rng rng(606);
  constexpr int kPoints = 1000;
  std::vector<Vector> pts(kPoints);
  for (auto& p : pts) p = shell_point(rng, 2, 1e-4, delta);
  std::vector<double> ratio(kPoints, kInf);
  parallel_for(kPoints, opts.threads, [&](int i) {
    if (!unit.contains(u(pts[i]))) return;
    const double rr = pts[i].norm();
    ratio[i] = tensor_norm(tangent_map(u, pts[i])) / ((beta - alpha) * std::pow(rr, beta - alpha - 1.0));
  });
  double worst = kInf;
  for (double v : ratio) worst = std::min(worst, v);
  r.observed = "|Du|^3 " + classification_name(e.classification) + " (ratio " + num(e.growth_ratio) +
               "); min |Du| / ((b-a)|x|^(b-a-1)) " + num(worst);
  r.pass = e.classification == Classification::Divergent && worst >= gamma;
  return r;
}

// Criterion 7: submultiplicativity of the canonical double norm with constant 1.
CriterionResult submultiplicativity(const AcceptanceOptions&) {
  CriterionResult r{7, "submultiplicativity", "|h o f| <= |h| |f| on 1000 random pairs, dims <= 4", "", "1e-12",
                    false, 0.0, 1000.0};
  const NormComposeSummary s = norm_compose_check(1000, 707);
  r.observed = "max |h o f| / (|h||f|) " + num(s.worst_ratio) + "; violations " + std::to_string(s.violations);
  r.pass = s.violations == 0;
  return r;
}

// Criterion 8: the degenerate triple vector has zero canonical norm.
CriterionResult degenerate_triple(const AcceptanceOptions&) {
  CriterionResult r{8, "degenerate k-tuple vector", "norm of (x,0,0,0,e,e,e,0) = 0 for 100 random e", "", "exact",
                    false, 0.0, 100.0};
  Rng rng(808);
  int nonzero = 0;
  for (int i = 0; i < 100; ++i) {
    const int m = rng.uniform_int(1, 4);
    const Vector e = rng.normal_vector(m), z = Vector::Zero(m);
    const auto v = KTupleVector::from_list(3, rng.normal_vector(m), {z, z, z, e, e, e, z});
    nonzero += ktuple_norm_vector(v) != 0.0;
  }
  r.observed = "nonzero norms " + std::to_string(nonzero);
  r.pass = nonzero == 0;
  return r;
}

// Set partitions counted by brute force: canonical labelings of all maps {1..k} -> {1..k}.
long long brute_force_partition_count(int k) {
  std::set<std::vector<int>> seen;
  std::vector<int> label(k, 0);
  while (true) {
    std::vector<int> relabel(k, -1), canon(k);
    int next = 0;
    for (int i = 0; i < k; ++i) {
      if (relabel[label[i]] < 0) relabel[label[i]] = next++;
      canon[i] = relabel[label[i]];
    }
    seen.insert(canon);
    int i = 0;
    while (i < k && ++label[i] == k) label[i++] = 0;
    if (i == k) break;
  }
  return static_cast<long long>(seen.size());
}

// Criterion 9: partition enumeration against brute-force counts.
CriterionResult partition_oracle(const AcceptanceOptions&) {
  CriterionResult r{9, "partition oracle", "counts 1, 2, 5, 15, 52 for k = 1..5", "", "exact", false, 0.0, 100.0};
  const long long bell[] = {1, 2, 5, 15, 52};
  std::string counts;
  bool ok = true;
  for (int k = 1; k <= 5; ++k) {
    const long long c = static_cast<long long>(enumerate_partitions(k).size());
    ok = ok && c == brute_force_partition_count(k) && c == bell[k - 1];
    counts += (k > 1 ? ", " : "") + std::to_string(c);
  }
  r.observed = "counts " + counts;
  r.pass = ok;
  return r;
}

// Criterion 10: helical embedding isometry, Pythagoras split and bound constant.
CriterionResult helical_embedding(const AcceptanceOptions& opts) {
  CriterionResult r{10, "helical embedding", "isometry residual, extrinsic split on 100 samples, C = 1/(g mu^2)", "",
                    "1e-10 isometry, 1e-7 split, 1e-6 constant", false, 0.0, 2000.0};
  const HelixParams hp{0.8, 0.6, 1.0};
  const IsometricEmbedding h1 = helical_embed(1, hp.lambda, hp.gamma, hp.mu);
  const IsometricEmbedding h3 = helical_embed(3, hp.lambda, hp.gamma, hp.mu);
  Rng rng(1010);
  double iso = 0.0;
  for (int i = 0; i < 20; ++i) {
    Vector t(3);
    for (int c = 0; c < 3; ++c) t[c] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    iso = std::max(iso, isometry_residual(h3, t, Differentiation::FiniteDifference));
  }
  const IsometricEmbedding iota = compose(h3, inclusion(Manifold::sphere(2, 1.0)));
  const auto samples = sphere_and_flat_samples(1011, 100, 0);
  std::vector<double> split(samples.size());
  parallel_for(static_cast<int>(samples.size()), opts.threads, [&](int i) {
    const ExtrinsicSplit e = extrinsic_split(*samples[i].map, iota, samples[i].x);
    split[i] = std::abs(e.lhs - e.rhs());
  });
  Vector t0(1);
  t0 << 0.3;
  Rng crng(1012);
  const double c = sampled_bound_constant(h1, t0, 16, crng);
  const double c_exact = 1.0 / (hp.gamma * hp.mu * hp.mu);
  r.observed = "isometry " + num(iso) + "; max split residual " + num(max_of(split)) + "; C " + num(c);
  r.pass = iso <= 1e-10 && max_of(split) <= 1e-7 && std::abs(c - c_exact) <= 1e-6 &&
           std::abs(c_exact - 1.6667) <= 1e-4;
  return r;
}

// Kato-type check: |grad |T|| <= |D T| where T = D^(k-1)_K u and the gradient uses central differences.
struct KatoCheck {
  double gradient = 0.0;
  double bound = 0.0;
};

double covariant_norm(const SmoothMap& u, const Vector& x, int k) {
  return tensor_norm(higher_covariant(u, x, k));
}

KatoCheck kato(const SmoothMap& u, const Vector& x, int k, double scale) {
  const Manifold& M = u.domain();
  const Chart chart = M.chart_at(x);
  const Vector y0 = M.to_chart(chart, x);
  const MetricTensor g = M.metric(chart, y0);
  const double h = 1e-4 * scale;
  Vector d(chart.dim);
  for (int i = 0; i < chart.dim; ++i) {
    Vector yp = y0, ym = y0;
    yp[i] += h;
    ym[i] -= h;
    d[i] = (covariant_norm(u, M.to_ambient(chart, yp), k - 1) - covariant_norm(u, M.to_ambient(chart, ym), k - 1)) /
           (2.0 * h);
  }
  KatoCheck out;
  out.gradient = std::sqrt(std::max(0.0, d.dot(g.matrix().ldlt().solve(d))));
  out.bound = covariant_norm(u, x, k);
  return out;
}

struct GalleryPoint {
  const SmoothMap* map;
  Vector x;
  double scale;
};

std::vector<GalleryPoint> gallery_points(const std::vector<SmoothMap>& maps, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GalleryPoint> out;
  for (int i = 0; i < count; ++i) {
    const SmoothMap& u = maps[static_cast<std::size_t>(i) % maps.size()];
    if (u.domain().kind() == Manifold::Kind::Circle) {
      out.push_back({&u, rng.unit_vector(2), 1.0});
    } else {
      const Vector x = shell_point(rng, u.domain().dim(), 0.25, 1.0);
      out.push_back({&u, x, x.norm()});
    }
  }
  return out;
}

std::vector<SmoothMap> kato_gallery() {
  return {make_example(family(FamilyId::Spiral, 1.5, 3)),
          make_example(family(FamilyId::RadialPower, 2.0, 5)),
          make_example(family(FamilyId::Hedgehog, 1.0, 3)),
          make_example(family(FamilyId::MollifiedSpiral, 1.5, 4, 1.0, 3.0)),
          make_example(family(FamilyId::OscPower, 1.0, 2, 1.2)),
          make_example(family(FamilyId::GeodesicWind, 1.0, 1, 1.0, 3.0)),
          make_example(family(FamilyId::GeodesicRadial, 2.0, 5))};
}

// Criterion 11: Kato inequality on the gallery, first and third order.
CriterionResult kato_inequality(const AcceptanceOptions& opts) {
  CriterionResult r{11, "Kato inequality", "|grad|Tu|| <= |D_K Tu| (10^4), |grad|D^2u|| <= |D^3u| (10^3)", "",
                    "1e-4 absolute", false, 0.0, 10000.0};
  const auto maps = kato_gallery();
  int bad = 0;
  double worst = -kInf;
  for (auto [k, count, seed] : {std::tuple{2, 10000, 1111ULL}, std::tuple{3, 1000, 1112ULL}}) {
    const auto pts = gallery_points(maps, count, seed);
    std::vector<double> excess(pts.size());
    parallel_for(static_cast<int>(pts.size()), opts.threads, [&](int i) {
      const KatoCheck c = kato(*pts[i].map, pts[i].x, k, pts[i].scale);
      excess[i] = c.gradient - c.bound;
    });
    for (double e : excess) {
      worst = std::max(worst, e);
      bad += e > 1e-4;
    }
  }
  r.observed = "max excess " + num(worst) + "; violations " + std::to_string(bad);
  r.pass = bad == 0;
  return r;
}

// Criterion 12: reconstruction of D_K(Tu) from the renormalized tangent map.
CriterionResult hm_round_trip(const AcceptanceOptions& opts) {
  CriterionResult r{12, "renormalization round trip", "reconstructed D_K(Tu) = covariant_hessian on 100 samples",
                    "", "1e-7", false, 0.0, 2000.0};
  auto samples = sphere_and_flat_samples(1212, 60, 20);
  {
    const SmoothMap spiral = make_example(family(FamilyId::Spiral, 1.5, 3));
    auto shared = std::make_shared<const SmoothMap>(spiral);
    Rng rng(1213);
    for (int i = 0; i < 20; ++i) samples.push_back({shared, shell_point(rng, 3, 0.25, 1.0)});
  }
  std::vector<double> err(samples.size());
  parallel_for(static_cast<int>(samples.size()), opts.threads, [&](int i) {
    const Jet jet = evaluate_jet(*samples[i].map, samples[i].x, 2, Differentiation::FiniteDifference);
    const Renormalization rn = hm_renormalize(*samples[i].map, jet);
    const CovariantTensor h = covariant_hessian(*samples[i].map, jet);
    err[i] = (rn.reconstructed.components - h.components).cwiseAbs().maxCoeff();
  });
  const int bad = count_if_over(err, 1e-7);
  r.observed = "max difference " + num(max_of(err)) + "; violations " + std::to_string(bad);
  r.pass = bad == 0;
  return r;
}

struct FlatPoly {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {x[0] * x[0] - x[1], x[0] * x[1] + x[1] * x[1] * x[1]};
  }
};

struct Constant {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    return {S(0.0) * x[0] + 0.5, S(0.0) * x[1] - 0.25};
  }
};

// Criterion 13: the GN ratio table.
CriterionResult gn_criterion(const AcceptanceOptions& opts, std::vector<GnRow>* table) {
  CriterionResult r{13, "GN ratio table", "ratio inf for both counterexamples, finite for smooth flat maps", "",
                    "status by ratio test", false, 0.0, 0.0};
  std::vector<GnRow> rows = gn_table(opts.threads);
  std::string obs;
  bool ok = true;
  for (const auto& row : rows) {
    ok = ok && row.pass;
    obs += (obs.empty() ? "" : "; ") + row.label + " " + gn_status_name(row.result.status);
  }
  r.observed = obs;
  r.pass = ok;
  if (table) *table = std::move(rows);
  return r;
}

std::string criterion_json(const CriterionResult& c, bool timing) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["name"] = c.name;
  j["expected"] = c.expected;
  j["observed"] = c.observed;
  j["tolerance"] = c.tolerance;
  j["verdict"] = c.pass ? "PASS" : "FAIL";
  if (timing) j["runtime_ms"] = c.runtime_ms;
  return j.dump();
}

nlohmann::ordered_json gn_json(const std::vector<GnRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["label"] = row.label;
    j["family"] = row.family;
    j["params"] = row.params;
    j["k"] = row.k;
    j["j"] = row.j;
    j["p"] = row.p;
    j["lhs"] = num(row.result.lhs);
    j["rhs"] = num(row.result.rhs);
    j["osc"] = num(row.result.osc);
    j["ratio"] = num(row.result.ratio);
    j["status"] = gn_status_name(row.result.status);
    j["expected"] = gn_status_name(row.expected);
    j["verdict"] = row.pass ? "PASS" : "FAIL";
    arr.push_back(j);
  }
  return arr;
}

DoubleMorphism random_double(Rng& rng, int m, int n) {
  DoubleMorphism f;
  f.base_x = rng.normal_vector(m);
  f.base_y = rng.normal_vector(n);
  f.f1 = rng.normal_matrix(n, m);
  f.f2 = rng.normal_matrix(n, m);
  f.f12 = rng.normal_matrix(n, m);
  f.f12hat = rng.normal_matrix(n, m * m);
  return f;
}

}  // namespace

NormComposeSummary norm_compose_check(int pairs, std::uint64_t seed) {
  if (pairs < 1) throw ConfigError("norm_compose_check: pairs must be positive");
  Rng rng(seed);
  NormComposeSummary s;
  s.pairs = pairs;
  for (int i = 0; i < pairs; ++i) {
    const int m = rng.uniform_int(1, 4), n = rng.uniform_int(1, 4), p = rng.uniform_int(1, 4);
    const DoubleMorphism f = random_double(rng, m, n), h = random_double(rng, n, p);
    const double lhs = double_norm_morphism(compose_double(h, f));
    const double rhs = double_norm_morphism(h) * double_norm_morphism(f);
    s.worst_ratio = std::max(s.worst_ratio, lhs / rhs);
    s.violations += lhs > rhs + 1e-12;
  }
  return s;
}

std::vector<GnRow> gn_table(int threads) {
  struct Entry {
    std::string label, family, params;
    SmoothMap map;
    QuadratureSpec spec;
    int k, j;
    double p;
    GnStatus expected;
  };
  const QuadratureSpec ball2 = ball_spec(1.0, threads), ball3 = ball_spec(1.0, threads);
  Rng rng(1313);
  std::vector<Entry> entries;
  entries.push_back({"geodesic winding", "geodesic_wind", "ell=3",
                     make_example(family(FamilyId::GeodesicWind, 1.0, 1, 1.0, 3.0)), circle_spec(threads), 2, 1, 1.0,
                     GnStatus::Infinite});
  entries.push_back({"geodesic radial", "geodesic_radial", "alpha=2;m=5",
                     make_example(family(FamilyId::GeodesicRadial, 2.0, 5)), ball_spec(1.0, threads), 2, 1, 1.0,
                     GnStatus::Infinite});
  entries.push_back({"flat polynomial", "flat_polynomial", "m=2",
                     SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), FlatPoly{}), ball2, 2, 1,
                     1.0, GnStatus::Finite});
  entries.push_back({"flat trigonometric", "flat_trig_affine", "m=3;seed=1313", random_flat_map(rng, 3, 2), ball3, 3,
                     2, 1.0, GnStatus::Finite});
  entries.push_back({"constant", "constant", "m=2",
                     SmoothMap::from_formula(Manifold::euclidean(2), Manifold::euclidean(2), Constant{}), ball2, 2, 1,
                     1.0, GnStatus::Inconclusive});
  std::vector<GnRow> rows;
  for (const auto& e : entries) {
    GnRow row;
    row.label = e.label;
    row.family = e.family;
    row.params = e.params;
    row.k = e.k;
    row.j = e.j;
    row.p = e.p;
    row.result = gn_ratio(e.map, e.k, e.j, e.p, e.spec);
    row.expected = e.expected;
    row.pass = row.result.status == e.expected;
    rows.push_back(std::move(row));
  }
  return rows;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts, std::vector<GnRow>* table) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = sasaki_identity(opts); break;
    case 2: r = dual_realization(opts); break;
    case 3: r = geodesic_annihilation(opts); break;
    case 4: r = strict_inclusion(opts); break;
    case 5: r = chain_rule_failure(opts); break;
    case 6: r = third_order_example(opts); break;
    case 7: r = submultiplicativity(opts); break;
    case 8: r = degenerate_triple(opts); break;
    case 9: r = partition_oracle(opts); break;
    case 10: r = helical_embedding(opts); break;
    case 11: r = kato_inequality(opts); break;
    case 12: r = hm_round_trip(opts); break;
    case 13: r = gn_criterion(opts, table); break;
    default: throw ConfigError("run_criterion: id must be in 1..13");
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

namespace {

std::string serialize_body(const std::vector<CriterionResult>& criteria, const std::vector<GnRow>& gn) {
  std::string s;
  for (const auto& c : criteria) s += criterion_json(c, false) + "\n";
  return s + gn_json(gn).dump() + "\n";
}

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
  using Clock = std::chrono::steady_clock;
  AcceptanceReport rep;
  for (int id = 1; id <= 13; ++id) rep.criteria.push_back(run_criterion(id, opts, &rep.gn_table));

  const auto start = Clock::now();
  const int first = resolve_threads(opts.threads);
  AcceptanceOptions rerun = opts;
  rerun.threads = opts.rerun_threads > 0 ? opts.rerun_threads : (first == 1 ? 2 : 1);
  std::vector<CriterionResult> again;
  std::vector<GnRow> gn_again;
  for (int id = 1; id <= 13; ++id) again.push_back(run_criterion(id, rerun, &gn_again));
  const std::string a = serialize_body(rep.criteria, rep.gn_table), b = serialize_body(again, gn_again);
  CriterionResult det{14, "determinism", "byte-identical reports for thread counts " + std::to_string(first) + " and " +
                                             std::to_string(rerun.threads),
                      "", "exact", a == b, 0.0, 0.0};
  if (a == b) {
    det.observed = "identical (" + std::to_string(a.size()) + " bytes)";
  } else {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    det.observed = "reports differ at byte " + std::to_string(i);
  }
  det.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  rep.criteria.push_back(det);
  return rep;
}

bool AcceptanceReport::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return !criteria.empty();
}

std::string AcceptanceReport::to_text(bool timing) const {
  std::ostringstream os;
  for (const auto& c : criteria) {
    char head[64];
    std::snprintf(head, sizeof head, "[%02d] %-4s ", c.id, c.pass ? "PASS" : "FAIL");
    os << head << c.name << "\n"
       << "     expected:  " << c.expected << "\n"
       << "     observed:  " << c.observed << "\n"
       << "     tolerance: " << c.tolerance << "\n";
    if (timing) os << "     runtime:   " << num(c.runtime_ms) << " ms\n";
  }
  os << "\nGN ratio table (lhs = int |D^j u|^(kp/j), rhs = osc^((k-j)p/j) int |D^k u|^p)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-14s %2s %2s %4s %-16s %-16s %-16s %-13s %s\n", "row", "params", "k", "j",
                "p", "lhs", "rhs", "ratio", "status", "verdict");
  os << line;
  for (const auto& g : gn_table) {
    std::snprintf(line, sizeof line, "%-20s %-14s %2d %2d %4s %-16s %-16s %-16s %-13s %s\n", g.label.c_str(),
                  g.params.c_str(), g.k, g.j, num(g.p).c_str(), num(g.result.lhs).c_str(), num(g.result.rhs).c_str(),
                  num(g.result.ratio).c_str(), gn_status_name(g.result.status).c_str(), g.pass ? "PASS" : "FAIL");
    os << line;
  }
  int passed = 0;
  for (const auto& c : criteria) passed += c.pass;
  os << "\n" << passed << "/" << criteria.size() << " criteria passed\n";
  return os.str();
}

std::string AcceptanceReport::to_json(bool timing) const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : criteria) arr.push_back(nlohmann::ordered_json::parse(criterion_json(c, timing)));
  j["criteria"] = arr;
  j["gn_table"] = gn_json(gn_table);
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

}  // namespace cosob
