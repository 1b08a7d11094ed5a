#pragma once

// Quadrature of pointwise energies over balls, annuli, spheres and circles.
//
// Balls are split into dyadic annuli r 2^-(i+1) < |x| < r 2^-i toward the
// origin, where the gallery maps are singular. Each annulus uses
// Gauss-Legendre in the radius and a product rule on the unit sphere
// (Gauss-Gegenbauer in the cosines of polar angles, trapezoid in azimuth). Measures are
// unnormalized Riemannian volumes (the unit circle has mass 2 pi).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosob/manifold.hpp"
#include "cosob/smooth_map.hpp"

namespace cosob {

enum class DomainKind { Ball, Annulus, Sphere, Circle };

struct QuadratureSpec {
  DomainKind kind = DomainKind::Ball;
  double r = 1.0;     // outer radius (ball, annulus)
  double r_in = 0.0;  // inner radius (annulus)
  int n_annuli = 12;
  int radial_nodes = 6;
  int angular_nodes = 6;
  int threads = 0;  // 0: resolve_threads()

  /// Throws ConfigError unless r > 0, n_annuli >= 4 and node counts >= 2.
  void validate() const;
};

enum class Classification { Finite, Divergent, Inconclusive };
std::string classification_name(Classification c);
Classification parse_classification(const std::string& s);

/// Margin of the annular ratio test.
inline constexpr double kRatioMargin = 0.05;
/// Number of innermost annuli entering the growth ratio.
inline constexpr int kRatioWindow = 5;

struct EnergyReport {
  double value = 0.0;  // +infinity when divergent
  std::vector<double> annular_sums;  // outermost first
  double growth_ratio = 0.0;
  Classification classification = Classification::Finite;
  double est_error = 0.0;
  int n_annuli = 0;

  bool infinite() const;
  std::string to_json() const;
};

/// (A_{n-1} / A_{n-5})^{1/4}; 0 when the innermost sums vanish.
double growth_ratio(const std::vector<double>& annular_sums);
Classification classify_ratio(double ratio);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);
/// Gauss nodes and weights on [-1, 1] for the weight (1 - t^2)^a, a > -1.
std::pair<std::vector<double>, std::vector<double>> gauss_gegenbauer(int n, double a);

/// Unit-sphere rule in R^dim: directions (columns) and weights summing to |S^{dim-1}|.
struct SphereRule {
  Matrix directions;
  std::vector<double> weights;
};
SphereRule sphere_rule(int dim, int angular_nodes);

using PointIntegrand = std::function<double(const Vector& x)>;

/// Integrates f over the spec's domain inside `domain` (euclidean for balls and
/// annuli, the sphere or circle itself otherwise).
EnergyReport integrate(const Manifold& domain, const PointIntegrand& f, const QuadratureSpec& spec);

/// Componentwise box on ambient target values; the sublevel set is u^{-1}(box).
struct Sublevel {
  Vector lo, hi;
  bool contains(const Vector& v) const;
};

/// Pointwise |D^j_K u|^q at x (j in 1..4).
double energy_density(const SmoothMap& u, const Vector& x, int j, double q);

/// Integral of |D^j_K u|^q, optionally restricted to u^{-1}(L).
EnergyReport energy(const SmoothMap& u, int j, double q, const QuadratureSpec& spec,
                    const std::optional<Sublevel>& sublevel = std::nullopt);

struct AnnulusIntegral {
  double r_lo = 0.0, r_hi = 0.0;
  double integral = 0.0;
};
std::vector<AnnulusIntegral> annular_profile(const SmoothMap& u, int j, double q, const QuadratureSpec& spec);

/// Canonical k-tuple norm of the k-th tangent prolongation of the ambient
/// realization of u (k in 1..3), integrated over u^{-1}(L).
double chainrule_density(const SmoothMap& u, const Vector& x, int k);
EnergyReport chainrule_integral(const SmoothMap& u, int k, const QuadratureSpec& spec,
                                const std::optional<Sublevel>& sublevel = std::nullopt);

/// Largest target distance between images of nested quasi-random samples and
/// their antipodes (for balls, spheres and circles).
double oscillation(const SmoothMap& u, const QuadratureSpec& spec, int samples = 256);

enum class GnStatus { Finite, Infinite, Inconclusive };
std::string gn_status_name(GnStatus s);

struct GnRatio {
  EnergyReport lhs_energy;  // integral of |D^j_K u|^{kp/j}
  EnergyReport rhs_energy;  // integral of |D^k_K u|^p
  double osc = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // +infinity when status is Infinite
  GnStatus status = GnStatus::Inconclusive;
};

/// Compares both sides of the interpolation inequality; 1 <= j < k.
GnRatio gn_ratio(const SmoothMap& u, int k, int j, double p, const QuadratureSpec& spec, int osc_samples = 256);

}  // namespace cosob
