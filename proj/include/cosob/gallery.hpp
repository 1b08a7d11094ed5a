#pragma once

// Explicit map families with analytic derivative oracles.
//
// Ball families live on R^m with a singular point at the origin; the
// geodesic winding family lives on the unit circle.

#include <optional>
#include <string>
#include <vector>

#include "cosob/manifold.hpp"
#include "cosob/smooth_map.hpp"

namespace cosob {

enum class FamilyId { Spiral, RadialPower, Hedgehog, MollifiedSpiral, OscPower, GeodesicWind, GeodesicRadial };

struct ExampleFamily {
  FamilyId id = FamilyId::Spiral;
  double alpha = 1.0;
  double beta = 1.0;
  double ell = 1.0;
  int m = 2;
  /// Overrides the family's default target where an alternative is meaningful
  /// (spiral: euclidean(2) by default, circle(1) allowed).
  std::optional<ManifoldSpec> target;
};

std::string family_name(FamilyId id);
/// Parses "spiral", "radial_power", ...; throws ConfigError on unknown names.
FamilyId parse_family(const std::string& name);
/// Canonical "alpha=...;m=..." string listing the parameters the family uses.
std::string family_params(const ExampleFamily& f);

/// Validates parameters and builds the map.
SmoothMap make_example(const ExampleFamily& f);
/// True when the family's domain is a ball punctured at the origin.
bool singular_at_origin(FamilyId id);
/// Default domain dimension used by quadrature (the circle for geodesic_wind).
Manifold example_domain(const ExampleFamily& f);
Manifold example_target(const ExampleFamily& f);

enum class WindowPurpose {
  Default,            // the window attached to the family's own counterexample
  ChainRuleFailure,   // spiral: alpha - 1 < m < 2(alpha + 1)
  StrictInclusion,    // geodesic_radial: (2 + alpha) p < m < 2 p (alpha + 1)
  ThirdOrderFailure,  // osc_power: (alpha - m + 3)/3 < beta < (3 alpha - m + 3)/3 and beta > alpha
  UniformIntegrability,  // mollified_spiral: (m - 2)/2 < alpha < m - 2
};

struct Window {
  std::string name;
  std::string variable;  // which parameter is tested against (lo, hi)
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  bool empty = false;
  bool satisfied = false;
};

struct ValidityReport {
  std::vector<Window> windows;
  bool all_satisfied() const;
};

ValidityReport validity_window(const ExampleFamily& f, double p, WindowPurpose purpose = WindowPurpose::Default);

}  // namespace cosob
