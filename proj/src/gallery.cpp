#include "cosob/gallery.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cosob/error.hpp"

namespace cosob {

namespace {

template <class S>
S radius_sq(std::span<const S> x) {
  S s = S(0.0);
  for (const S& v : x) s = s + v * v;
  return s;
}

struct Spiral {
  double alpha;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const S v = pow(radius_sq(x), -0.5 * alpha);
    return {cos(v), sin(v)};
  }
};

struct RadialPower {
  double alpha;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::pow;
    return {pow(radius_sq(x), -0.5 * alpha)};
  }
};

struct Hedgehog {
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::sqrt;
    const S inv = 1.0 / sqrt(radius_sq(x));
    std::vector<S> out;
    for (const S& v : x) out.push_back(v * inv);
    return out;
  }
};

struct MollifiedSpiral {
  double alpha, ell;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::cos;
    using std::pow;
    using std::sin;
    using std::sqrt;
    const S v = pow(sqrt(radius_sq(x)) + 1.0 / (1.0 + ell), -alpha);
    return {cos(v), sin(v)};
  }
};

struct OscPower {
  double alpha, beta;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::pow;
    using std::sin;
    const S r2 = radius_sq(x);
    return {pow(r2, -0.5 * alpha) * sin(pow(r2, 0.5 * beta))};
  }
};

// e^{i theta} -> e^{i ell theta} followed by the equator of S^2; z^ell / |z|^ell avoids angle branches.
struct GeodesicWind {
  int ell;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::pow;
    S re = S(1.0), im = S(0.0);
    for (int i = 0; i < ell; ++i) {
      const S nre = re * x[0] - im * x[1];
      im = re * x[1] + im * x[0];
      re = nre;
    }
    const S scale = pow(x[0] * x[0] + x[1] * x[1], -0.5 * ell);
    return {re * scale, im * scale, S(0.0)};
  }
};

struct GeodesicRadial {
  double alpha;
  template <class S>
  std::vector<S> operator()(std::span<const S> x) const {
    using std::cos;
    using std::pow;
    using std::sin;
    const S t = pow(radius_sq(x), -0.5 * alpha);
    return {cos(t), sin(t), S(0.0)};
  }
};

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string family_name(FamilyId id) {
  switch (id) {
    case FamilyId::Spiral:
      return "spiral";
    case FamilyId::RadialPower:
      return "radial_power";
    case FamilyId::Hedgehog:
      return "hedgehog";
    case FamilyId::MollifiedSpiral:
      return "mollified_spiral";
    case FamilyId::OscPower:
      return "osc_power";
    case FamilyId::GeodesicWind:
      return "geodesic_wind";
    case FamilyId::GeodesicRadial:
      return "geodesic_radial";
  }
  return "unknown";
}

FamilyId parse_family(const std::string& name) {
  for (FamilyId id : {FamilyId::Spiral, FamilyId::RadialPower, FamilyId::Hedgehog, FamilyId::MollifiedSpiral,
                      FamilyId::OscPower, FamilyId::GeodesicWind, FamilyId::GeodesicRadial}) {
    if (family_name(id) == name) return id;
  }
  throw ConfigError("unknown family: " + name);
}

std::string family_params(const ExampleFamily& f) {
  std::ostringstream os;
  switch (f.id) {
    case FamilyId::Spiral:
    case FamilyId::RadialPower:
    case FamilyId::GeodesicRadial:
      os << "alpha=" << f.alpha << ";m=" << f.m;
      break;
    case FamilyId::Hedgehog:
      os << "m=" << f.m;
      break;
    case FamilyId::MollifiedSpiral:
      os << "alpha=" << f.alpha << ";ell=" << f.ell << ";m=" << f.m;
      break;
    case FamilyId::OscPower:
      os << "alpha=" << f.alpha << ";beta=" << f.beta << ";m=" << f.m;
      break;
    case FamilyId::GeodesicWind:
      os << "ell=" << f.ell;
      break;
  }
  return os.str();
}

bool singular_at_origin(FamilyId id) { return id != FamilyId::GeodesicWind; }

Manifold example_domain(const ExampleFamily& f) {
  if (f.id == FamilyId::GeodesicWind) return Manifold::circle(1.0);
  return Manifold::euclidean(f.m);
}

Manifold example_target(const ExampleFamily& f) {
  switch (f.id) {
    case FamilyId::Spiral: {
      if (!f.target) return Manifold::euclidean(2);
      Manifold t = make_manifold(*f.target);
      require(t == Manifold::euclidean(2) || t == Manifold::circle(1.0),
              "spiral: target must be euclidean(2) or circle(1)");
      return t;
    }
    case FamilyId::RadialPower:
    case FamilyId::OscPower:
      return Manifold::euclidean(1);
    case FamilyId::Hedgehog:
      return f.m == 2 ? Manifold::circle(1.0) : Manifold::sphere(f.m - 1, 1.0);
    case FamilyId::MollifiedSpiral:
      return Manifold::circle(1.0);
    case FamilyId::GeodesicWind:
    case FamilyId::GeodesicRadial:
      return Manifold::sphere(2, 1.0);
  }
  throw ConfigError("unknown family");
}

SmoothMap make_example(const ExampleFamily& f) {
  if (f.id != FamilyId::GeodesicWind) require(f.m >= 1 && f.m <= kMaxTaylorVars, "family: m must be in 1..8");
  if (f.target && f.id != FamilyId::Spiral) throw ConfigError(family_name(f.id) + ": target is fixed");
  Manifold dom = example_domain(f);
  Manifold tgt = example_target(f);
  switch (f.id) {
    case FamilyId::Spiral:
      require(f.alpha > 0.0, "spiral: alpha must be positive");
      return SmoothMap::from_formula(dom, tgt, Spiral{f.alpha});
    case FamilyId::RadialPower:
      require(f.alpha > 0.0, "radial_power: alpha must be positive");
      return SmoothMap::from_formula(dom, tgt, RadialPower{f.alpha});
    case FamilyId::Hedgehog:
      require(f.m >= 2, "hedgehog: m must be at least 2");
      return SmoothMap::from_formula(dom, tgt, Hedgehog{});
    case FamilyId::MollifiedSpiral:
      require(f.alpha > 0.0, "mollified_spiral: alpha must be positive");
      require(f.ell >= 0.0, "mollified_spiral: ell must be nonnegative");
      return SmoothMap::from_formula(dom, tgt, MollifiedSpiral{f.alpha, f.ell});
    case FamilyId::OscPower:
      require(f.alpha > 0.0 && f.beta > f.alpha, "osc_power: requires beta > alpha > 0");
      return SmoothMap::from_formula(dom, tgt, OscPower{f.alpha, f.beta});
    case FamilyId::GeodesicWind: {
      require(f.ell >= 1.0 && f.ell == std::floor(f.ell) && f.ell <= 64.0,
              "geodesic_wind: ell must be an integer in 1..64");
      return SmoothMap::from_formula(dom, tgt, GeodesicWind{static_cast<int>(f.ell)});
    }
    case FamilyId::GeodesicRadial:
      require(f.alpha > 0.0, "geodesic_radial: alpha must be positive");
      return SmoothMap::from_formula(dom, tgt, GeodesicRadial{f.alpha});
  }
  throw ConfigError("unknown family");
}

bool ValidityReport::all_satisfied() const {
  for (const auto& w : windows)
    if (!w.satisfied) return false;
  return !windows.empty();
}

namespace {

Window make_window(std::string name, std::string variable, double lo, double hi, double value) {
  Window w{std::move(name), std::move(variable), lo, hi, value, false, false};
  w.empty = !(lo < hi);
  w.satisfied = !w.empty && lo < value && value < hi;
  return w;
}

WindowPurpose default_purpose(FamilyId id) {
  switch (id) {
    case FamilyId::Spiral:
      return WindowPurpose::ChainRuleFailure;
    case FamilyId::GeodesicRadial:
      return WindowPurpose::StrictInclusion;
    case FamilyId::OscPower:
      return WindowPurpose::ThirdOrderFailure;
    case FamilyId::MollifiedSpiral:
      return WindowPurpose::UniformIntegrability;
    default:
      return WindowPurpose::Default;
  }
}

}  // namespace

ValidityReport validity_window(const ExampleFamily& f, double p, WindowPurpose purpose) {
  if (purpose == WindowPurpose::Default) purpose = default_purpose(f.id);
  const double a = f.alpha, m = f.m, inf = std::numeric_limits<double>::infinity();
  ValidityReport r;
  switch (purpose) {
    case WindowPurpose::Default:
      break;
    case WindowPurpose::ChainRuleFailure:
      r.windows.push_back(make_window("chain_rule_failure", "m", a - 1.0, 2.0 * (a + 1.0), m));
      break;
    case WindowPurpose::StrictInclusion:
      r.windows.push_back(make_window("strict_inclusion", "m", (2.0 + a) * p, 2.0 * p * (a + 1.0), m));
      r.windows.push_back(make_window("top_order_exponent", "2p", -inf, m, 2.0 * p));
      break;
    case WindowPurpose::ThirdOrderFailure: {
      const double lo = (a - m + 3.0) / 3.0, hi = (3.0 * a - m + 3.0) / 3.0;
      r.windows.push_back(make_window("beta_window", "beta", lo, hi, f.beta));
      r.windows.push_back(make_window("beta_above_alpha", "beta", a, inf, f.beta));
      r.windows.push_back(make_window("beta_window_and_above_alpha", "beta", std::max(lo, a), hi, f.beta));
      break;
    }
    case WindowPurpose::UniformIntegrability:
      r.windows.push_back(make_window("uniform_integrability", "alpha", 0.0, m - 2.0, a));
      r.windows.push_back(make_window("limit_chain_rule_failure", "alpha", (m - 2.0) / 2.0, inf, a));
      break;
  }
  return r;
}

}  // namespace cosob
