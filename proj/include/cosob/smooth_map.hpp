#pragma once

// Maps between built-in manifolds and their local jets.
//
// A SmoothMap is given by its ambient realization x -> u(x), taking an
// ambient point of the domain to an ambient point of the target. Derivatives
// come either from an analytic oracle (the same formula evaluated on Taylor
// scalars) or from central finite differences in a domain chart.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosob/manifold.hpp"
#include "cosob/taylor.hpp"

namespace cosob {

using ValueOracle = std::function<Vector(const Vector&)>;
using TaylorOracle = std::function<std::vector<Taylor>(std::span<const Taylor>)>;

enum class Differentiation { Auto, Analytic, FiniteDifference };

class SmoothMap {
 public:
  SmoothMap(Manifold domain, Manifold target, ValueOracle value, TaylorOracle analytic = {},
            std::optional<double> fd_step = std::nullopt);

  /// Builds both oracles from one formula written over a generic scalar.
  template <class Formula>
  static SmoothMap from_formula(Manifold domain, Manifold target, Formula f,
                                std::optional<double> fd_step = std::nullopt) {
    ValueOracle value = [f](const Vector& x) {
      const std::vector<double> out = f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
      return Vector(Eigen::Map<const Vector>(out.data(), static_cast<Eigen::Index>(out.size())));
    };
    TaylorOracle analytic = [f](std::span<const Taylor> x) { return f(x); };
    return SmoothMap(std::move(domain), std::move(target), std::move(value), std::move(analytic), fd_step);
  }

  const Manifold& domain() const { return domain_; }
  const Manifold& target() const { return target_; }
  bool has_analytic() const { return static_cast<bool>(analytic_); }
  std::optional<double> fd_step() const { return fd_step_; }

  Vector operator()(const Vector& x) const { return value_(x); }
  std::vector<Taylor> operator()(std::span<const Taylor> x) const { return analytic_(x); }

  /// Same map with the analytic oracle dropped (finite differences only).
  SmoothMap without_analytic() const;
  SmoothMap with_fd_step(double h) const;

 private:
  Manifold domain_;
  Manifold target_;
  ValueOracle value_;
  TaylorOracle analytic_;
  std::optional<double> fd_step_;
};

/// g o f; analytic when both factors are. Requires f's target to equal g's domain.
SmoothMap compose(const SmoothMap& g, const SmoothMap& f);

/// Local expansion of a map at a point, in a domain chart and a target chart.
struct Jet {
  int order = 0;
  Vector x;            // ambient base point in the domain
  Vector value;        // ambient image point u(x)
  Chart domain_chart;
  Chart target_chart;
  Vector y0;           // chart coordinates of x
  Vector w0;           // chart coordinates of u(x)
  std::vector<Taylor> ambient;  // u o phi, one series per ambient target coordinate
  std::vector<Taylor> chart;    // psi o u o phi, one series per target chart coordinate
  std::vector<Taylor> y;        // seeded domain chart variables
  bool analytic = false;
};

/// Relative rounding level behind the finite-difference step rules.
inline constexpr double kFdEpsilon = 2.220446049250313e-16;

/// Step used for derivatives of total order d: eps^{1/(d+2)} * scale.
double fd_step_for_order(int d, double scale);

Jet evaluate_jet(const SmoothMap& u, const Vector& x, int order, Differentiation mode = Differentiation::Auto);

/// Same jet, but in a prescribed domain chart (chart coordinates y0 = phi^{-1}(x)).
Jet evaluate_jet_in_chart(const SmoothMap& u, const Vector& x, const Chart& domain_chart, int order,
                          Differentiation mode = Differentiation::Auto);

struct OracleCheck {
  double mismatch = 0.0;        // max abs difference of first and second chart derivatives
  double expected_error = 0.0;  // finite-difference error scale
  bool flagged = false;         // mismatch > 100 * expected_error
};

/// Compares the analytic and finite-difference jets of u at x.
OracleCheck check_oracles(const SmoothMap& u, const Vector& x);

}  // namespace cosob
