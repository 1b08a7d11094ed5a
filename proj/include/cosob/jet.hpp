#pragma once

// Tangent maps, covariant derivatives and their pointwise norms.
//
// Tensors are stored with their arguments in the domain chart basis and
// their values either in the ambient space of the target (metric = identity)
// or in the target chart. Components of an order-k tensor form a
// value_dim x m^k matrix with column index i1 * m^(k-1) + ... + ik.

#include <span>

#include "cosob/manifold.hpp"
#include "cosob/multinorms.hpp"
#include "cosob/smooth_map.hpp"

namespace cosob {

struct CovariantTensor {
  int order = 0;
  Vector base_point;
  Matrix components;
  MetricTensor domain_metric;
  MetricTensor value_metric;

  int domain_dim() const { return domain_metric.dim(); }
  int value_dim() const { return static_cast<int>(components.rows()); }
  double operator()(int value, std::span<const int> args) const;
  /// Largest difference under a transposition of two argument slots.
  double max_asymmetry() const;
  /// Largest difference under swapping argument slots s and t.
  double slot_asymmetry(int s, int t) const;
};

/// All order-k partials of each series at the base point (rows: series, columns: flattened index).
Matrix jet_derivative(const std::vector<Taylor>& f, int m, int k);

/// Hilbert-Schmidt norm over a gM-orthonormal frame, values measured by gN.
double tensor_norm(const CovariantTensor& t, const MetricTensor& gM, const MetricTensor& gN);
double tensor_norm(const CovariantTensor& t);

CovariantTensor tangent_map(const SmoothMap& u, const Vector& x, Differentiation mode = Differentiation::Auto);
CovariantTensor tangent_map(const SmoothMap& u, const Jet& jet);

/// Chart components (Dw, Dw, Dw, D^2 w) of T^2 u.
DoubleMorphism second_tangent(const SmoothMap& u, const Vector& x, Differentiation mode = Differentiation::Auto);
DoubleMorphism second_tangent(const Jet& jet);

/// D_K(Tu) = P_N d^2(u) - Gamma_M du, computed on the ambient realization of u.
CovariantTensor covariant_hessian(const SmoothMap& u, const Vector& x, Differentiation mode = Differentiation::Auto);
CovariantTensor covariant_hessian(const SmoothMap& u, const Jet& jet);

/// D_K(Tu) from chart Christoffel symbols of both manifolds,
/// d^2 w - Gamma_M dw + Gamma_N(w) dw dw, carried to ambient values.
CovariantTensor covariant_hessian_chart(const SmoothMap& u, const Vector& x,
                                        Differentiation mode = Differentiation::Auto);
CovariantTensor covariant_hessian_chart(const SmoothMap& u, const Jet& jet);

/// D^k_K u for k in 1..4 by the recursion D^k = K o T D^(k-1), ambient values.
CovariantTensor higher_covariant(const SmoothMap& u, const Vector& x, int k,
                                 Differentiation mode = Differentiation::Auto);
CovariantTensor higher_covariant(const SmoothMap& u, const Jet& jet, int k);

/// |T^2 u|^2 for the Sasaki-type metric obtained by splitting T(Tu) into its
/// horizontal part (measured in TN) and its connector part (measured in T*M x TN),
/// summed over an orthonormal frame of T_xM.
double sasaki_norm_sq(const SmoothMap& u, const Vector& x, Differentiation mode = Differentiation::Auto);
double sasaki_norm_sq(const SmoothMap& u, const Jet& jet);

struct Renormalization {
  CovariantTensor renormalized;   // f(Tu) with f(xi) = xi / sqrt(1 + |xi|^2)
  CovariantTensor derivative;     // D_K(f o Tu)
  CovariantTensor reconstructed;  // D_K(Tu) recovered from D_K(f o Tu)
};

Renormalization hm_renormalize(const SmoothMap& u, const Vector& x, Differentiation mode = Differentiation::Auto);
Renormalization hm_renormalize(const SmoothMap& u, const Jet& jet);

}  // namespace cosob
