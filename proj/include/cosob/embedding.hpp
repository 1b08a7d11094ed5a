#pragma once

// Isometric embeddings into euclidean space and their second fundamental forms.

#include <optional>

#include "cosob/jet.hpp"
#include "cosob/random.hpp"
#include "cosob/smooth_map.hpp"

namespace cosob {

struct HelixParams {
  double lambda = 0.8;
  double gamma = 0.6;
  double mu = 1.0;
};

struct IsometricEmbedding {
  SmoothMap map;  // source manifold -> euclidean(ambient_dim)
  std::optional<HelixParams> helix;

  const Manifold& source() const { return map.domain(); }
  int ambient_dim() const { return map.target().dim(); }
};

/// R^nu -> R^{3 nu}, t -> (lambda t_i, gamma cos(mu t_i), gamma sin(mu t_i))_i.
/// Requires lambda^2 + gamma^2 mu^2 = 1 within 1e-12.
IsometricEmbedding helical_embed(int nu, double lambda, double gamma, double mu);
/// The defining inclusion of a built-in manifold into its ambient space.
IsometricEmbedding inclusion(const Manifold& m);
/// outer o inner; the outer source must be the inner target space.
IsometricEmbedding compose(const IsometricEmbedding& outer, const IsometricEmbedding& inner);

/// Largest |J^T J - g| over the source chart at x, J the Jacobian of the embedding.
double isometry_residual(const IsometricEmbedding& iota, const Vector& x,
                         Differentiation mode = Differentiation::Auto);

/// A[v1, v2] = (I - P) d^2 iota[v1, v2] at x; v1, v2 tangent to the source in its ambient coordinates.
Vector second_fundamental_form(const IsometricEmbedding& iota, const Vector& x, const Vector& v1, const Vector& v2,
                               Differentiation mode = Differentiation::Auto);
/// Closed form for the helix at t: slot (3i+1, 3i+2) holds -gamma mu^2 v1_i v2_i (cos mu t_i, sin mu t_i).
Vector helical_second_fundamental_form(const HelixParams& h, const Vector& t, const Vector& v1, const Vector& v2);

/// Smallest C with |v|^2 <= C |A[v,v]| for the helix on R^nu: sqrt(nu) / (gamma mu^2).
double helical_bound_constant(int nu, const HelixParams& h);
/// max |v|^2 / |A[v,v]| over random unit tangent vectors at x.
double sampled_bound_constant(const IsometricEmbedding& iota, const Vector& x, int samples, Rng& rng);

struct ExtrinsicSplit {
  double lhs = 0.0;        // |D^2_K (iota o u)|^2
  double intrinsic = 0.0;  // |D^2_K u|^2
  double normal = 0.0;     // |A[Tu, Tu]|^2
  double rhs() const { return intrinsic + normal; }
};

ExtrinsicSplit extrinsic_split(const SmoothMap& u, const IsometricEmbedding& iota, const Vector& x,
                               Differentiation mode = Differentiation::Auto);

}  // namespace cosob
