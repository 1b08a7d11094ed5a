#pragma once

// Canonical double and k-tuple norms on iterated tangent bundles.
//
// Component norms are Frobenius (Hilbert-Schmidt) throughout. A j-linear
// component R^m x ... x R^m -> R^n is stored as an n x m^j matrix whose
// column index is i1 * m^(j-1) + ... + ij.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cosob/error.hpp"

namespace cosob {

inline constexpr int kMaxTupleOrder = 5;

/// A set partition; blocks hold 1-based elements, sorted, blocks ordered by least element.
using Partition = std::vector<std::vector<int>>;

/// All partitions of {1..k}, ordered by number of blocks, then lexicographically.
std::vector<Partition> enumerate_partitions(int k);
/// Partitions of the subset encoded by `mask` (bit i-1 set for element i), same order.
std::vector<Partition> partitions_of_subset(std::uint32_t mask);
/// Nonempty subsets of {1..k} as bit masks, ordered by size, then lexicographically.
std::vector<std::uint32_t> subset_order(int k);
std::uint32_t block_mask(const std::vector<int>& block);
/// Number of partitions of an n-element set.
long long bell_number(int n);

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Kronecker product: entry ((a*rb + b), (i*cb + j)) = A(a,i) * B(b,j).
template <class Scalar>
MatrixX<Scalar> kronecker(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
  MatrixX<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// nu = (x, e1, e2, e12) in T^2 M.
template <class Scalar>
struct DoubleVectorT {
  VectorX<Scalar> base;
  VectorX<Scalar> e1, e2, e12;
};

/// Double vector bundle morphism acting by
/// (x, e1, e2, e12) -> (y, f1 e1, f2 e2, f12 e12 + f12hat[e1, e2]).
template <class Scalar>
struct DoubleMorphismT {
  VectorX<Scalar> base_x, base_y;
  MatrixX<Scalar> f1, f2, f12;  // n x m
  MatrixX<Scalar> f12hat;       // n x m^2

  int source_dim() const { return static_cast<int>(f1.cols()); }
  int target_dim() const { return static_cast<int>(f1.rows()); }

  static DoubleMorphismT identity(int m) {
    DoubleMorphismT f;
    f.base_x = f.base_y = VectorX<Scalar>::Zero(m);
    f.f1 = f.f2 = f.f12 = MatrixX<Scalar>::Identity(m, m);
    f.f12hat = MatrixX<Scalar>::Zero(m, m * m);
    return f;
  }
  static DoubleMorphismT zero(int m, int n) {
    DoubleMorphismT f;
    f.base_x = VectorX<Scalar>::Zero(m);
    f.base_y = VectorX<Scalar>::Zero(n);
    f.f1 = f.f2 = f.f12 = MatrixX<Scalar>::Zero(n, m);
    f.f12hat = MatrixX<Scalar>::Zero(n, m * m);
    return f;
  }

  /// Bilinear part f12hat[a, b].
  VectorX<Scalar> bilinear(const VectorX<Scalar>& a, const VectorX<Scalar>& b) const {
    return f12hat * kronecker<Scalar>(a, b);
  }

  DoubleVectorT<Scalar> operator()(const DoubleVectorT<Scalar>& v) const {
    return {base_y, f1 * v.e1, f2 * v.e2, f12 * v.e12 + bilinear(v.e1, v.e2)};
  }
};

using DoubleVector = DoubleVectorT<double>;
using DoubleMorphism = DoubleMorphismT<double>;

template <class Scalar>
Scalar double_norm_vector(const DoubleVectorT<Scalar>& v) {
  return v.e1.norm() * v.e2.norm() + v.e12.norm();
}

template <class Scalar>
Scalar double_norm_morphism(const DoubleMorphismT<Scalar>& f) {
  return f.f1.norm() * f.f2.norm() + f.f12.norm() + f.f12hat.norm();
}

/// h o f; requires h's source dimension to equal f's target dimension.
template <class Scalar>
DoubleMorphismT<Scalar> compose_double(const DoubleMorphismT<Scalar>& h, const DoubleMorphismT<Scalar>& f) {
  if (h.source_dim() != f.target_dim()) throw ConfigError("compose_double: dimension mismatch");
  DoubleMorphismT<Scalar> g;
  g.base_x = f.base_x;
  g.base_y = h.base_y;
  g.f1 = h.f1 * f.f1;
  g.f2 = h.f2 * f.f2;
  g.f12 = h.f12 * f.f12;
  g.f12hat = h.f12 * f.f12hat + h.f12hat * kronecker<Scalar>(f.f1, f.f2);
  return g;
}

/// nu = (x, (e_lambda)) with one component per nonempty subset lambda of {1..k}.
template <class Scalar>
struct KTupleVectorT {
  int k = 0;
  VectorX<Scalar> base;
  std::vector<VectorX<Scalar>> components;  // indexed by subset mask; slot 0 unused

  static KTupleVectorT zero(int k, int m) {
    if (k < 1 || k > kMaxTupleOrder) throw ConfigError("k-tuple order must be in 1..5");
    KTupleVectorT v;
    v.k = k;
    v.base = VectorX<Scalar>::Zero(m);
    v.components.assign(std::size_t{1} << k, VectorX<Scalar>::Zero(m));
    return v;
  }
  /// Components listed in subset_order(k), e.g. (e1, e2, e3, e12, e13, e23, e123) for k = 3.
  static KTupleVectorT from_list(int k, const VectorX<Scalar>& base, const std::vector<VectorX<Scalar>>& list) {
    const auto order = subset_order(k);
    if (list.size() != order.size()) throw ConfigError("k-tuple vector needs 2^k - 1 components");
    KTupleVectorT v = zero(k, static_cast<int>(base.size()));
    v.base = base;
    for (std::size_t i = 0; i < order.size(); ++i) v.components[order[i]] = list[i];
    return v;
  }
  const VectorX<Scalar>& operator[](std::uint32_t mask) const { return components[mask]; }
};

/// Sum over partitions of {1..k} of the product of the block component norms.
template <class Scalar>
Scalar ktuple_norm_vector(const KTupleVectorT<Scalar>& v) {
  Scalar total = Scalar(0);
  for (const auto& p : enumerate_partitions(v.k)) {
    Scalar prod = Scalar(1);
    for (const auto& block : p) prod *= v.components[block_mask(block)].norm();
    total += prod;
  }
  return total;
}

/// k-tuple morphism: one multilinear component f_lambda for every partition
/// lambda of every nonempty subset of {1..k}.
template <class Scalar>
struct KTupleMorphismT {
  struct Component {
    std::uint32_t subset;
    Partition lambda;
    MatrixX<Scalar> map;  // n x m^(number of blocks)
  };
  int k = 0;
  int m = 0;
  int n = 0;
  VectorX<Scalar> base_x, base_y;
  std::vector<Component> components;  // canonical order: subset_order, then partition order

  static KTupleMorphismT zero(int k, int m, int n) {
    if (k < 1 || k > kMaxTupleOrder) throw ConfigError("k-tuple order must be in 1..5");
    KTupleMorphismT f;
    f.k = k;
    f.m = m;
    f.n = n;
    f.base_x = VectorX<Scalar>::Zero(m);
    f.base_y = VectorX<Scalar>::Zero(n);
    for (std::uint32_t s : subset_order(k)) {
      for (auto& lambda : partitions_of_subset(s)) {
        int cols = 1;
        for (std::size_t j = 0; j < lambda.size(); ++j) cols *= m;
        f.components.push_back({s, std::move(lambda), MatrixX<Scalar>::Zero(n, cols)});
      }
    }
    return f;
  }

  /// Tangent prolongation of a map with derivatives D^j (n x m^j, j = 1..k):
  /// every component indexed by a j-block partition is D^j.
  static KTupleMorphismT prolongation(int k, const std::vector<MatrixX<Scalar>>& derivatives) {
    if (static_cast<int>(derivatives.size()) < k) throw ConfigError("prolongation needs derivatives up to order k");
    KTupleMorphismT f = zero(k, static_cast<int>(derivatives[0].cols()), static_cast<int>(derivatives[0].rows()));
    for (auto& c : f.components) c.map = derivatives[c.lambda.size() - 1];
    return f;
  }

  const MatrixX<Scalar>& component(const Partition& lambda) const {
    for (const auto& c : components)
      if (c.lambda == lambda) return c.map;
    throw ConfigError("k-tuple morphism has no such component");
  }
};

/// Sum over partitions Pi of {1..k} of prod_{B in Pi} N(B), where
/// N(B) = sum over partitions lambda of B of |f_lambda|. For k = 2 this is
/// |f1||f2| + |f12| + |f12hat|.
template <class Scalar>
Scalar ktuple_norm_morphism(const KTupleMorphismT<Scalar>& f) {
  std::vector<Scalar> block_sum(std::size_t{1} << f.k, Scalar(0));
  for (const auto& c : f.components) block_sum[c.subset] += c.map.norm();
  Scalar total = Scalar(0);
  for (const auto& p : enumerate_partitions(f.k)) {
    Scalar prod = Scalar(1);
    for (const auto& block : p) prod *= block_sum[block_mask(block)];
    total += prod;
  }
  return total;
}

template <class Scalar>
KTupleMorphismT<Scalar> to_ktuple(const DoubleMorphismT<Scalar>& f) {
  auto g = KTupleMorphismT<Scalar>::zero(2, f.source_dim(), f.target_dim());
  g.base_x = f.base_x;
  g.base_y = f.base_y;
  for (auto& c : g.components) {
    if (c.subset == 1) c.map = f.f1;
    if (c.subset == 2) c.map = f.f2;
    if (c.subset == 3) c.map = c.lambda.size() == 1 ? f.f12 : f.f12hat;
  }
  return g;
}

using KTupleVector = KTupleVectorT<double>;
using KTupleMorphism = KTupleMorphismT<double>;

/// Flat JSON array of all component entries in canonical order (row-major within a component).
std::string serialize_flat(const KTupleMorphism& f);
std::string serialize_flat(const DoubleMorphism& f);

}  // namespace cosob
