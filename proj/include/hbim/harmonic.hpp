#pragma once

// Measures and functions on G, convolution, the Markov operators P_mu, the
// representation Theta of the measure algebra on B(l^2 G) and its predual
// theta on trace-class symbols, left ideals of l^1(G) and the jointly
// harmonic function and operator spaces.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hbim/group.hpp"
#include "hbim/linalg.hpp"
#include "hbim/rep_theory.hpp"

namespace hbim {

/// A complex measure on G. When `probability` is set the weights are real,
/// non-negative and sum to one (checked by validate()).
struct MeasureVec {
  CVector weights;
  bool probability = false;

  static MeasureVec delta(std::size_t n, std::size_t s) {
    MeasureVec m{CVector::Zero(static_cast<Index>(n)), true};
    m.weights(static_cast<Index>(s)) = 1.0;
    return m;
  }
  static MeasureVec uniform(std::size_t n) {
    return {CVector::Constant(static_cast<Index>(n), 1.0 / static_cast<double>(n)), true};
  }
  static MeasureVec from_probabilities(const std::vector<double>& w) {
    MeasureVec m{CVector(static_cast<Index>(w.size())), true};
    for (std::size_t i = 0; i < w.size(); ++i) m.weights(static_cast<Index>(i)) = w[i];
    m.validate();
    return m;
  }

  void validate() const {
    if (!weights.allFinite()) throw ConfigError("measure has non-finite weights");
    if (!probability) return;
    double total = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
      if (std::abs(weights(i).imag()) > 1e-12 || weights(i).real() < -1e-12)
        throw ConfigError("probability measure has a negative or complex weight");
      total += weights(i).real();
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("probability measure does not sum to 1");
  }

  std::vector<std::size_t> support(double tol = 1e-14) const {
    std::vector<std::size_t> out;
    for (Index i = 0; i < weights.size(); ++i)
      if (std::abs(weights(i)) > tol) out.push_back(static_cast<std::size_t>(i));
    return out;
  }
};

/// Elements of l^1(G), l^inf(G) and l^2(G) are all vectors in C^n.
using FunctionVec = CVector;

/// A linear map on M_n, stored as an n^2 x n^2 matrix acting on row-major
/// flattened operators.
struct SuperOperator {
  Index n = 0;
  CMatrix matrix;

  static SuperOperator identity(Index n) { return {n, CMatrix::Identity(n * n, n * n)}; }
  CMatrix apply(const CMatrix& t) const {
    if (t.rows() != n || t.cols() != n) throw DimensionError("superoperator applied to wrong-size operator");
    return unflatten(matrix * flatten(t), n, n);
  }
  /// (this o other)(T) = this(other(T)).
  SuperOperator after(const SuperOperator& other) const { return {n, matrix * other.matrix}; }
};

// ---------------------------------------------------------------------------

inline void check_size(const FiniteGroup& g, const CVector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != g.order()) throw DimensionError(std::string(what) + ": wrong length for group");
}

/// (f * g)(y) = sum_x f(x) g(x^-1 y).
inline FunctionVec convolve(const FiniteGroup& grp, const FunctionVec& f, const FunctionVec& g) {
  check_size(grp, f, "convolve");
  check_size(grp, g, "convolve");
  const std::size_t n = grp.order();
  FunctionVec out = FunctionVec::Zero(static_cast<Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    if (f(static_cast<Index>(x)) == 0.0) continue;
    for (std::size_t z = 0; z < n; ++z)
      out(static_cast<Index>(grp.mul(x, z))) += f(static_cast<Index>(x)) * g(static_cast<Index>(z));
  }
  return out;
}

/// (P_mu phi)(s) = sum_t phi(st) mu(t), as an n x n matrix on C^n.
inline CMatrix p_mu(const FiniteGroup& g, const MeasureVec& mu) {
  check_size(g, mu.weights, "p_mu");
  const std::size_t n = g.order();
  CMatrix p = CMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) p(static_cast<Index>(s), static_cast<Index>(g.mul(s, t))) += mu.weights(static_cast<Index>(t));
  return p;
}

/// Theta(f)(T) = sum_r f(r) rho_r T rho_r^*, i.e. Theta(f)(T)(s,t) = sum_r f(r) T(sr, tr).
inline SuperOperator theta(const FiniteGroup& g, const CVector& f) {
  check_size(g, f, "theta");
  const auto n = static_cast<Index>(g.order());
  SuperOperator op{n, CMatrix::Zero(n * n, n * n)};
  for (std::size_t r = 0; r < g.order(); ++r) {
    const cplx w = f(static_cast<Index>(r));
    if (w == 0.0) continue;
    for (std::size_t s = 0; s < g.order(); ++s)
      for (std::size_t t = 0; t < g.order(); ++t)
        op.matrix(static_cast<Index>(s) * n + static_cast<Index>(t),
                  static_cast<Index>(g.mul(s, r)) * n + static_cast<Index>(g.mul(t, r))) += w;
  }
  return op;
}
inline SuperOperator theta(const FiniteGroup& g, const MeasureVec& mu) { return theta(g, mu.weights); }

/// Predual action on symbols: theta(f)(h)(s,t) = sum_r f(r) h(s r^-1, t r^-1).
inline SuperOperator theta_predual(const FiniteGroup& g, const CVector& f) {
  check_size(g, f, "theta_predual");
  const auto n = static_cast<Index>(g.order());
  SuperOperator op{n, CMatrix::Zero(n * n, n * n)};
  for (std::size_t r = 0; r < g.order(); ++r) {
    const cplx w = f(static_cast<Index>(r));
    if (w == 0.0) continue;
    const std::size_t ri = g.inv(r);
    for (std::size_t s = 0; s < g.order(); ++s)
      for (std::size_t t = 0; t < g.order(); ++t)
        op.matrix(static_cast<Index>(s) * n + static_cast<Index>(t),
                  static_cast<Index>(g.mul(s, ri)) * n + static_cast<Index>(g.mul(t, ri))) += w;
  }
  return op;
}

/// Choi matrix sum_{ij} E_ij (x) Phi(E_ij) of a superoperator.
inline CMatrix choi_matrix(const SuperOperator& op) {
  const Index n = op.n;
  CMatrix c = CMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      c.block(i * n, j * n, n, n) = op.apply(e);
    }
  return c;
}

/// Smallest eigenvalue of the Hermitian part of the Choi matrix.
inline double choi_min_eigenvalue(const SuperOperator& op) {
  const CMatrix c = choi_matrix(op);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig((c + c.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

// ---------------------------------------------------------------------------
// Left ideals

enum class IdealSource { Explicit, FromMeasures, FromSubspaces };

struct LeftIdeal {
  Subspace subspace;  // inside C^n = l^1(G)
  IdealSource source = IdealSource::Explicit;
  std::string label;
};

/// max over x of the distance of lambda_x J from J (relative to unit vectors).
inline double left_invariance_defect(const FiniteGroup& g, const Subspace& j) {
  double worst = 0.0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const CMatrix moved = left_regular(g, x) * j.basis();
    for (Index k = 0; k < moved.cols(); ++k) worst = std::max(worst, j.distance(moved.col(k)));
  }
  return worst;
}

inline LeftIdeal ideal_explicit(const FiniteGroup& g, std::span<const CVector> basis, std::string label = "explicit",
                                double tol = kRankTol) {
  for (const auto& v : basis) check_size(g, v, "ideal_explicit");
  Subspace j = span(static_cast<Index>(g.order()), basis, tol);
  if (left_invariance_defect(g, j) > 1e-8) throw ConfigError("subspace is not invariant under left translations");
  return {std::move(j), IdealSource::Explicit, std::move(label)};
}

inline LeftIdeal zero_ideal(const FiniteGroup& g) {
  return {Subspace::zero(static_cast<Index>(g.order())), IdealSource::Explicit, "zero"};
}
inline LeftIdeal full_ideal(const FiniteGroup& g) {
  return {Subspace::full(static_cast<Index>(g.order())), IdealSource::Explicit, "full"};
}

/// J_Lambda = span{f * mu - f}; the delta functions f = delta_x suffice by
/// linearity, and delta_x * mu = mu(x^-1 .).
inline LeftIdeal ideal_from_measures(const FiniteGroup& g, std::span<const MeasureVec> lambda,
                                     std::string label = "J_Lambda", double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  std::vector<CVector> gens;
  for (const auto& mu : lambda) {
    check_size(g, mu.weights, "ideal_from_measures");
    for (std::size_t x = 0; x < g.order(); ++x) {
      CVector v(n);
      const std::size_t xi = g.inv(x);
      for (std::size_t u = 0; u < g.order(); ++u) v(static_cast<Index>(u)) = mu.weights(static_cast<Index>(g.mul(xi, u)));
      v(static_cast<Index>(x)) -= 1.0;
      gens.push_back(std::move(v));
    }
  }
  return {span(n, gens, tol), IdealSource::FromMeasures, std::move(label)};
}

/// J(E) = span{pi_ij : j < s_pi}, with E_pi the span of the first s_pi basis
/// vectors of each irrep.
inline LeftIdeal ideal_from_subspaces(const FiniteGroup& g, std::span<const Irrep> irreps,
                                      std::span<const std::size_t> splits, double tol = kRankTol) {
  if (splits.size() != irreps.size()) throw ConfigError("J(E): need one subspace dimension per irrep");
  std::vector<CVector> gens;
  std::string label = "J_E s=[";
  for (std::size_t p = 0; p < irreps.size(); ++p) {
    if (irreps[p].matrices.size() != g.order()) throw DimensionError("J(E): irrep of another group");
    if (splits[p] > irreps[p].dim) throw ConfigError("J(E): subspace dimension exceeds irrep dimension");
    label += std::to_string(splits[p]) + (p + 1 < irreps.size() ? "," : "");
    for (std::size_t i = 0; i < irreps[p].dim; ++i)
      for (std::size_t j = 0; j < splits[p]; ++j) gens.push_back(coefficient_function(irreps[p], i, j));
  }
  label += "]";
  return {span(static_cast<Index>(g.order()), gens, tol), IdealSource::FromSubspaces, std::move(label)};
}

/// J^perp in l^inf(G) under the bilinear pairing sum_s a(s) f(s).
inline Subspace annihilator_ideal(const LeftIdeal& j) { return annihilator(j.subspace, BilinearPairing{}); }

/// H(Lambda): joint fixed points of every P_mu.
inline Subspace harmonic_functions(const FiniteGroup& g, std::span<const MeasureVec> lambda, double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  CMatrix stacked(n * static_cast<Index>(lambda.size()), n);
  for (std::size_t k = 0; k < lambda.size(); ++k)
    stacked.middleRows(static_cast<Index>(k) * n, n) = p_mu(g, lambda[k]) - CMatrix::Identity(n, n);
  return kernel(stacked, tol);
}

/// H~(Lambda): joint fixed points of every Theta(mu), inside M_n.
inline Subspace harmonic_operators(const FiniteGroup& g, std::span<const MeasureVec> lambda, double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  const Index m = n * n;
  CMatrix stacked(m * static_cast<Index>(lambda.size()), m);
  for (std::size_t k = 0; k < lambda.size(); ++k)
    stacked.middleRows(static_cast<Index>(k) * m, m) = theta(g, lambda[k]).matrix - CMatrix::Identity(m, m);
  return kernel(stacked, tol);
}

/// Whether P_mu fixes the constants (sum of weights is 1). Harmonic spaces of
/// measures failing this are computed verbatim but flagged in reports.
inline bool preserves_constants(const MeasureVec& mu, double tol = 1e-12) {
  return std::abs(mu.weights.sum() - 1.0) <= tol;
}

}  // namespace hbim
