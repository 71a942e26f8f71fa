#pragma once

// Unitary irreducible representations of a finite group, computed numerically
// from the right regular representation, together with matrix coefficients,
// Schur orthogonality residuals and the Peter-Weyl block projections.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hbim/group.hpp"
#include "hbim/linalg.hpp"
#include "hbim/random.hpp"

namespace hbim {

struct Irrep {
  std::size_t dim = 0;
  /// pi(s) for every group element s, in group index order.
  std::vector<CMatrix> matrices;
  /// The chosen subspace E_pi is spanned by the first basis_split basis vectors.
  std::size_t basis_split = 0;

  CVector character() const {
    CVector chi(static_cast<Index>(matrices.size()));
    for (std::size_t s = 0; s < matrices.size(); ++s) chi(static_cast<Index>(s)) = matrices[s].trace();
    return chi;
  }

  bool is_trivial() const {
    return dim == 1 && std::all_of(matrices.begin(), matrices.end(),
                                   [](const CMatrix& m) { return std::abs(m(0, 0) - 1.0) < 1e-9; });
  }

  /// The same representation in the basis given by the columns of `u`
  /// (unitary): s -> u^* pi(s) u.
  Irrep rebased(const CMatrix& u, std::size_t split = 0) const {
    if (u.rows() != static_cast<Index>(dim) || u.cols() != static_cast<Index>(dim))
      throw DimensionError("rebase: unitary has wrong size");
    Irrep out{dim, {}, split};
    out.matrices.reserve(matrices.size());
    for (const auto& m : matrices) out.matrices.push_back(u.adjoint() * m * u);
    return out;
  }

  /// Rebases so that the given columns (any basis of a subspace E of H_pi)
  /// span the first vectors of the new orthonormal basis, and records the split.
  Irrep with_subspace(const CMatrix& e_basis) const {
    const auto d = static_cast<Index>(dim);
    if (e_basis.rows() != d) throw DimensionError("with_subspace: wrong vector length");
    Subspace e = span_columns(d, e_basis);
    CMatrix u(d, d);
    u << e.basis(), orthogonal_complement(e).basis();
    return rebased(u, static_cast<std::size_t>(e.dim()));
  }
};

struct IsotypicData {
  CMatrix projection;
  CVector character;
  std::size_t block_dim = 0;
};

namespace detail {

inline std::vector<CMatrix> right_regular_all(const FiniteGroup& g) {
  std::vector<CMatrix> out;
  out.reserve(g.order());
  for (std::size_t r = 0; r < g.order(); ++r) out.push_back(right_regular(g, r));
  return out;
}

inline std::vector<CMatrix> restrict_rep(const std::vector<CMatrix>& rep, const CMatrix& q) {
  std::vector<CMatrix> out;
  out.reserve(rep.size());
  for (const auto& m : rep) out.push_back(q.adjoint() * m * q);
  return out;
}

inline double character_norm(const std::vector<CMatrix>& rep) {
  double acc = 0.0;
  for (const auto& m : rep) acc += std::norm(m.trace());
  return acc / static_cast<double>(rep.size());
}

/// Group average of x: (1/|G|) sum_g a(g) x b(g)^*.
inline CMatrix twirl(const std::vector<CMatrix>& a, const CMatrix& x, const std::vector<CMatrix>& b) {
  CMatrix acc = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t g = 0; g < a.size(); ++g) acc += a[g] * x * b[g].adjoint();
  return acc / static_cast<double>(a.size());
}

/// Ordering key: dimension, then the arguments and moduli of the character.
inline std::vector<long long> irrep_key(const Irrep& p) {
  std::vector<long long> key{static_cast<long long>(p.dim)};
  const CVector chi = p.character();
  for (Index s = 1; s < chi.size(); ++s) {
    const double mod = std::abs(chi(s));
    double arg = mod < 1e-9 ? 0.0 : std::arg(chi(s));
    if (arg < 0) arg += 2.0 * std::numbers::pi;
    if (arg > 2.0 * std::numbers::pi - 1e-7) arg = 0.0;
    key.push_back(std::llround(arg * 1e6));
    key.push_back(std::llround(mod * 1e6));
  }
  return key;
}

}  // namespace detail

/// Intertwiner test: the twirl of a random X between a and b is nonzero
/// exactly when a and b are equivalent (Schur's lemma).
inline bool equivalent(const Irrep& a, const Irrep& b, Rng& rng, double threshold = 1e-8) {
  if (a.dim != b.dim || a.matrices.size() != b.matrices.size()) return false;
  const auto d = static_cast<Index>(a.dim);
  CMatrix x = random_complex(rng, d, d);
  return detail::twirl(a.matrices, x, b.matrices).norm() > threshold * x.norm();
}

/// Complete list of pairwise inequivalent unitary irreps of G, found by
/// splitting the right regular representation with eigenspaces of
/// group-averaged random Hermitian matrices. Deterministic given the seed.
inline std::vector<Irrep> decompose_regular(const FiniteGroup& g, std::uint64_t seed, int max_retries = 8) {
  const auto n = static_cast<Index>(g.order());
  const auto rho = detail::right_regular_all(g);
  Rng rng(seed);

  std::vector<CMatrix> pending{CMatrix::Identity(n, n)};
  std::vector<CMatrix> irreducible;
  while (!pending.empty()) {
    CMatrix q = std::move(pending.back());
    pending.pop_back();
    const auto sigma = detail::restrict_rep(rho, q);
    if (std::abs(detail::character_norm(sigma) - 1.0) < 1e-6) {
      irreducible.push_back(std::move(q));
      continue;
    }
    bool split = false;
    for (int attempt = 0; attempt < max_retries && !split; ++attempt) {
      const CMatrix h = detail::twirl(sigma, random_hermitian(rng, q.cols()), sigma);
      Eigen::SelfAdjointEigenSolver<CMatrix> eig((h + h.adjoint()) * 0.5);
      const auto& ev = eig.eigenvalues();
      const double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
      std::vector<Index> cuts{0};
      for (Index i = 1; i < ev.size(); ++i)
        if (ev(i) - ev(i - 1) > 1e-8 * radius) cuts.push_back(i);
      if (cuts.size() < 2) continue;
      cuts.push_back(ev.size());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
        pending.push_back(q * eig.eigenvectors().middleCols(cuts[c], cuts[c + 1] - cuts[c]));
      split = true;
    }
    if (!split) throw ConvergenceError("irrep splitting did not separate a reducible subspace");
  }

  std::vector<Irrep> classes;
  std::vector<std::size_t> multiplicity;
  for (const auto& q : irreducible) {
    Irrep cand{static_cast<std::size_t>(q.cols()), detail::restrict_rep(rho, q), 0};
    bool placed = false;
    for (std::size_t c = 0; c < classes.size() && !placed; ++c) {
      if (equivalent(classes[c], cand, rng)) {
        ++multiplicity[c];
        placed = true;
      }
    }
    if (!placed) {
      classes.push_back(std::move(cand));
      multiplicity.push_back(1);
    }
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (multiplicity[c] != classes[c].dim) throw ConvergenceError("irrep multiplicity does not match its dimension");
    total += classes[c].dim * classes[c].dim;
  }
  if (total != g.order()) throw ConvergenceError("sum of squared irrep dimensions differs from the group order");

  // One-dimensional irreps take values in the exponent-th roots of unity.
  const double e = static_cast<double>(g.exponent());
  for (auto& p : classes) {
    if (p.dim != 1) continue;
    for (auto& m : p.matrices) {
      const double k = std::round(std::arg(m(0, 0)) * e / (2.0 * std::numbers::pi));
      m(0, 0) = k == 0.0 ? cplx(1.0) : std::polar(1.0, 2.0 * std::numbers::pi * k / e);
    }
  }

  std::sort(classes.begin(), classes.end(),
            [](const Irrep& a, const Irrep& b) { return detail::irrep_key(a) < detail::irrep_key(b); });
  return classes;
}

/// pi_ij(s) = (pi(s) e_j, e_i), 0-based indices.
inline cplx matrix_coefficient(const Irrep& p, std::size_t i, std::size_t j, GroupElement s) {
  if (i >= p.dim || j >= p.dim) throw DimensionError("matrix coefficient index out of range");
  if (s.index >= p.matrices.size()) throw DimensionError("group element out of range");
  return p.matrices[s.index](static_cast<Index>(i), static_cast<Index>(j));
}

/// The coefficient pi_ij as a function on G.
inline CVector coefficient_function(const Irrep& p, std::size_t i, std::size_t j) {
  if (i >= p.dim || j >= p.dim) throw DimensionError("matrix coefficient index out of range");
  CVector f(static_cast<Index>(p.matrices.size()));
  for (std::size_t s = 0; s < p.matrices.size(); ++s)
    f(static_cast<Index>(s)) = p.matrices[s](static_cast<Index>(i), static_cast<Index>(j));
  return f;
}

/// max |(1/|G|) sum_s conj(a_kl(s)) b_ij(s) - [a is b] delta_ki delta_lj / d|.
/// `a` is taken to be `b` when their matrices agree to 1e-12.
inline double schur_check(const Irrep& a, const Irrep& b) {
  if (a.matrices.size() != b.matrices.size()) throw DimensionError("schur_check: irreps of different groups");
  bool same = a.dim == b.dim;
  for (std::size_t s = 0; same && s < a.matrices.size(); ++s) same = max_abs(a.matrices[s] - b.matrices[s]) < 1e-12;
  const double order = static_cast<double>(a.matrices.size());
  double worst = 0.0;
  const auto da = static_cast<Index>(a.dim), db = static_cast<Index>(b.dim);
  for (Index k = 0; k < da; ++k)
    for (Index l = 0; l < da; ++l)
      for (Index i = 0; i < db; ++i)
        for (Index j = 0; j < db; ++j) {
          cplx acc = 0.0;
          for (std::size_t s = 0; s < a.matrices.size(); ++s)
            acc += std::conj(a.matrices[s](k, l)) * b.matrices[s](i, j);
          acc /= order;
          const double expected = (same && k == i && l == j) ? 1.0 / static_cast<double>(a.dim) : 0.0;
          worst = std::max(worst, std::abs(acc - expected));
        }
  return worst;
}

/// Dimension of {X : pi(s) X = X pi(s) for all s}; 1 for an irrep.
inline Index commutant_dimension(const std::vector<CMatrix>& rep) {
  if (rep.empty()) return 0;
  const Index d = rep.front().rows();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix stacked(d * d * static_cast<Index>(rep.size()), d * d);
  for (std::size_t s = 0; s < rep.size(); ++s)
    stacked.middleRows(static_cast<Index>(s) * d * d, d * d) = kron(rep[s], id) - kron(id, rep[s].transpose());
  return kernel(stacked, 1e-9).dim();
}

/// Orthogonal projection onto E_pi = span{pi_ij}:
/// P_pi = (d/|G|) sum_s chi(s) lambda_s.
inline IsotypicData isotypic_projection(const FiniteGroup& g, const Irrep& p) {
  const auto n = static_cast<Index>(g.order());
  if (p.matrices.size() != g.order()) throw DimensionError("irrep does not belong to this group");
  IsotypicData out;
  out.character = p.character();
  out.block_dim = p.dim * p.dim;
  out.projection = CMatrix::Zero(n, n);
  for (std::size_t s = 0; s < g.order(); ++s)
    out.projection += out.character(static_cast<Index>(s)) * left_regular(g, s);
  out.projection *= static_cast<double>(p.dim) / static_cast<double>(n);
  return out;
}

/// T_{pi,pi'} = P_pi T P_pi'.
inline CMatrix block(const CMatrix& t, const IsotypicData& p, const IsotypicData& q) {
  if (t.rows() != p.projection.rows() || t.cols() != q.projection.rows())
    throw DimensionError("block: operator has wrong size");
  return p.projection * t * q.projection;
}

inline CMatrix block(const FiniteGroup& g, const CMatrix& t, const Irrep& p, const Irrep& q) {
  return block(t, isotypic_projection(g, p), isotypic_projection(g, q));
}

}  // namespace hbim
