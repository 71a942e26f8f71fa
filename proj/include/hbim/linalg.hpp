#pragma once

// Dense complex matrices and finite-dimensional subspaces with tolerance-aware
// lattice operations. Operators on C^n are flattened row-major, so entry
// (x, y) of an n-by-n matrix is coordinate x*n + y of a vector in C^{n^2}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hbim/errors.hpp"

namespace hbim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kRankTol = 1e-9;
inline constexpr double kAngleTol = 1e-8;

inline CVector flatten(const CMatrix& m) {
  CVector v(m.size());
  for (Index x = 0; x < m.rows(); ++x)
    for (Index y = 0; y < m.cols(); ++y) v(x * m.cols() + y) = m(x, y);
  return v;
}

inline CMatrix unflatten(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unflatten: size mismatch");
  CMatrix m(rows, cols);
  for (Index x = 0; x < rows; ++x)
    for (Index y = 0; y < cols; ++y) m(x, y) = v(x * cols + y);
  return m;
}

/// Side length of a square matrix stored as a flat vector.
inline Index square_side(Index flat_size) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(flat_size))));
  if (n * n != flat_size) throw DimensionError("vector length is not a perfect square");
  return n;
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

/// Kronecker product a (x) b; row index of the result is ia*b.rows() + ib.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix diag(const CVector& v) { return v.asDiagonal(); }

// ---------------------------------------------------------------------------

/// A linear subspace of C^m held by an orthonormal basis (the columns of
/// `basis`). Immutable after construction.
class Subspace {
 public:
  Subspace() = default;
  /// `basis` must already have orthonormal columns; use span() otherwise.
  Subspace(Index ambient, CMatrix basis, double tol = kRankTol)
      : ambient_(ambient), basis_(std::move(basis)), tol_(tol) {
    if (basis_.cols() == 0) basis_.resize(ambient_, 0);
    if (basis_.rows() != ambient_) throw DimensionError("subspace basis has wrong ambient dimension");
  }

  static Subspace zero(Index ambient, double tol = kRankTol) { return {ambient, CMatrix(ambient, 0), tol}; }
  static Subspace full(Index ambient, double tol = kRankTol) {
    return {ambient, CMatrix::Identity(ambient, ambient), tol};
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const CMatrix& basis() const { return basis_; }
  double tol() const { return tol_; }
  CVector vector(Index i) const { return basis_.col(i); }

  CVector project(const CVector& v) const { return basis_ * (basis_.adjoint() * v); }
  CMatrix projector() const { return basis_ * basis_.adjoint(); }
  /// Euclidean distance from v to the subspace.
  double distance(const CVector& v) const { return (v - project(v)).norm(); }

 private:
  Index ambient_ = 0;
  CMatrix basis_;
  double tol_ = kRankTol;
};

/// Orthonormal basis of the column span of `gens`. Singular directions below
/// tol times the largest singular value are discarded.
inline Subspace span_columns(Index ambient, const CMatrix& gens, double tol = kRankTol) {
  if (gens.cols() == 0) return Subspace::zero(ambient, tol);
  if (gens.rows() != ambient) throw DimensionError("span: generator has wrong ambient dimension");
  if (!gens.allFinite()) throw DimensionError("span: non-finite generator");
  Eigen::JacobiSVD<CMatrix> svd(gens, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Subspace::zero(ambient, tol);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  return {ambient, svd.matrixU().leftCols(rank), tol};
}

inline Subspace span(Index ambient, std::span<const CVector> vectors, double tol = kRankTol) {
  CMatrix gens(ambient, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw DimensionError("span: vectors have mismatched dimensions");
    gens.col(static_cast<Index>(i)) = vectors[i];
  }
  return span_columns(ambient, gens, tol);
}

/// Span of matrices, flattened row-major. All matrices must share a shape.
inline Subspace span_matrices(std::span<const CMatrix> mats, Index rows, Index cols, double tol = kRankTol) {
  const Index m = rows * cols;
  CMatrix gens(m, static_cast<Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != rows || mats[i].cols() != cols) throw DimensionError("span: matrices have mismatched shapes");
    gens.col(static_cast<Index>(i)) = flatten(mats[i]);
  }
  return span_columns(m, gens, tol);
}

/// Image of a subspace of (in_rows x in_cols) operators under a linear map
/// whose values live in C^out_ambient after flattening.
inline Subspace map_subspace(const Subspace& s, Index in_rows, Index in_cols,
                             const std::function<CMatrix(const CMatrix&)>& f, Index out_ambient,
                             double tol = kRankTol) {
  CMatrix imgs(out_ambient, s.dim());
  for (Index k = 0; k < s.dim(); ++k) {
    const CMatrix img = f(unflatten(s.vector(k), in_rows, in_cols));
    if (img.size() != out_ambient) throw DimensionError("map_subspace: image has wrong size");
    imgs.col(k) = flatten(img);
  }
  return span_columns(out_ambient, imgs, tol);
}

/// Hermitian orthogonal complement.
inline Subspace orthogonal_complement(const Subspace& s) {
  const Index m = s.ambient_dim(), k = s.dim();
  if (k == 0) return Subspace::full(m, s.tol());
  if (k == m) return Subspace::zero(m, s.tol());
  Eigen::HouseholderQR<CMatrix> qr(s.basis());
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  return {m, q.rightCols(m - k), s.tol()};
}

/// Null space of a linear map given as a matrix acting on column vectors.
inline Subspace kernel(const CMatrix& a, double tol = kRankTol) {
  const Index m = a.cols();
  if (a.rows() == 0) return Subspace::full(m, tol);
  CMatrix adj = a.adjoint();
  return orthogonal_complement(span_columns(m, adj, tol));
}

/// Column space of a matrix.
inline Subspace range(const CMatrix& a, double tol = kRankTol) { return span_columns(a.rows(), a, tol); }

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("sum: ambient dimensions differ");
  CMatrix gens(a.ambient_dim(), a.dim() + b.dim());
  gens << a.basis(), b.basis();
  return span_columns(a.ambient_dim(), gens, std::max(a.tol(), b.tol()));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("intersect: ambient dimensions differ");
  return orthogonal_complement(sum(orthogonal_complement(a), orthogonal_complement(b)));
}

inline bool contains(const Subspace& s, const CVector& v, double tol = kAngleTol) {
  if (v.size() != s.ambient_dim()) throw DimensionError("contains: dimension mismatch");
  return s.distance(v) <= tol * std::max(1.0, v.norm());
}

// ---------------------------------------------------------------------------
// Pairings

/// <a, f> = sum_i a_i f_i, the (bilinear) duality between l^inf and l^1.
struct BilinearPairing {
  cplx operator()(const CVector& a, const CVector& f) const {
    if (a.size() != f.size()) throw DimensionError("pairing: dimension mismatch");
    return (a.array() * f.array()).sum();
  }
};

/// <T, h> = sum_{x,y} T(x,y) h(y,x) = trace(T h) between operators and
/// trace-class symbols on C^n. Held as the transpose index permutation of the
/// flattened symbol.
class TracePairing {
 public:
  explicit TracePairing(Index n) : n_(n), perm_(static_cast<std::size_t>(n * n)) {
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) perm_[static_cast<std::size_t>(x * n + y)] = y * n + x;
  }
  Index n() const { return n_; }

  /// Flattened transpose of a flattened matrix.
  CVector transposed(const CVector& h) const {
    CVector out(h.size());
    for (std::size_t k = 0; k < perm_.size(); ++k) out(static_cast<Index>(k)) = h(perm_[k]);
    return out;
  }

  cplx operator()(const CVector& t, const CVector& h) const {
    if (t.size() != n_ * n_ || h.size() != n_ * n_) throw DimensionError("trace pairing: dimension mismatch");
    return (t.array() * transposed(h).array()).sum();
  }
  cplx operator()(const CMatrix& t, const CMatrix& h) const { return (*this)(flatten(t), flatten(h)); }

 private:
  Index n_;
  std::vector<Index> perm_;
};

/// {a : <a, f> = 0 for every f in s}. Computed as the Hermitian complement of
/// the conjugated basis.
inline Subspace annihilator(const Subspace& s, BilinearPairing) {
  return orthogonal_complement(Subspace(s.ambient_dim(), s.basis().conjugate(), s.tol()));
}

/// {T : <T, h> = 0 for every h in s}: Hermitian complement of the
/// conjugate-transposed basis symbols.
inline Subspace annihilator(const Subspace& s, const TracePairing& p) {
  if (s.ambient_dim() != p.n() * p.n()) throw DimensionError("annihilator: subspace is not in M_n");
  CMatrix b(s.ambient_dim(), s.dim());
  for (Index i = 0; i < s.dim(); ++i) b.col(i) = p.transposed(s.basis().col(i)).conjugate();
  return orthogonal_complement(Subspace(s.ambient_dim(), std::move(b), s.tol()));
}

// ---------------------------------------------------------------------------
// Subspace comparison

/// Sine of the largest principal angle from `a` into `b`, i.e. how far the
/// unit ball of `a` sticks out of `b`. Zero iff a is contained in b.
inline double containment_gap(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("containment: ambient dimensions differ");
  if (a.dim() == 0) return 0.0;
  CMatrix r = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  if (r.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(r);
  return std::min(1.0, svd.singularValues()(0));
}

/// Largest principal angle (radians) of a inside b.
inline double containment_angle(const Subspace& a, const Subspace& b) { return std::asin(containment_gap(a, b)); }

struct SubspaceCertificate {
  bool holds = false;
  Index dim_a = 0;
  Index dim_b = 0;
  double max_angle = 0.0;
  /// On failure: a unit vector of the larger space far from the smaller one.
  std::optional<CVector> witness;
};

/// Largest principal angle of `a` inside `b` plus a witness direction.
inline SubspaceCertificate inclusion(const Subspace& a, const Subspace& b, double tol = kAngleTol) {
  SubspaceCertificate c;
  c.dim_a = a.dim();
  c.dim_b = b.dim();
  if (a.dim() == 0) {
    c.holds = true;
    return c;
  }
  CMatrix r = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinV);
  c.max_angle = std::asin(std::min(1.0, svd.singularValues()(0)));
  c.holds = c.max_angle < tol;
  if (!c.holds) c.witness = a.basis() * svd.matrixV().col(0);
  return c;
}

/// Subspace equality: equal dimensions and largest principal angle below tol.
inline SubspaceCertificate equal(const Subspace& a, const Subspace& b, double tol = kAngleTol) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("equal: ambient dimensions differ");
  if (a.dim() < b.dim()) {
    SubspaceCertificate c = equal(b, a, tol);
    std::swap(c.dim_a, c.dim_b);
    return c;
  }
  SubspaceCertificate c = inclusion(a, b, tol);
  if (a.dim() != b.dim()) {
    c.holds = false;
    if (!c.witness) {
      // b is (numerically) inside a; any direction of a orthogonal to b witnesses the gap.
      Subspace rest = intersect(a, orthogonal_complement(b));
      if (rest.dim() > 0) c.witness = rest.vector(0);
      c.max_angle = std::max(c.max_angle, std::acos(0.0));
    }
  }
  return c;
}

}  // namespace hbim
