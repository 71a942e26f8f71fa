#pragma once

// The noncommutative Poisson boundary of a probability measure on a finite
// group: the projection E onto the harmonic operators, the Choi-Effros
// product, and the crossed-product picture obtained from the fundamental
// unitary V.
//
// Tensor legs: C^n (x) C^n is indexed by (s, t) -> s*n + t. The first leg is
// the new L^2(G) of the crossed product, (V xi)(s, t) = xi(st, t).

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hbim/bimodule.hpp"
#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/linalg.hpp"
#include "hbim/random.hpp"
#include "hbim/report.hpp"

namespace hbim {

struct ConditionalExpectation {
  SuperOperator superop;
  /// H~(mu) = ker(id - Theta(mu)).
  Subspace fixed_space;
  /// range(id - Theta(mu)).
  Subspace complement;
  /// Smallest singular value of [ker | range] with orthonormal blocks.
  double separation = 0.0;
  /// Eigenvalues of Theta(mu) of modulus one other than 1 (empty when not computed).
  std::vector<cplx> peripheral;
  bool peripheral_computed = false;

  CMatrix apply(const CMatrix& t) const { return superop.apply(t); }
};

inline void require_probability(const MeasureVec& mu, const char* what) {
  mu.validate();
  if (!mu.probability) throw ConfigError(std::string(what) + ": measure must be a probability measure");
}

/// Eigenvalues of Theta(mu) on the unit circle away from 1.
inline std::vector<cplx> peripheral_spectrum(const SuperOperator& op, double tol = 1e-7) {
  Eigen::ComplexEigenSolver<CMatrix> eig(op.matrix, false);
  std::vector<cplx> out;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const cplx z = eig.eigenvalues()(i);
    if (std::abs(std::abs(z) - 1.0) < tol && std::abs(z - 1.0) > tol) out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
  return out;
}

/// Largest n for which the peripheral spectrum is computed (dense eigensolve of an n^2 x n^2 matrix).
inline constexpr std::size_t kPeripheralMaxOrder = 16;

/// The projection onto ker(id - Theta(mu)) along range(id - Theta(mu)),
/// obtained from a single linear solve.
inline ConditionalExpectation poisson_projection(const FiniteGroup& g, const MeasureVec& mu, double tol = kRankTol) {
  require_probability(mu, "poisson_projection");
  check_size(g, mu.weights, "measure");
  const auto n = static_cast<Index>(g.order());
  const Index m = n * n;
  SuperOperator th = theta(g, mu);
  const CMatrix a = CMatrix::Identity(m, m) - th.matrix;
  Subspace ker = kernel(a, tol);
  Subspace ran = range(a, tol);
  if (ker.dim() + ran.dim() != m)
    throw InternalError("poisson_projection: dim ker + dim range = " + std::to_string(ker.dim() + ran.dim()) +
                        " differs from " + std::to_string(m));
  CMatrix b(m, m);
  b << ker.basis(), ran.basis();
  Eigen::JacobiSVD<CMatrix> svd(b);
  const double sep = svd.singularValues()(m - 1);
  if (sep < tol) throw InternalError("poisson_projection: kernel and range of id - Theta overlap");
  const CMatrix coords = b.partialPivLu().inverse();
  ConditionalExpectation e{{n, ker.basis() * coords.topRows(ker.dim())}, std::move(ker), std::move(ran), sep, {}, false};
  if (g.order() <= kPeripheralMaxOrder) {
    e.peripheral = peripheral_spectrum(th);
    e.peripheral_computed = true;
  }
  return e;
}

/// Explicit group average T -> (1/|G|) sum_r rho_r T rho_r^*.
inline SuperOperator group_average(const FiniteGroup& g) { return theta(g, MeasureVec::uniform(g.order())); }

struct CesaroCheck {
  std::size_t n_first = 0;
  double gap_first = 0.0;
  double gap_second = 0.0;
  double bound = 0.0;
  bool shrinking = false;
  bool pass = false;
};

inline constexpr double kCesaroRoundoff = 1e-12;

/// Compares E with the Cesaro means C_N = (1/N) sum_{k<N} Theta^k at N and 2N
/// (N a power of two; the sums are built by doubling). Passes when the gap
/// at N is below `bound` and the gap at 2N is smaller still. A gap at roundoff
/// level counts as converged: periodic orbits make C_N exact.
inline CesaroCheck cesaro_validation(const FiniteGroup& g, const MeasureVec& mu, const ConditionalExpectation& e,
                                     std::size_t n_first = 1024, double bound = 1e-6) {
  if (n_first == 0 || (n_first & (n_first - 1)) != 0) throw ConfigError("cesaro_validation: N must be a power of two");
  const CMatrix th = theta(g, mu).matrix;
  const Index m = th.rows();
  CMatrix sum = CMatrix::Identity(m, m);  // S_1
  CMatrix power = th;                     // Theta^1
  CesaroCheck out{n_first, 0.0, 0.0, bound, false, false};
  for (std::size_t count = 1; count < 2 * n_first; count *= 2) {
    sum += power * sum;  // S_{2c} = S_c + Theta^c S_c
    power = power * power;
    if (2 * count == n_first) out.gap_first = max_abs(sum / static_cast<double>(n_first) - e.superop.matrix);
  }
  if (n_first == 1) out.gap_first = max_abs(CMatrix::Identity(m, m) - e.superop.matrix);
  out.gap_second = max_abs(sum / static_cast<double>(2 * n_first) - e.superop.matrix);
  out.shrinking = out.gap_second < out.gap_first || out.gap_first < kCesaroRoundoff;
  out.pass = out.gap_first < bound && out.shrinking;
  return out;
}

/// T <> S = E(TS) for T, S in H~(mu). Arguments within `tol` of H~(mu) are
/// projected onto it first.
inline CMatrix choi_effros(const ConditionalExpectation& e, const CMatrix& t, const CMatrix& s, double tol = 1e-8) {
  auto snap = [&](const CMatrix& x, const char* which) {
    const CVector v = flatten(x);
    if (e.fixed_space.distance(v) > tol * std::max(1.0, v.norm()))
      throw ConfigError(std::string("choi_effros: ") + which + " argument is not a harmonic operator");
    return unflatten(e.fixed_space.project(v), x.rows(), x.cols());
  };
  return e.apply(snap(t, "first") * snap(s, "second"));
}

struct BoundaryAlgebra {
  /// Orthonormal (Hilbert-Schmidt) basis Q_1..Q_k of H~(mu).
  Subspace basis;
  /// left_mult[i](:, j) = coordinates of Q_i <> Q_j.
  std::vector<CMatrix> left_mult;
  /// Coordinates of the identity operator.
  CVector unit;
  /// {M_phi : phi in H(mu)}.
  Subspace harmonic_subalgebra;
  Index center_dim = 0;
  bool commutative = false;
  bool associativity_exhaustive = false;
  std::map<std::string, double> residuals;

  Index dim() const { return basis.dim(); }
  CMatrix element(const CVector& c) const { return unflatten(basis.basis() * c, square_side(basis.ambient_dim()), square_side(basis.ambient_dim())); }
  CVector coords(const CMatrix& x) const { return basis.basis().adjoint() * flatten(x); }
  /// Left multiplication by the element with coordinates c.
  CMatrix left_multiplication(const CVector& c) const {
    CMatrix acc = CMatrix::Zero(dim(), dim());
    for (Index p = 0; p < dim(); ++p) acc += c(p) * left_mult[static_cast<std::size_t>(p)];
    return acc;
  }
  CVector product(const CVector& a, const CVector& b) const { return left_multiplication(a) * b; }
};

/// Number of basis triples above which associativity is checked on a random sample.
inline constexpr std::size_t kExhaustiveTriples = 50000;
inline constexpr std::size_t kSampledTriples = 4096;

/// Structure constants of (H~(mu), <>) with certificates for associativity,
/// unit, involution, positivity and the closure of H(mu).
inline BoundaryAlgebra boundary_algebra(const FiniteGroup& g, const MeasureVec& mu, const ConditionalExpectation& e,
                                        std::uint64_t seed = 0, double tol = 1e-8) {
  const auto n = static_cast<Index>(g.order());
  const Index k = e.fixed_space.dim();
  const CMatrix& q = e.fixed_space.basis();
  BoundaryAlgebra alg;
  alg.basis = e.fixed_space;
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) ops.push_back(unflatten(q.col(i), n, n));

  // All products at once: column i*k + j is flatten(Q_i Q_j).
  CMatrix prods(n * n, k * k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) prods.col(i * k + j) = flatten(ops[static_cast<std::size_t>(i)] * ops[static_cast<std::size_t>(j)]);
  const CMatrix c = q.adjoint() * (e.superop.matrix * prods);
  alg.left_mult.assign(static_cast<std::size_t>(k), CMatrix(k, k));
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) alg.left_mult[static_cast<std::size_t>(i)].col(j) = c.col(i * k + j);
  alg.unit = alg.coords(CMatrix::Identity(n, n));

  // Unit.
  const CMatrix lu = alg.left_multiplication(alg.unit);
  double right_unit = 0.0;
  for (Index i = 0; i < k; ++i)
    right_unit = std::max(right_unit, (alg.left_mult[static_cast<std::size_t>(i)] * alg.unit - CMatrix::Identity(k, k).col(i)).cwiseAbs().maxCoeff());
  alg.residuals["unit"] = std::max(k ? max_abs(lu - CMatrix::Identity(k, k)) : 0.0, right_unit);
  alg.residuals["unit_in_fixed_space"] = e.fixed_space.distance(flatten(CMatrix::Identity(n, n)));

  // Associativity: (e_i <> e_j) <> e_l = e_i <> (e_j <> e_l).
  Rng rng(seed);
  const auto triples = static_cast<std::size_t>(k) * static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
  alg.associativity_exhaustive = triples <= kExhaustiveTriples;
  double assoc = 0.0;
  std::string witness;
  // right[l](:, p) = coordinates of Q_p <> Q_l.
  std::vector<CMatrix> right(static_cast<std::size_t>(k), CMatrix(k, k));
  for (Index l = 0; l < k; ++l)
    for (Index p = 0; p < k; ++p) right[static_cast<std::size_t>(l)].col(p) = c.col(p * k + l);
  auto check_triple = [&](Index i, Index j, Index l) {
    const CVector lhs = right[static_cast<std::size_t>(l)] * c.col(i * k + j);
    const CVector rhs = alg.left_mult[static_cast<std::size_t>(i)] * c.col(j * k + l);
    const double r = (lhs - rhs).cwiseAbs().maxCoeff();
    if (r > assoc) {
      assoc = r;
      witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(l) + ")";
    }
  };
  if (k > 0) {
    if (alg.associativity_exhaustive) {
      for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
          for (Index l = 0; l < k; ++l) check_triple(i, j, l);
    } else {
      const auto kk = static_cast<std::size_t>(k);
      for (std::size_t t = 0; t < kSampledTriples; ++t)
        check_triple(static_cast<Index>(uniform_index(rng, kk)), static_cast<Index>(uniform_index(rng, kk)),
                     static_cast<Index>(uniform_index(rng, kk)));
    }
  }
  alg.residuals["associativity"] = assoc;
  if (assoc > tol) throw InternalError("boundary_algebra: associativity fails at basis triple " + witness);

  // Involution: (T <> S)^* = S^* <> T^* on random elements.
  double invol = 0.0;
  for (int t = 0; t < 8 && k > 0; ++t) {
    const CMatrix a = alg.element(random_vector(rng, k)), b = alg.element(random_vector(rng, k));
    invol = std::max(invol, max_abs(choi_effros(e, a, b).adjoint() - choi_effros(e, b.adjoint(), a.adjoint())));
  }
  alg.residuals["involution"] = invol;

  // Positivity: the spectrum of T^* <> T in the algebra lies in [0, inf).
  double pos = 0.0;
  for (int t = 0; t < 4 && k > 0; ++t) {
    const CMatrix a = alg.element(random_vector(rng, k));
    const CMatrix lm = alg.left_multiplication(alg.coords(choi_effros(e, a.adjoint(), a)));
    Eigen::ComplexEigenSolver<CMatrix> eig(lm, false);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    for (Index i = 0; i < k; ++i) {
      const cplx z = eig.eigenvalues()(i);
      pos = std::max({pos, -z.real() / scale, std::abs(z.imag()) / scale});
    }
  }
  alg.residuals["positivity"] = pos;

  // Center: x with x <> e_i = e_i <> x for all i.
  if (k > 0) {
    CMatrix stacked(k * k, k);
    for (Index i = 0; i < k; ++i)
      for (Index p = 0; p < k; ++p)
        stacked.block(i * k, p, k, 1) = c.col(p * k + i) - c.col(i * k + p);
    // Rank relative to the structure constants, not to the commutators (which vanish when commutative).
    Eigen::JacobiSVD<CMatrix> svd(stacked);
    const double cutoff = 1e-9 * std::max(1.0, max_abs(c));
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > cutoff ? 1 : 0;
    alg.center_dim = k - rank;
    alg.commutative = max_abs(stacked) < tol;
  }

  // H(mu) is closed under <>.
  const MeasureVec lambda[] = {mu};
  alg.harmonic_subalgebra = multiplication_operators(harmonic_functions(g, lambda));
  double closure = 0.0;
  const CMatrix& hb = alg.harmonic_subalgebra.basis();
  for (Index i = 0; i < hb.cols(); ++i)
    for (Index j = 0; j < hb.cols(); ++j) {
      const CMatrix p = choi_effros(e, unflatten(hb.col(i), n, n), unflatten(hb.col(j), n, n));
      closure = std::max(closure, alg.harmonic_subalgebra.distance(flatten(p)));
    }
  alg.residuals["harmonic_closure"] = closure;
  return alg;
}

// ---------------------------------------------------------------------------
// Crossed product

/// (alpha_s phi)(t) = phi(s^-1 t).
inline FunctionVec alpha(const FiniteGroup& g, GroupElement s, const FunctionVec& phi) {
  check_size(g, phi, "function");
  return left_regular(g, s) * phi;
}

/// (V xi)(s, t) = xi(st, t).
inline CMatrix fundamental_unitary(const FiniteGroup& g) {
  const auto n = static_cast<Index>(g.order());
  CMatrix v = CMatrix::Zero(n * n, n * n);
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      v(static_cast<Index>(s) * n + static_cast<Index>(t), static_cast<Index>(g.mul(s, t)) * n + static_cast<Index>(t)) = 1.0;
  return v;
}

/// Gamma~(T) = V (T (x) I) V^*, entrywise T(st, s't) on the block t = t'.
inline CMatrix gamma_tilde(const FiniteGroup& g, const CMatrix& t) {
  const auto n = static_cast<Index>(g.order());
  if (t.rows() != n || t.cols() != n) throw DimensionError("gamma_tilde: operator has wrong size");
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t sp = 0; sp < g.order(); ++sp)
      for (std::size_t y = 0; y < g.order(); ++y)
        out(static_cast<Index>(s) * n + static_cast<Index>(y), static_cast<Index>(sp) * n + static_cast<Index>(y)) =
            t(static_cast<Index>(g.mul(s, y)), static_cast<Index>(g.mul(sp, y)));
  return out;
}

/// First-leg compression of V^* T' V at t = e, together with the distance of
/// T' from the image of Gamma~.
inline std::pair<CMatrix, double> gamma_tilde_inverse(const FiniteGroup& g, const CMatrix& tp) {
  const auto n = static_cast<Index>(g.order());
  if (tp.rows() != n * n || tp.cols() != n * n) throw DimensionError("gamma_tilde_inverse: operator has wrong size");
  const CMatrix v = fundamental_unitary(g);
  const CMatrix x = v.adjoint() * tp * v;
  CMatrix t(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) t(a, b) = x(a * n, b * n);
  return {t, max_abs(gamma_tilde(g, t) - tp)};
}

/// alpha~(phi): diagonal with entry phi(st) at (s, t), i.e. block s is M_{alpha_{s^-1} phi}.
inline CMatrix alpha_tilde(const FiniteGroup& g, const FunctionVec& phi) {
  check_size(g, phi, "function");
  const auto n = static_cast<Index>(g.order());
  CVector d(n * n);
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      d(static_cast<Index>(s) * n + static_cast<Index>(t)) = phi(static_cast<Index>(g.mul(s, t)));
  return diag(d);
}

inline CMatrix lambda_tilde(const FiniteGroup& g, GroupElement s) {
  const auto n = static_cast<Index>(g.order());
  return kron(left_regular(g, s), CMatrix::Identity(n, n));
}

struct CrossedProduct {
  /// Subspace of M_{n^2}, flattened (ambient n^4).
  Subspace subspace;
  /// (basis index of H(mu), group element) for every generator alpha~(phi) lambda~_s.
  std::vector<std::pair<Index, std::size_t>> generators;
};

/// span{alpha~(phi) lambda~_s : phi in a basis of H(mu), s in G}.
inline CrossedProduct crossed_product(const FiniteGroup& g, const MeasureVec& mu, double tol = kRankTol) {
  require_probability(mu, "crossed_product");
  const auto n = static_cast<Index>(g.order());
  const MeasureVec lambda[] = {mu};
  const Subspace h = harmonic_functions(g, lambda, tol);
  CrossedProduct cp;
  CMatrix gens(n * n * n * n, h.dim() * n);
  for (Index k = 0; k < h.dim(); ++k) {
    const CMatrix at = alpha_tilde(g, h.vector(k));
    for (std::size_t s = 0; s < g.order(); ++s) {
      gens.col(k * n + static_cast<Index>(s)) = flatten(at * lambda_tilde(g, GroupElement{s}));
      cp.generators.emplace_back(k, s);
    }
  }
  cp.subspace = span_columns(n * n * n * n, gens, tol);
  return cp;
}

namespace detail {

inline void residual_check(Report& r, const std::string& what, double value, double tol) {
  r.residuals[what] = value;
  if (!(value <= tol)) {
    r.pass = false;
    if (r.witness.empty()) r.witness = what + " residual " + std::to_string(value);
  }
}

}  // namespace detail

/// Gamma~ maps (H~(mu), <>) onto the crossed product G x_alpha H(mu):
/// (i) Gamma~(Bim(H(mu))) = crossed product; (ii) Gamma~ is injective on
/// H~(mu) with image the crossed product; (iii) Gamma~(T <> S) =
/// E'(Gamma~(T) Gamma~(S)) with E' = Gamma~ E Gamma~^-1; (iv) Gamma~(T^*) = Gamma~(T)^*.
inline Report verify_cross_iso(const FiniteGroup& g, const MeasureVec& mu, std::string spec, const VerifyOptions& o = {}) {
  const auto n = static_cast<Index>(g.order());
  Report r = detail::make_report("cross-iso", g, std::move(spec), o);
  r.pass = true;
  const ConditionalExpectation e = poisson_projection(g, mu, o.rank_tol);
  const MeasureVec lambda[] = {mu};
  const Subspace h = harmonic_functions(g, lambda, o.rank_tol);
  const CrossedProduct cp = crossed_product(g, mu, o.rank_tol);
  auto gt = [&](const CMatrix& t) { return gamma_tilde(g, t); };
  const Index big = n * n * n * n;

  const Subspace bim_h = bim(g, h, o.rank_tol).subspace;
  detail::absorb(r, "(i) Gamma(Bim(H)) = crossed product", equal(map_subspace(bim_h, n, n, gt, big, o.rank_tol), cp.subspace, o.angle_tol));

  const Subspace image = map_subspace(e.fixed_space, n, n, gt, big, o.rank_tol);
  detail::absorb(r, "(ii) Gamma(H~) = crossed product", equal(image, cp.subspace, o.angle_tol));
  if (image.dim() != e.fixed_space.dim()) {
    r.pass = false;
    if (r.witness.empty()) r.witness = "(ii) Gamma~ is not injective on H~";
  }
  detail::absorb(r, "Bim(H) = H~", equal(bim_h, e.fixed_space, o.angle_tol));

  Rng rng(o.seed);
  const Index k = e.fixed_space.dim();
  double mult = 0.0, adj = 0.0, roundtrip = 0.0;
  for (int t = 0; t < 6 && k > 0; ++t) {
    const CMatrix a = unflatten(e.fixed_space.basis() * random_vector(rng, k), n, n);
    const CMatrix b = unflatten(e.fixed_space.basis() * random_vector(rng, k), n, n);
    const CMatrix ga = gt(a), gb = gt(b);
    const auto [pre, off_image] = gamma_tilde_inverse(g, ga * gb);
    mult = std::max({mult, max_abs(gt(choi_effros(e, a, b)) - gt(e.apply(pre))), off_image});
    adj = std::max(adj, max_abs(gt(a.adjoint()) - ga.adjoint()));
    roundtrip = std::max(roundtrip, max_abs(gamma_tilde_inverse(g, ga).first - a));
  }
  detail::residual_check(r, "(iii) multiplicativity", mult, o.angle_tol);
  detail::residual_check(r, "(iv) adjoint", adj, o.angle_tol);
  detail::residual_check(r, "inverse round trip", roundtrip, o.angle_tol);

  double lambda_res = 0.0;
  for (std::size_t s = 0; s < g.order(); ++s)
    lambda_res = std::max(lambda_res, max_abs(gt(left_regular(g, s)) - lambda_tilde(g, GroupElement{s})));
  detail::residual_check(r, "Gamma(lambda_r) = lambda_r (x) I", lambda_res, o.angle_tol);

  r.dims = {{"H", h.dim()}, {"H_tilde", e.fixed_space.dim()}, {"crossed_product", cp.subspace.dim()},
            {"Gamma_image", image.dim()}};
  if (cp.subspace.dim() != e.fixed_space.dim()) {
    r.pass = false;
    if (r.witness.empty()) r.witness = "dim crossed product differs from dim H~";
  }
  r.notes.push_back("verifies the axioms of one von Neumann structure on H~(mu); uniqueness is not checked");
  if (e.peripheral_computed && !e.peripheral.empty())
    r.notes.push_back("Theta(mu) has " + std::to_string(e.peripheral.size()) + " peripheral eigenvalues other than 1");
  return r;
}

}  // namespace hbim
