#pragma once

// Fourier duality for finite abelian groups. The dual group is indexed so that
// it mirrors G: after fixing a cyclic decomposition G = <g_1> x ... x <g_k>
// with orders n_i, the element with exponent tuple (a_1..a_k) and the
// character x(prod g_i^{b_i}) = exp(2 pi i sum a_i b_i / n_i) share an index,
// and the multiplication table of the dual group is the table of G.
//
// The hat map is unnormalized, f^(x) = sum_r conj(x(r)) f(r); the unitary
// F = hat / sqrt(n) implements Phi(T) = F T F^* and its predual Psi.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hbim/bimodule.hpp"
#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/linalg.hpp"

namespace hbim {

struct DualGroup {
  /// The dual group itself (same table as G).
  FiniteGroup group;
  std::vector<std::size_t> generators;
  std::vector<std::size_t> factor_orders;
  /// exponents[s] = tuple (a_1..a_k) with s = prod g_i^{a_i}.
  std::vector<std::vector<std::size_t>> exponents;
  /// values(x, s) = x(s): rows are characters, columns group elements.
  CMatrix values;

  std::size_t order() const { return group.order(); }
  CVector character(std::size_t x) const { return values.row(static_cast<Index>(x)).transpose(); }
};

namespace detail {

/// Internal direct product decomposition of an abelian group by backtracking:
/// each new generator must meet the subgroup generated so far trivially.
inline bool cyclic_decomposition(const FiniteGroup& g, std::vector<std::size_t>& gens, std::size_t covered) {
  if (covered == g.order()) return true;
  const auto current = g.generated_subgroup(gens);
  std::vector<std::size_t> candidates;
  for (std::size_t x = 1; x < g.order(); ++x) candidates.push_back(x);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return g.element_order(a) > g.element_order(b); });
  for (std::size_t x : candidates) {
    const std::size_t ord = g.element_order(x);
    if (g.order() % (covered * ord) != 0) continue;
    bool meets = false;
    for (std::size_t p = x, k = 1; k < ord && !meets; p = g.mul(p, x), ++k)
      meets = std::binary_search(current.begin(), current.end(), p);
    if (meets) continue;
    gens.push_back(x);
    if (cyclic_decomposition(g, gens, covered * ord)) return true;
    gens.pop_back();
  }
  return false;
}

}  // namespace detail

/// All characters of an abelian group.
inline DualGroup dual_group(const FiniteGroup& g) {
  if (!g.is_abelian()) throw ConfigError("dual_group: group " + g.name() + " is not abelian");
  std::vector<std::size_t> gens;
  if (!detail::cyclic_decomposition(g, gens, 1)) throw InternalError("no cyclic decomposition found");
  const std::size_t n = g.order(), k = gens.size();
  std::vector<std::size_t> orders(k);
  for (std::size_t i = 0; i < k; ++i) orders[i] = g.element_order(gens[i]);

  std::vector<std::vector<std::size_t>> exps(n);
  std::vector<std::size_t> tuple(k, 0);
  for (std::size_t count = 0; count < n; ++count) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t e = 0; e < tuple[i]; ++e) s = g.mul(s, gens[i]);
    exps[s] = tuple;
    for (std::size_t i = k; i-- > 0;) {  // lexicographic increment
      if (++tuple[i] < orders[i]) break;
      tuple[i] = 0;
    }
  }
  const auto ni = static_cast<Index>(n);
  CMatrix values(ni, ni);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t s = 0; s < n; ++s) {
      double phase = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        phase += static_cast<double>(exps[x][i] * exps[s][i] % orders[i]) / static_cast<double>(orders[i]);
      values(static_cast<Index>(x), static_cast<Index>(s)) = std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
  FiniteGroup dual(g.table(), g.labels(), "dual(" + g.name() + ")");
  return {std::move(dual), std::move(gens), std::move(orders), std::move(exps), std::move(values)};
}

/// f^(x) = sum_r conj(x(r)) f(r).
inline CVector fourier(const DualGroup& d, const CVector& f) {
  if (static_cast<std::size_t>(f.size()) != d.order()) throw DimensionError("fourier: wrong length");
  return d.values.conjugate() * f;
}

/// Unitary F with F f = f^ / sqrt(n).
inline CMatrix fourier_unitary(const DualGroup& d) {
  return d.values.conjugate() / std::sqrt(static_cast<double>(d.order()));
}

/// Phi(T) = F T F^{-1}.
inline CMatrix phi_conjugation(const DualGroup& d, const CMatrix& t) {
  const CMatrix f = fourier_unitary(d);
  return f * t * f.adjoint();
}

inline CMatrix phi_inverse(const DualGroup& d, const CMatrix& t) {
  const CMatrix f = fourier_unitary(d);
  return f.adjoint() * t * f;
}

/// F_2(h)(x, y) = (1/n) sum_{s,t} conj(x(s)) conj(y(t)) h(s, t).
inline CMatrix fourier2(const DualGroup& d, const CMatrix& h) {
  const CMatrix f = fourier_unitary(d);
  return f * h * f.transpose();
}

/// Psi(h)(x, y) = F_2(h)(x, y^-1): the predual of Phi^{-1}.
inline CMatrix psi(const DualGroup& d, const CMatrix& h) {
  const CMatrix f2 = fourier2(d, h);
  CMatrix out(f2.rows(), f2.cols());
  for (std::size_t y = 0; y < d.order(); ++y) out.col(static_cast<Index>(y)) = f2.col(static_cast<Index>(d.group.inv(y)));
  return out;
}

/// The flip u -> (x -> u(x^-1)).
inline CVector flip(const DualGroup& d, const CVector& u) {
  CVector out(u.size());
  for (std::size_t x = 0; x < d.order(); ++x) out(static_cast<Index>(x)) = u(static_cast<Index>(d.group.inv(x)));
  return out;
}

/// (N(u) h)(s, t) = u(t s^-1) h(s, t) on the dual group.
inline CMatrix schur_multiply(const DualGroup& d, const CVector& u, const CMatrix& h) {
  return schur_multiply(d.group, u, h);
}

/// Ideals of A(Gamma) for finite Gamma are spans of delta functions on a subset.
struct DualIdeal {
  std::vector<std::size_t> support;
  Subspace subspace;
};

inline DualIdeal dual_ideal_from_subset(const DualGroup& d, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  const auto n = static_cast<Index>(d.order());
  CMatrix b = CMatrix::Zero(n, static_cast<Index>(subset.size()));
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] >= d.order()) throw ConfigError("dual ideal: character index out of range");
    b(static_cast<Index>(subset[k]), static_cast<Index>(k)) = 1.0;
  }
  return {std::move(subset), Subspace(n, std::move(b))};
}

/// Normalizes an explicit basis to subset form; throws if the span is not
/// closed under pointwise multiplication.
inline DualIdeal dual_ideal_from_basis(const DualGroup& d, std::span<const CVector> basis, double tol = 1e-9) {
  const auto n = static_cast<Index>(d.order());
  const Subspace s = span(n, basis);
  std::vector<std::size_t> support;
  for (Index x = 0; x < n; ++x)
    if (s.dim() > 0 && s.basis().row(x).norm() > tol) support.push_back(static_cast<std::size_t>(x));
  if (static_cast<Index>(support.size()) != s.dim())
    throw ConfigError("subspace is not an ideal of the pointwise algebra on the dual group");
  return dual_ideal_from_subset(d, std::move(support));
}

/// Sat I = span{N(u) E_xy : u in I}; for I = span{delta_x : x in S} this is
/// the span of the matrix units E_ab with b a^-1 in S.
inline Subspace sat(const DualGroup& d, const DualIdeal& ideal) {
  const auto n = static_cast<Index>(d.order());
  std::vector<Index> cols;
  for (std::size_t a = 0; a < d.order(); ++a)
    for (std::size_t b = 0; b < d.order(); ++b)
      if (std::binary_search(ideal.support.begin(), ideal.support.end(), d.group.mul(b, d.group.inv(a))))
        cols.push_back(static_cast<Index>(a) * n + static_cast<Index>(b));
  CMatrix basis = CMatrix::Zero(n * n, static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) basis(cols[k], static_cast<Index>(k)) = 1.0;
  return {n * n, std::move(basis)};
}

/// Sat I by spanning the Schur-multiplied matrix units directly (no support shortcut).
inline Subspace sat_by_generators(const DualGroup& d, const Subspace& ideal) {
  const auto n = static_cast<Index>(d.order());
  std::vector<CMatrix> gens;
  for (Index k = 0; k < ideal.dim(); ++k)
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) {
        CMatrix e = CMatrix::Zero(n, n);
        e(a, b) = 1.0;
        gens.push_back(schur_multiply(d, ideal.vector(k), e));
      }
  return span_matrices(gens, n, n);
}

/// Coefficients c with T = sum_x c_x lambda_x, read off column e; also returns
/// how far T is from VN(Gamma).
inline std::pair<CVector, double> vn_coefficients(const FiniteGroup& g, const CMatrix& t) {
  const CVector c = t.col(0);
  CMatrix rebuilt = CMatrix::Zero(t.rows(), t.cols());
  for (std::size_t x = 0; x < g.order(); ++x) rebuilt += c(static_cast<Index>(x)) * left_regular(g, x);
  return {c, max_abs(rebuilt - t)};
}

/// D_Gamma-bimodule generated by I^perp in VN(Gamma) (the annihilator under
/// <lambda_x, u>_A = u(x)).
inline Subspace bim_masa(const DualGroup& d, const DualIdeal& ideal, double tol = kRankTol) {
  const auto n = static_cast<Index>(d.order());
  const Subspace coeffs = annihilator(ideal.subspace, BilinearPairing{});
  std::vector<CMatrix> gens;
  for (Index k = 0; k < coeffs.dim(); ++k) {
    CMatrix a = CMatrix::Zero(n, n);
    for (std::size_t x = 0; x < d.order(); ++x) a += coeffs.basis()(static_cast<Index>(x), k) * left_regular(d.group, x);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        if (a(r, c) == 0.0) continue;
        CMatrix e = CMatrix::Zero(n, n);
        e(r, c) = a(r, c);  // M_{delta_r} A M_{delta_c}
        gens.push_back(std::move(e));
      }
  }
  return span_matrices(gens, n, n, tol);
}

/// max |Psi(theta(f)(h)) - N(flip(f^)) Psi(h)|.
inline double verify_lemma_psi(const FiniteGroup& g, const DualGroup& d, const CVector& f, const CMatrix& h) {
  const CMatrix lhs = psi(d, theta_predual(g, f).apply(h));
  const CMatrix rhs = schur_multiply(d, flip(d, fourier(d, f)), psi(d, h));
  return max_abs(lhs - rhs);
}

/// |<Phi(M_g), flip(f^)>_A - sum_s g(s) f(s)|, plus the distance of Phi(M_g)
/// from VN(Gamma).
inline double pairing_identity_residual(const DualGroup& d, const CVector& f, const CVector& g) {
  const auto [c, off_vn] = vn_coefficients(d.group, phi_conjugation(d, diag(g)));
  const cplx lhs = (c.array() * flip(d, fourier(d, f)).array()).sum();
  const cplx rhs = (g.array() * f.array()).sum();
  return std::max(std::abs(lhs - rhs), off_vn);
}

/// The ideal J of l^1(G) with flip(J^) = I: J = span{conj(x) : x in S}.
inline LeftIdeal ideal_for_dual(const FiniteGroup& g, const DualGroup& d, const DualIdeal& ideal) {
  std::vector<CVector> gens;
  for (std::size_t x : ideal.support) gens.push_back(d.character(x).conjugate());
  std::string label = "I=delta_S S=[";
  for (std::size_t k = 0; k < ideal.support.size(); ++k)
    label += std::to_string(ideal.support[k]) + (k + 1 < ideal.support.size() ? "," : "");
  return {span(static_cast<Index>(g.order()), gens), IdealSource::Explicit, label + "]"};
}

/// (Sat I)^perp = Bim_D(I^perp) on the dual group, cross-checked against the
/// group-side duality transported by Phi and Psi.
inline Report verify_theorem21(const FiniteGroup& g, const DualGroup& d, const DualIdeal& ideal,
                               const VerifyOptions& o = {}) {
  const auto n = static_cast<Index>(g.order());
  const LeftIdeal j = ideal_for_dual(g, d, ideal);
  Report r = detail::make_report("theorem21", g, j.label, o);
  r.pass = true;

  const Subspace sat_i = sat(d, ideal);
  const Subspace sat_perp = annihilator(sat_i, TracePairing(n));
  const Subspace bim_d = bim_masa(d, ideal, o.rank_tol);
  detail::absorb(r, "(Sat I)_perp = Bim_D(I_perp)", equal(sat_perp, bim_d, o.angle_tol));
  detail::absorb(r, "Sat I by support = Sat I by generators", equal(sat_i, sat_by_generators(d, ideal.subspace), o.angle_tol));

  // flip(J^) = I
  std::vector<CVector> hats;
  for (Index k = 0; k < j.subspace.dim(); ++k) hats.push_back(flip(d, fourier(d, j.subspace.vector(k))));
  detail::absorb(r, "flip(J^) = I", equal(span(n, hats, o.rank_tol), ideal.subspace, o.angle_tol));

  const Subspace jp = annihilator_ideal(j);
  const Subspace rp = ran_perp(g, j, o.rank_tol);
  const Subspace bim_g = bim(g, jp, o.rank_tol).subspace;
  detail::absorb(r, "(Ran J)_perp = Bim(J_perp)", equal(rp, bim_g, o.angle_tol));

  auto phi = [&](const CMatrix& t) { return phi_conjugation(d, t); };
  auto psi_map = [&](const CMatrix& h) { return psi(d, h); };
  const Subspace psi_ran = map_subspace(ran(g, j, o.rank_tol).subspace, n, n, psi_map, n * n, o.rank_tol);
  const Subspace phi_rp = map_subspace(rp, n, n, phi, n * n, o.rank_tol);
  detail::absorb(r, "Psi(Ran J) = Sat I", equal(psi_ran, sat_i, o.angle_tol));
  detail::absorb(r, "Phi((Ran J)_perp) = Psi(Ran J)_perp",
                 equal(phi_rp, annihilator(psi_ran, TracePairing(n)), o.angle_tol));
  detail::absorb(r, "Phi(J_perp) = I_perp",
                 equal(map_subspace(multiplication_operators(jp), n, n, phi, n * n, o.rank_tol),
                       map_subspace(annihilator(ideal.subspace, BilinearPairing{}), n, 1,
                                    [&](const CMatrix& c) {
                                      CMatrix a = CMatrix::Zero(n, n);
                                      for (std::size_t x = 0; x < g.order(); ++x)
                                        a += c(static_cast<Index>(x), 0) * left_regular(d.group, x);
                                      return a;
                                    },
                                    n * n, o.rank_tol),
                       o.angle_tol));
  detail::absorb(r, "Phi(Bim(J_perp)) = Bim_D(I_perp)", equal(map_subspace(bim_g, n, n, phi, n * n, o.rank_tol), bim_d, o.angle_tol));
  r.dims = {{"I", ideal.subspace.dim()}, {"Sat_I", sat_i.dim()}, {"Sat_perp", sat_perp.dim()},
            {"Bim_D", bim_d.dim()}, {"J", j.subspace.dim()}, {"Ran_perp", rp.dim()}};
  return r;
}

}  // namespace hbim
