#pragma once

// VN(G)-bimodules generated by multiplication operators, saturations of left
// ideals inside the trace class, their annihilators, diagonal decompositions,
// and the verifiers for the duality (Ran J)^perp = Bim(J^perp) and its
// consequences for jointly harmonic operators.
//
// Everything is finite-dimensional, so closed spans are plain spans and the
// generating families can be reduced by linearity:
//   Bim(U) = span{lambda_s M_a lambda_t : a in a basis of U, s, t in G}
//     (VN(G) is the span of the lambda_s);
//   Ran J  = span{theta(f)(E_xy) : f in a basis of J, E_xy matrix units}.

#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/linalg.hpp"
#include "hbim/report.hpp"
#include "hbim/rep_theory.hpp"

namespace hbim {

struct BimSpace {
  Subspace subspace;  // inside M_n, flattened
  Index symbol_count = 0;
  std::size_t pair_count = 0;
};

struct RanSpace {
  Subspace subspace;  // inside T(G) = M_n, flattened
  Index generator_count = 0;
};

/// Short textual rendering of a vector for report witnesses.
inline std::string describe_vector(const CVector& v, Index limit = 16) {
  std::string out = "[";
  char buf[64];
  for (Index i = 0; i < std::min(limit, v.size()); ++i) {
    std::snprintf(buf, sizeof buf, "[%.6g,%.6g]", v(i).real(), v(i).imag());
    out += buf;
    if (i + 1 < std::min(limit, v.size())) out += ",";
  }
  if (v.size() > limit) out += ",...";
  return out + "]";
}

/// lambda_s M_a lambda_t, which has entry a(ty) at position (sty, y).
inline CMatrix bim_generator(const FiniteGroup& g, std::size_t s, const CVector& a, std::size_t t) {
  const auto n = static_cast<Index>(g.order());
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t y = 0; y < g.order(); ++y) {
    const std::size_t ty = g.mul(t, y);
    m(static_cast<Index>(g.mul(s, ty)), static_cast<Index>(y)) = a(static_cast<Index>(ty));
  }
  return m;
}

/// The VN(G)-bimodule generated by {M_a : a in U}.
inline BimSpace bim(const FiniteGroup& g, const Subspace& u, double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  if (u.ambient_dim() != n) throw DimensionError("bim: symbol space must live in l^inf(G)");
  CMatrix gens(n * n, u.dim() * n * n);
  Index col = 0;
  for (Index k = 0; k < u.dim(); ++k) {
    const CVector a = u.vector(k);
    for (std::size_t s = 0; s < g.order(); ++s)
      for (std::size_t t = 0; t < g.order(); ++t) gens.col(col++) = flatten(bim_generator(g, s, a, t));
  }
  return {span_columns(n * n, gens, tol), u.dim(), g.order() * g.order()};
}

/// Ran J = span{theta(f)(h) : f in J, h in T(G)}; theta(f)(E_xy) has entry
/// f(r) at position (xr, yr).
inline RanSpace ran(const FiniteGroup& g, const LeftIdeal& j, double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  const Subspace& js = j.subspace;
  if (js.ambient_dim() != n) throw DimensionError("ran: ideal must live in l^1(G)");
  CMatrix gens = CMatrix::Zero(n * n, js.dim() * n * n);
  Index col = 0;
  for (Index k = 0; k < js.dim(); ++k)
    for (std::size_t x = 0; x < g.order(); ++x)
      for (std::size_t y = 0; y < g.order(); ++y, ++col)
        for (std::size_t r = 0; r < g.order(); ++r)
          gens(static_cast<Index>(g.mul(x, r)) * n + static_cast<Index>(g.mul(y, r)), col) +=
              js.basis()(static_cast<Index>(r), k);
  return {span_columns(n * n, gens, tol), col};
}

/// (Ran J)^perp as the annihilator of Ran J under the trace pairing.
inline Subspace ran_perp_by_annihilator(const FiniteGroup& g, const LeftIdeal& j, double tol = kRankTol) {
  return annihilator(ran(g, j, tol).subspace, TracePairing(static_cast<Index>(g.order())));
}

/// (Ran J)^perp as the joint kernel of Theta(f), f ranging over a basis of J.
inline Subspace ran_perp_by_kernels(const FiniteGroup& g, const LeftIdeal& j, double tol = kRankTol) {
  const auto n = static_cast<Index>(g.order());
  const Index m = n * n;
  const Subspace& js = j.subspace;
  CMatrix stacked(m * js.dim(), m);
  for (Index k = 0; k < js.dim(); ++k) stacked.middleRows(k * m, m) = theta(g, CVector(js.vector(k))).matrix;
  return kernel(stacked, tol);
}

/// (Ran J)^perp computed by both routes; throws InternalError if they
/// disagree beyond `guard_tol`, which is independent of any theorem tolerance.
inline Subspace ran_perp(const FiniteGroup& g, const LeftIdeal& j, double tol = kRankTol,
                         double guard_tol = kAngleTol) {
  Subspace a = ran_perp_by_annihilator(g, j, tol);
  const Subspace b = ran_perp_by_kernels(g, j, tol);
  const auto cert = equal(a, b, guard_tol);
  if (!cert.holds)
    throw InternalError("(Ran J)^perp: annihilator and kernel routes disagree (dims " + std::to_string(cert.dim_a) +
                        " vs " + std::to_string(cert.dim_b) + ", angle " + std::to_string(cert.max_angle) + ")");
  return a;
}

// ---------------------------------------------------------------------------
// Diagonals and the masa

/// D_t(X) = lambda_t D(lambda_{t^-1} X): keeps the entries at positions (ts, s).
inline CMatrix diagonal_part(const FiniteGroup& g, const CMatrix& x, GroupElement t) {
  const auto n = static_cast<Index>(g.order());
  if (x.rows() != n || x.cols() != n) throw DimensionError("diagonal_part: operator has wrong size");
  g.element(t.index);
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t s = 0; s < g.order(); ++s) {
    const auto row = static_cast<Index>(g.mul(t.index, s));
    out(row, static_cast<Index>(s)) = x(row, static_cast<Index>(s));
  }
  return out;
}

/// Schur multiplication by N(u)(s, r) = u(r s^-1).
inline CMatrix schur_multiply(const FiniteGroup& g, const CVector& u, const CMatrix& x) {
  const auto n = static_cast<Index>(g.order());
  if (u.size() != n || x.rows() != n || x.cols() != n) throw DimensionError("schur_multiply: size mismatch");
  CMatrix out(n, n);
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t r = 0; r < g.order(); ++r)
      out(static_cast<Index>(s), static_cast<Index>(r)) =
          u(static_cast<Index>(g.mul(r, g.inv(s)))) * x(static_cast<Index>(s), static_cast<Index>(r));
  return out;
}

/// The diagonal masa D = {M_phi} as a subspace of M_n.
inline Subspace diagonal_masa(Index n) {
  CMatrix b = CMatrix::Zero(n * n, n);
  for (Index s = 0; s < n; ++s) b(s * n + s, s) = 1.0;
  return {n * n, std::move(b)};
}

/// {M_a : a in U} as a subspace of M_n.
inline Subspace multiplication_operators(const Subspace& u) {
  const Index n = u.ambient_dim();
  CMatrix b = CMatrix::Zero(n * n, u.dim());
  for (Index k = 0; k < u.dim(); ++k)
    for (Index s = 0; s < n; ++s) b(s * n + s, k) = u.basis()(s, k);
  return {n * n, std::move(b), u.tol()};
}

/// Largest distance of lambda_s B or B lambda_s from S, over basis vectors B
/// and all s. Zero iff S is a VN(G)-bimodule.
inline double bimodule_defect(const FiniteGroup& g, const Subspace& s) {
  const auto n = static_cast<Index>(g.order());
  double worst = 0.0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const CMatrix l = left_regular(g, x);
    for (Index k = 0; k < s.dim(); ++k) {
      const CMatrix b = unflatten(s.vector(k), n, n);
      worst = std::max(worst, s.distance(flatten(l * b)));
      worst = std::max(worst, s.distance(flatten(b * l)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Verifiers

struct VerifyOptions {
  double rank_tol = kRankTol;
  double angle_tol = kAngleTol;
  std::uint64_t seed = 0;
};

namespace detail {

inline Report make_report(const char* id, const FiniteGroup& g, std::string spec, const VerifyOptions& o) {
  Report r;
  r.theorem_id = id;
  r.group = g.name();
  r.ideal_spec = std::move(spec);
  r.seed = o.seed;
  r.tol = o.angle_tol;
  return r;
}

inline void absorb(Report& r, const std::string& what, const SubspaceCertificate& c) {
  r.max_principal_angle = std::max(r.max_principal_angle, c.max_angle);
  r.residuals["angle:" + what] = c.max_angle;
  if (!c.holds) {
    r.pass = false;
    if (r.witness.empty())
      r.witness = what + ": dims " + std::to_string(c.dim_a) + " vs " + std::to_string(c.dim_b) +
                  (c.witness ? ", direction " + describe_vector(*c.witness) : std::string());
  }
}

}  // namespace detail

/// Bim(J^perp) is contained in (Ran J)^perp.
inline Report verify_inclusion(const FiniteGroup& g, const LeftIdeal& j, const VerifyOptions& o = {}) {
  Report r = detail::make_report("inclusion", g, j.label, o);
  const Subspace jp = annihilator_ideal(j);
  const BimSpace b = bim(g, jp, o.rank_tol);
  const Subspace rp = ran_perp(g, j, o.rank_tol);
  r.dims = {{"J", j.subspace.dim()}, {"J_perp", jp.dim()}, {"Bim", b.subspace.dim()}, {"Ran_perp", rp.dim()}};
  r.pass = true;
  detail::absorb(r, "Bim(J_perp) in (Ran J)_perp", inclusion(b.subspace, rp, o.angle_tol));
  return r;
}

/// (Ran J)^perp = Bim(J^perp), with the dimension duality of the pairing.
inline Report verify_main_theorem(const FiniteGroup& g, const LeftIdeal& j, const VerifyOptions& o = {}) {
  Report r = detail::make_report("main-duality", g, j.label, o);
  const auto n = static_cast<long long>(g.order());
  const Subspace jp = annihilator_ideal(j);
  const BimSpace b = bim(g, jp, o.rank_tol);
  const RanSpace rs = ran(g, j, o.rank_tol);
  const Subspace rp = ran_perp(g, j, o.rank_tol);
  r.dims = {{"J", j.subspace.dim()}, {"J_perp", jp.dim()}, {"Bim", b.subspace.dim()},
            {"Ran", rs.subspace.dim()}, {"Ran_perp", rp.dim()}};
  r.pass = rs.subspace.dim() + rp.dim() == n * n && j.subspace.dim() + jp.dim() == n;
  if (!r.pass) r.notes.push_back("dimension duality failed");
  detail::absorb(r, "(Ran J)_perp = Bim(J_perp)", equal(rp, b.subspace, o.angle_tol));
  return r;
}

/// Bim(J^perp) cap D = (Ran J)^perp cap D = {M_a : a in J^perp}.
inline Report verify_masa_slice(const FiniteGroup& g, const LeftIdeal& j, const VerifyOptions& o = {}) {
  Report r = detail::make_report("masa-slice", g, j.label, o);
  const auto n = static_cast<Index>(g.order());
  const Subspace d = diagonal_masa(n);
  const Subspace jp = annihilator_ideal(j);
  const Subspace mj = multiplication_operators(jp);
  const Subspace bd = intersect(bim(g, jp, o.rank_tol).subspace, d);
  const Subspace rd = intersect(ran_perp(g, j, o.rank_tol), d);
  r.dims = {{"J_perp", jp.dim()}, {"Bim_cap_D", bd.dim()}, {"Ran_perp_cap_D", rd.dim()}};
  r.pass = true;
  detail::absorb(r, "Bim cap D = J_perp", equal(bd, mj, o.angle_tol));
  detail::absorb(r, "(Ran J)_perp cap D = J_perp", equal(rd, mj, o.angle_tol));
  return r;
}

/// J(E)^perp = span{conj(pi_ij) : j >= s_pi}, and dim J(E)^perp = |G| - sum d_pi s_pi.
inline Report verify_je_perp(const FiniteGroup& g, std::span<const Irrep> irreps, std::span<const std::size_t> splits,
                             const VerifyOptions& o = {}) {
  const LeftIdeal j = ideal_from_subspaces(g, irreps, splits, o.rank_tol);
  Report r = detail::make_report("je-perp", g, j.label, o);
  std::vector<CVector> gens;
  long long used = 0;
  for (std::size_t p = 0; p < irreps.size(); ++p) {
    used += static_cast<long long>(irreps[p].dim * splits[p]);
    for (std::size_t i = 0; i < irreps[p].dim; ++i)
      for (std::size_t c = splits[p]; c < irreps[p].dim; ++c)
        gens.push_back(coefficient_function(irreps[p], i, c).conjugate());
  }
  const auto n = static_cast<Index>(g.order());
  const Subspace s = span(n, gens, o.rank_tol);
  const Subspace jp = annihilator_ideal(j);
  r.dims = {{"J", j.subspace.dim()}, {"J_perp", jp.dim()}, {"span_S", s.dim()},
            {"expected_J_perp", static_cast<long long>(n) - used}};
  r.pass = jp.dim() == static_cast<long long>(n) - used;
  if (!r.pass) r.notes.push_back("dimension identity failed");
  detail::absorb(r, "J(E)_perp = span S", equal(jp, s, o.angle_tol));
  return r;
}

/// H~(Lambda) = (Ran J_Lambda)^perp = Bim(H(Lambda)).
inline Report verify_joint_harmonic(const FiniteGroup& g, std::span<const MeasureVec> lambda, std::string spec,
                                    const VerifyOptions& o = {}) {
  Report r = detail::make_report("joint-harmonic", g, std::move(spec), o);
  for (const auto& mu : lambda)
    if (!preserves_constants(mu)) {
      r.notes.push_back("Lambda contains a measure with P_mu(1) != 1");
      break;
    }
  const Subspace ht = harmonic_operators(g, lambda, o.rank_tol);
  const Subspace h = harmonic_functions(g, lambda, o.rank_tol);
  const LeftIdeal j = ideal_from_measures(g, lambda, "J_Lambda", o.rank_tol);
  const Subspace rp = ran_perp(g, j, o.rank_tol);
  const BimSpace b = bim(g, h, o.rank_tol);
  r.dims = {{"H", h.dim()}, {"H_tilde", ht.dim()}, {"J_Lambda", j.subspace.dim()}, {"Ran_perp", rp.dim()},
            {"Bim_H", b.subspace.dim()}};
  r.pass = true;
  detail::absorb(r, "H(Lambda) = J_Lambda_perp", equal(h, annihilator_ideal(j), o.angle_tol));
  detail::absorb(r, "H~ = (Ran J_Lambda)_perp", equal(ht, rp, o.angle_tol));
  detail::absorb(r, "H~ = Bim(H)", equal(ht, b.subspace, o.angle_tol));
  return r;
}

}  // namespace hbim
