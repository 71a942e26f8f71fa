// Acceptance gate: one PASS/FAIL line per criterion, with the measured
// worst-case residuals. Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hbim/hbim.hpp"

namespace {

using namespace hbim;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kEqualityAngle = 1e-8;
constexpr double kSuiteSeconds = 120.0;
constexpr double kLemmaResidual = 1e-10;
constexpr double kPairingResidual = 1e-12;
constexpr double kSchurResidual = 1e-10;
constexpr double kBlockSumResidual = 1e-10;
constexpr double kCommuteResidual = 1e-12;
constexpr double kExpectationResidual = 1e-10;
constexpr double kChoiFloor = -1e-9;
constexpr double kAlgebraResidual = 1e-8;
constexpr double kCesaroBound = 1e-6;
constexpr std::size_t kCesaroN = 1024;
constexpr double kInfraResidual = 1e-10;

constexpr std::uint64_t kSeed = 20240601;

const std::vector<std::string> kCorpus{"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Klein4", "S3", "D4", "Q8", "Z2xZ4"};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Tally {
  std::size_t cases = 0;
  std::size_t failed = 0;
  double worst_angle = 0.0;
  std::string first_failure;

  void add(const Report& r) {
    ++cases;
    worst_angle = std::max(worst_angle, r.max_principal_angle);
    if (!r.pass || !(r.max_principal_angle < kEqualityAngle)) {
      if (failed++ == 0) first_failure = r.theorem_id + " " + r.group + " " + r.ideal_spec + " " + r.witness;
    }
  }
  bool ok() const { return failed == 0; }
};

int failures = 0;

void line(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%d] %s  %s: %s\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void sub(bool pass, const std::string& what) {
  std::printf("      %s %s\n", pass ? "ok  " : "FAIL", what.c_str());
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Tally run_corpus(Theorem th, std::size_t trials) {
  Tally t;
  for (const auto& name : kCorpus) {
    auto ctx = std::make_shared<const GroupContext>(make_builtin(name), kSeed);
    CorpusOptions opt;
    opt.trials = trials;
    opt.seed = kSeed;
    opt.verify = {kRankTol, kEqualityAngle, kSeed};
    for (const auto& r : run_cases(make_cases(ctx, th, opt))) t.add(r);
  }
  return t;
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto start = Clock::now();
  const Tally t = run_corpus(Theorem::MainDuality, 20);
  const double secs = seconds_since(start);
  const bool ok = t.ok() && secs < kSuiteSeconds;
  line(1, ok, "main duality (Ran J)^perp = Bim(J^perp)",
       std::to_string(t.cases) + " ideals, " + std::to_string(t.failed) + " failed, max angle " +
           fmt("%.2e", t.worst_angle) + ", " + fmt("%.1f", secs) + " s (limit 120 s)" +
           (t.ok() ? "" : "; first failure: " + t.first_failure));
}

void criterion2() {
  const Tally t = run_corpus(Theorem::MasaSlice, 20);
  line(2, t.ok(), "masa slice Bim cap D = (Ran J)^perp cap D = J^perp",
       std::to_string(t.cases) + " ideals, " + std::to_string(t.failed) + " failed, max angle " +
           fmt("%.2e", t.worst_angle) + (t.ok() ? "" : "; first failure: " + t.first_failure));
}

void criterion3() {
  Tally t;
  bool dims_exact = true;
  for (const std::string name : {"S3", "D4"}) {
    const FiniteGroup g = make_builtin(name);
    const auto irreps = decompose_regular(g, kSeed);
    for (const auto& s : exhaustive_splits(irreps)) {
      const Report r = verify_je_perp(g, irreps, s, {kRankTol, kEqualityAngle, kSeed});
      dims_exact = dims_exact && r.dims.at("J_perp") == r.dims.at("expected_J_perp");
      t.add(r);
    }
  }
  line(3, t.ok() && dims_exact, "J(E)^perp spanned by conjugate coefficients",
       std::to_string(t.cases) + " split choices over S3 and D4, dimension identity " +
           (dims_exact ? "exact" : "VIOLATED") + ", max angle " + fmt("%.2e", t.worst_angle));
}

void criterion4() {
  Tally t;
  bool uniform_ok = true;
  Rng rng(kSeed + 4);
  const VerifyOptions o{kRankTol, kEqualityAngle, kSeed};
  for (const auto& name : kCorpus) {
    const FiniteGroup g = make_builtin(name);
    for (int k = 0; k < 15; ++k) {
      std::vector<MeasureVec> lambda{random_measure(g, rng)};
      if (k >= 10) lambda.push_back(random_measure(g, rng));
      t.add(verify_joint_harmonic(g, lambda, describe_lambda(lambda), o));
    }
    const std::vector<MeasureVec> uni{MeasureVec::uniform(g.order())};
    const Report r = verify_joint_harmonic(g, uni, "uniform", o);
    t.add(r);
    uniform_ok = uniform_ok && r.dims.at("H") == 1 && r.dims.at("H_tilde") == static_cast<long long>(g.order());
  }
  line(4, t.ok() && uniform_ok, "H~(Lambda) = (Ran J_Lambda)^perp = Bim(H(Lambda))",
       std::to_string(t.cases) + " cases (10 single + 5 two-measure + uniform per group), max angle " +
           fmt("%.2e", t.worst_angle) + ", uniform dims " + (uniform_ok ? "(1, |G|) exact" : "WRONG") +
           (t.ok() ? "" : "; first failure: " + t.first_failure));
}

void criterion5() {
  double lemma = 0.0, pairing = 0.0;
  Tally t;
  Rng rng(kSeed + 5);
  const VerifyOptions o{kRankTol, kEqualityAngle, kSeed};
  for (std::size_t n = 2; n <= 12; ++n) {
    const FiniteGroup g = cyclic_group(n);
    const DualGroup d = dual_group(g);
    const auto ni = static_cast<Index>(n);
    for (int k = 0; k < 100; ++k) {
      lemma = std::max(lemma, verify_lemma_psi(g, d, random_vector(rng, ni), random_complex(rng, ni, ni)));
      pairing = std::max(pairing, pairing_identity_residual(d, random_vector(rng, ni), random_vector(rng, ni)));
    }
    for (int k = 0; k < 20; ++k) {
      const auto subset = random_subset(rng, n, uniform_index(rng, n + 1));
      t.add(verify_theorem21(g, d, dual_ideal_from_subset(d, subset), o));
    }
  }
  const bool ok = lemma < kLemmaResidual && pairing < kPairingResidual && t.ok();
  line(5, ok, "abelian bridge on Z2..Z12",
       "lemma residual " + fmt("%.2e", lemma) + " (1100 trials), pairing identity " + fmt("%.2e", pairing) +
           ", (Sat I)^perp = Bim_D(I^perp) on " + std::to_string(t.cases) + " ideals, max angle " +
           fmt("%.2e", t.worst_angle) + (t.ok() ? "" : "; first failure: " + t.first_failure));
}

void criterion6() {
  bool dims_exact = true;
  double schur = 0.0, block_sum = 0.0, commute = 0.0;
  for (const auto& name : kCorpus) {
    const FiniteGroup g = make_builtin(name);
    const auto n = static_cast<Index>(g.order());
    const auto irreps = decompose_regular(g, kSeed);
    std::size_t total = 0;
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& a : irreps) {
      total += a.dim * a.dim;
      for (const auto& b : irreps) schur = std::max(schur, schur_check(a, b));
      const CMatrix p = isotypic_projection(g, a).projection;
      sum += p;
      for (std::size_t s = 0; s < g.order(); ++s) {
        const CMatrix r = right_regular(g, s);
        commute = std::max(commute, max_abs(p * r - r * p));
      }
    }
    dims_exact = dims_exact && total == g.order();
    block_sum = std::max(block_sum, max_abs(sum - CMatrix::Identity(n, n)));
  }
  const bool ok = dims_exact && schur < kSchurResidual && block_sum < kBlockSumResidual && commute < kCommuteResidual;
  line(6, ok, "representation theory",
       std::string("sum d^2 = |G| ") + (dims_exact ? "exact" : "VIOLATED") + ", Schur " + fmt("%.2e", schur) +
           ", sum P_pi - I " + fmt("%.2e", block_sum) + ", [P_pi, rho_s] " + fmt("%.2e", commute));
}

void criterion7() {
  double idem = 0.0, unital = 0.0, choi = 1.0, assoc = 0.0, closure = 0.0;
  double cesaro_gap = 0.0, cesaro_gap2 = 0.0;
  bool shrinking = true;
  std::string worst_cesaro;
  std::size_t count = 0;
  Rng rng(kSeed + 7);
  for (const auto& name : kCorpus) {
    const FiniteGroup g = make_builtin(name);
    const auto n = static_cast<Index>(g.order());
    std::vector<MeasureVec> measures{MeasureVec::delta(g.order(), 0), MeasureVec::uniform(g.order())};
    for (int k = 0; k < 3; ++k) measures.push_back(random_measure(g, rng));
    measures.push_back(random_adapted_measure(g, rng));
    for (const auto& mu : measures) {
      ++count;
      const ConditionalExpectation e = poisson_projection(g, mu);
      const CMatrix& p = e.superop.matrix;
      idem = std::max(idem, max_abs(p * p - p));
      unital = std::max(unital, max_abs(e.apply(CMatrix::Identity(n, n)) - CMatrix::Identity(n, n)));
      choi = std::min(choi, choi_min_eigenvalue(e.superop));
      const BoundaryAlgebra a = boundary_algebra(g, mu, e, kSeed);
      assoc = std::max(assoc, a.residuals.at("associativity"));
      closure = std::max(closure, a.residuals.at("harmonic_closure"));
      const CesaroCheck c = cesaro_validation(g, mu, e, kCesaroN, kCesaroBound);
      shrinking = shrinking && c.shrinking;
      if (c.gap_first > cesaro_gap) {
        cesaro_gap = c.gap_first;
        cesaro_gap2 = c.gap_second;
        worst_cesaro = name + " mu=" + describe_measure(mu);
      }
    }
  }
  const bool exp_ok = idem < kExpectationResidual && unital < kExpectationResidual;
  const bool choi_ok = choi > kChoiFloor;
  const bool alg_ok = assoc < kAlgebraResidual && closure < kAlgebraResidual;
  const bool cesaro_ok = cesaro_gap < kCesaroBound && shrinking;
  line(7, exp_ok && choi_ok && alg_ok && cesaro_ok, "Poisson boundary",
       std::to_string(count) + " measures over the corpus" +
           (cesaro_ok ? std::string() : std::string("; the Cesaro sub-check fails, see below")));
  sub(exp_ok, "E idempotent " + fmt("%.2e", idem) + ", unital " + fmt("%.2e", unital) + " (< 1e-10)");
  sub(choi_ok, "Choi min eigenvalue " + fmt("%.2e", choi) + " (> -1e-9)");
  sub(alg_ok, "associativity " + fmt("%.2e", assoc) + ", H(mu) closure " + fmt("%.2e", closure) + " (< 1e-8)");
  sub(cesaro_ok, "Cesaro gap " + fmt("%.2e", cesaro_gap) + " at N=1024, " + fmt("%.2e", cesaro_gap2) +
                     " at N=2048 (bound 1e-6), worst " + worst_cesaro +
                     (shrinking ? ", shrinking" : ", NOT shrinking"));
  if (!cesaro_ok)
    std::printf(
        "      note: C_N - E = (1/N) (id - Theta^N) (id - Theta)^-1 (id - E) is of exact order\n"
        "            1/N unless the walk is periodic with period dividing N; a gap below 1e-6\n"
        "            at N = 1024 is out of reach for aperiodic measures with E != id.\n");
}

void criterion8() {
  std::vector<std::string> groups = kCorpus;
  for (const std::string extra : {"Z9", "Z10", "Z11", "Z12", "D5", "D6"}) groups.push_back(extra);
  Tally t;
  bool dims_ok = true;
  for (const auto& name : groups) {
    const FiniteGroup g = make_builtin(name);
    Rng rng(kSeed + 8 + g.order());
    for (int k = 0; k < 10; ++k) {
      const MeasureVec mu = random_adapted_measure(g, rng);
      const Report r = verify_cross_iso(g, mu, describe_measure(mu), {kRankTol, kEqualityAngle, kSeed + k});
      dims_ok = dims_ok && r.dims.at("crossed_product") == r.dims.at("H_tilde");
      t.add(r);
    }
  }
  line(8, t.ok() && dims_ok, "H~(mu) with <> is *-isomorphic to the crossed product",
       std::to_string(t.cases) + " adapted measures on " + std::to_string(groups.size()) +
           " groups, max angle " + fmt("%.2e", t.worst_angle) + ", dims " + (dims_ok ? "equal" : "DIFFER") +
           (t.ok() ? "" : "; first failure: " + t.first_failure));
}

struct InfraResult {
  double double_annihilator = 0.0;
  bool dims_additive = true;
  double multiplicativity = 0.0;
  double duality = 0.0;

  bool operator==(const InfraResult&) const = default;
};

InfraResult infrastructure(std::uint64_t seed) {
  InfraResult out;
  Rng rng(seed);
  constexpr int kTrials = 120;
  for (int k = 0; k < kTrials; ++k) {
    const FiniteGroup g = make_builtin(kCorpus[static_cast<std::size_t>(k) % kCorpus.size()]);
    const auto n = static_cast<Index>(g.order());
    const TracePairing p(n);
    const Subspace s = random_subspace(rng, n * n, static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(n * n) + 1)));
    const Subspace perp = annihilator(s, p);
    out.dims_additive = out.dims_additive && s.dim() + perp.dim() == n * n;
    out.double_annihilator = std::max(out.double_annihilator, equal(annihilator(perp, p), s, 1.0).max_angle);
    const CVector f = random_vector(rng, n), h = random_vector(rng, n);
    out.multiplicativity =
        std::max(out.multiplicativity, max_abs(theta(g, convolve(g, f, h)).matrix - theta(g, f).matrix * theta(g, h).matrix));
    const CMatrix t = random_complex(rng, n, n), x = random_complex(rng, n, n);
    out.duality = std::max(out.duality, std::abs(p(flatten(theta(g, f).apply(t)), flatten(x)) -
                                                 p(flatten(t), flatten(theta_predual(g, f).apply(x)))));
  }
  return out;
}

void criterion9() {
  const InfraResult a = infrastructure(kSeed + 9), b = infrastructure(kSeed + 9);
  const bool deterministic = a == b;
  const bool ok = deterministic && a.dims_additive && a.double_annihilator < kInfraResidual &&
                  a.multiplicativity < kInfraResidual && a.duality < kInfraResidual;
  line(9, ok, "infrastructure (120 trials each)",
       "double annihilator angle " + fmt("%.2e", a.double_annihilator) + ", dim S + dim S^perp = n^2 " +
           (a.dims_additive ? "always" : "VIOLATED") + ", Theta multiplicativity " + fmt("%.2e", a.multiplicativity) +
           ", Theta/theta duality " + fmt("%.2e", a.duality) + ", " +
           (deterministic ? "deterministic" : "NOT deterministic"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criterion%s failed\n", failures, failures == 1 ? "" : "a");
  return failures == 0 ? 0 : 1;
}
