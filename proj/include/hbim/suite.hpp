#pragma once

// Verification cases: random corpora of ideals and measures, case lists per
// theorem, and a case-parallel runner whose output does not depend on the
// number of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hbim/bimodule.hpp"
#include "hbim/fourier.hpp"
#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/io.hpp"
#include "hbim/poisson.hpp"
#include "hbim/random.hpp"
#include "hbim/rep_theory.hpp"

namespace hbim {

inline constexpr double kLemmaTol = 1e-10;
inline constexpr double kPairingTol = 1e-12;
/// J(E) choices are enumerated exhaustively up to this many, sampled beyond.
inline constexpr std::size_t kExhaustiveJeCap = 4096;

enum class Theorem { Inclusion, MasaSlice, MainDuality, JePerp, JointHarmonic, Theorem21, LemmaPsi, CrossIso };

inline const std::vector<std::pair<Theorem, std::string>>& theorem_names() {
  static const std::vector<std::pair<Theorem, std::string>> names{
      {Theorem::Inclusion, "inclusion"},         {Theorem::MasaSlice, "masa-slice"},
      {Theorem::MainDuality, "main-duality"},    {Theorem::JePerp, "je-perp"},
      {Theorem::JointHarmonic, "joint-harmonic"}, {Theorem::Theorem21, "theorem21"},
      {Theorem::LemmaPsi, "lemma-psi"},          {Theorem::CrossIso, "cross-iso"}};
  return names;
}

inline std::vector<Theorem> parse_theorems(const std::string& name) {
  std::vector<Theorem> out;
  for (const auto& [t, s] : theorem_names())
    if (name == "all" || name == s) out.push_back(t);
  if (out.empty()) throw ConfigError("unknown theorem '" + name + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Random corpora

/// Probability measure with a random support of 1..max_support points and
/// Dirichlet-uniform weights.
inline MeasureVec random_measure(const FiniteGroup& g, Rng& rng, std::size_t max_support = 3) {
  const std::size_t size = 1 + uniform_index(rng, std::min(max_support, g.order()));
  const auto support = random_subset(rng, g.order(), size);
  const auto w = dirichlet_uniform(rng, support.size());
  std::vector<double> weights(g.order(), 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) weights[support[k]] = w[k];
  return MeasureVec::from_probabilities(weights);
}

/// Probability measure whose support generates G.
inline MeasureVec random_adapted_measure(const FiniteGroup& g, Rng& rng) {
  std::vector<std::size_t> support = random_subset(rng, g.order(), 1 + uniform_index(rng, std::min<std::size_t>(3, g.order())));
  while (g.generated_subgroup(support).size() < g.order()) {
    const std::size_t x = uniform_index(rng, g.order());
    if (std::find(support.begin(), support.end(), x) == support.end()) support.push_back(x);
  }
  std::sort(support.begin(), support.end());
  const auto w = dirichlet_uniform(rng, support.size());
  std::vector<double> weights(g.order(), 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) weights[support[k]] = w[k];
  return MeasureVec::from_probabilities(weights);
}

inline std::vector<std::vector<std::size_t>> exhaustive_splits(const std::vector<Irrep>& irreps) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (const auto& p : irreps) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out)
      for (std::size_t s = 0; s <= p.dim; ++s) {
        next.push_back(prefix);
        next.back().push_back(s);
      }
    out = std::move(next);
  }
  return out;
}

inline std::size_t count_splits(const std::vector<Irrep>& irreps) {
  std::size_t total = 1;
  for (const auto& p : irreps) {
    total *= p.dim + 1;
    if (total > kExhaustiveJeCap) return total;
  }
  return total;
}

inline std::vector<std::size_t> random_splits(const std::vector<Irrep>& irreps, Rng& rng) {
  std::vector<std::size_t> s;
  for (const auto& p : irreps) s.push_back(uniform_index(rng, p.dim + 1));
  return s;
}

inline std::string describe_measure(const MeasureVec& mu) {
  std::string out = "[";
  for (Index i = 0; i < mu.weights.size(); ++i) {
    char buf[48];
    const cplx z = mu.weights(i);
    if (z.imag() == 0.0)
      std::snprintf(buf, sizeof buf, "%.6g", z.real());
    else
      std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    out += buf;
    if (i + 1 < mu.weights.size()) out += ",";
  }
  return out + "]";
}

inline std::string describe_lambda(const std::vector<MeasureVec>& lambda) {
  std::string out = "Lambda={";
  for (std::size_t k = 0; k < lambda.size(); ++k) out += (k ? "," : "") + describe_measure(lambda[k]);
  return out + "}";
}

// ---------------------------------------------------------------------------
// Cases

/// Everything computed once per group and shared by its cases.
struct GroupContext {
  FiniteGroup group;
  std::vector<Irrep> irreps;
  std::optional<DualGroup> dual;

  GroupContext(FiniteGroup g, std::uint64_t seed) : group(std::move(g)), irreps(decompose_regular(group, seed)) {
    if (group.is_abelian()) dual = dual_group(group);
  }
};

struct Case {
  std::string theorem;
  std::function<Report()> run;
};

struct CorpusOptions {
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  VerifyOptions verify;
  /// When set, ideal-based theorems use only this ideal.
  std::optional<IdealSpec> ideal;
  /// Ideals: exhaustive J(E) only, no random J_Lambda.
  bool exhaustive_je_only = false;
  /// When set, measure-based theorems use only this measure.
  std::optional<MeasureVec> measure;
};

inline LeftIdeal build_ideal(const GroupContext& ctx, const IdealSpec& spec, double tol = kRankTol) {
  switch (spec.kind) {
    case IdealSpec::Kind::Explicit:
      return ideal_explicit(ctx.group, spec.basis, "explicit", tol);
    case IdealSpec::Kind::JE:
      return ideal_from_subspaces(ctx.group, ctx.irreps, spec.splits, tol);
    case IdealSpec::Kind::JLambda:
      return ideal_from_measures(ctx.group, spec.measures, "J_" + describe_lambda(spec.measures), tol);
    case IdealSpec::Kind::Dual:
      break;
  }
  throw ConfigError("a dual-group ideal cannot be used as an ideal of l^1(G)");
}

inline DualIdeal build_dual_ideal(const GroupContext& ctx, const IdealSpec& spec) {
  if (!ctx.dual) throw ConfigError("dual-group ideals need an abelian group");
  if (spec.kind != IdealSpec::Kind::Dual) throw ConfigError("theorem21 needs an ideal of type 'dual'");
  if (!spec.basis.empty()) return dual_ideal_from_basis(*ctx.dual, spec.basis);
  return dual_ideal_from_subset(*ctx.dual, spec.subset);
}

namespace detail {

inline Report with_case_seed(Report r, std::uint64_t case_seed) {
  r.notes.push_back("case_seed=" + std::to_string(case_seed));
  return r;
}

inline Report skipped(const char* id, const FiniteGroup& g, const VerifyOptions& o, const std::string& why) {
  Report r = make_report(id, g, "-", o);
  r.pass = true;
  r.notes.push_back("not applicable: " + why);
  return r;
}

}  // namespace detail

/// Lemma residuals over `trials` random (f, h) plus the pairing identity.
inline Report verify_lemma_psi_report(const GroupContext& ctx, std::size_t trials, std::uint64_t seed,
                                      const VerifyOptions& o) {
  const FiniteGroup& g = ctx.group;
  Report r = detail::make_report("lemma-psi", g, std::to_string(trials) + " random (f,h)", o);
  Rng rng(seed);
  const auto n = static_cast<Index>(g.order());
  double lemma = 0.0, pairing = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    lemma = std::max(lemma, verify_lemma_psi(g, *ctx.dual, random_vector(rng, n), random_complex(rng, n, n)));
    pairing = std::max(pairing, pairing_identity_residual(*ctx.dual, random_vector(rng, n), random_vector(rng, n)));
  }
  r.pass = true;
  detail::residual_check(r, "lemma", lemma, kLemmaTol);
  detail::residual_check(r, "pairing identity", pairing, kPairingTol);
  r.dims = {{"n", n}, {"trials", static_cast<long long>(trials)}};
  return r;
}

inline std::vector<Case> make_cases(const std::shared_ptr<const GroupContext>& ctx, Theorem th, const CorpusOptions& opt) {
  std::vector<Case> cases;
  Rng seeds(opt.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(th) + 1)));
  const FiniteGroup& g = ctx->group;
  const VerifyOptions o = opt.verify;
  const std::string name = [&] {
    for (const auto& [t, s] : theorem_names())
      if (t == th) return s;
    return std::string("?");
  }();

  auto add = [&](std::function<Report(std::uint64_t)> f) {
    const std::uint64_t cs = seeds();
    cases.push_back({name, [f = std::move(f), cs] { return detail::with_case_seed(f(cs), cs); }});
  };

  // Ideal corpora for the l^1(G) ideal theorems.
  std::vector<IdealSpec> ideals;
  if (opt.ideal) {
    ideals.push_back(*opt.ideal);
  } else {
    const std::size_t total = count_splits(ctx->irreps);
    if (total <= kExhaustiveJeCap) {
      for (auto& s : exhaustive_splits(ctx->irreps)) ideals.push_back({IdealSpec::Kind::JE, {}, std::move(s), {}, {}});
    } else {
      for (std::size_t t = 0; t < opt.trials; ++t)
        ideals.push_back({IdealSpec::Kind::JE, {}, random_splits(ctx->irreps, seeds), {}, {}});
    }
    if (!opt.exhaustive_je_only)
      for (std::size_t t = 0; t < opt.trials; ++t) {
        std::vector<MeasureVec> lambda{random_measure(g, seeds)};
        if (t % 2 == 1) lambda.push_back(random_measure(g, seeds));
        ideals.push_back({IdealSpec::Kind::JLambda, {}, {}, std::move(lambda), {}});
      }
  }

  switch (th) {
    case Theorem::Inclusion:
    case Theorem::MasaSlice:
    case Theorem::MainDuality:
      for (const auto& spec : ideals) {
        if (spec.kind == IdealSpec::Kind::Dual) throw ConfigError(name + " needs an ideal of l^1(G)");
        add([ctx, spec, th, o](std::uint64_t) {
          const LeftIdeal j = build_ideal(*ctx, spec, o.rank_tol);
          if (th == Theorem::Inclusion) return verify_inclusion(ctx->group, j, o);
          if (th == Theorem::MasaSlice) return verify_masa_slice(ctx->group, j, o);
          return verify_main_theorem(ctx->group, j, o);
        });
      }
      break;
    case Theorem::JePerp:
      for (const auto& spec : ideals) {
        if (spec.kind != IdealSpec::Kind::JE) continue;
        add([ctx, spec, o](std::uint64_t) { return verify_je_perp(ctx->group, ctx->irreps, spec.splits, o); });
      }
      break;
    case Theorem::JointHarmonic: {
      std::vector<std::vector<MeasureVec>> lambdas;
      if (opt.measure) {
        lambdas.push_back({*opt.measure});
      } else if (opt.ideal && opt.ideal->kind == IdealSpec::Kind::JLambda) {
        lambdas.push_back(opt.ideal->measures);
      } else {
        lambdas.push_back({MeasureVec::uniform(g.order())});
        for (std::size_t t = 0; t < opt.trials; ++t) {
          std::vector<MeasureVec> lambda{random_measure(g, seeds)};
          if (t % 2 == 1) lambda.push_back(random_measure(g, seeds));
          lambdas.push_back(std::move(lambda));
        }
      }
      for (auto& lambda : lambdas)
        add([ctx, lambda, o](std::uint64_t) {
          return verify_joint_harmonic(ctx->group, lambda, describe_lambda(lambda), o);
        });
      break;
    }
    case Theorem::Theorem21:
      if (!ctx->dual) {
        add([ctx, o](std::uint64_t) { return detail::skipped("theorem21", ctx->group, o, "group is not abelian"); });
        break;
      }
      if (opt.ideal) {
        const DualIdeal di = build_dual_ideal(*ctx, *opt.ideal);
        add([ctx, di, o](std::uint64_t) { return verify_theorem21(ctx->group, *ctx->dual, di, o); });
      } else {
        std::vector<std::vector<std::size_t>> subsets{{}};
        std::vector<std::size_t> all(g.order());
        for (std::size_t i = 0; i < g.order(); ++i) all[i] = i;
        subsets.push_back(all);
        for (std::size_t t = 0; t < opt.trials; ++t)
          subsets.push_back(random_subset(seeds, g.order(), uniform_index(seeds, g.order() + 1)));
        for (auto& s : subsets)
          add([ctx, s, o](std::uint64_t) {
            return verify_theorem21(ctx->group, *ctx->dual, dual_ideal_from_subset(*ctx->dual, s), o);
          });
      }
      break;
    case Theorem::LemmaPsi:
      if (!ctx->dual) {
        add([ctx, o](std::uint64_t) { return detail::skipped("lemma-psi", ctx->group, o, "group is not abelian"); });
        break;
      }
      add([ctx, trials = std::max<std::size_t>(opt.trials, 1), o](std::uint64_t cs) {
        return verify_lemma_psi_report(*ctx, trials, cs, o);
      });
      break;
    case Theorem::CrossIso: {
      std::vector<MeasureVec> measures;
      if (opt.measure) {
        measures.push_back(*opt.measure);
      } else {
        measures.push_back(MeasureVec::uniform(g.order()));
        measures.push_back(MeasureVec::delta(g.order(), 0));
        for (std::size_t t = 0; t < opt.trials; ++t) measures.push_back(random_adapted_measure(g, seeds));
      }
      for (auto& mu : measures)
        add([ctx, mu, o](std::uint64_t cs) {
          VerifyOptions oo = o;
          oo.seed = cs;
          Report r = verify_cross_iso(ctx->group, mu, "mu=" + describe_measure(mu), oo);
          r.seed = o.seed;
          return r;
        });
      break;
    }
  }
  return cases;
}

/// Runs the cases on up to `jobs` threads; results keep the case order.
/// The first exception thrown by a case is rethrown after all workers stop.
inline std::vector<Report> run_cases(const std::vector<Case>& cases, std::size_t jobs = 1, bool timing = false) {
  std::vector<Report> out(cases.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        out[i] = cases[i].run();
        if (timing)
          out[i].runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = cases.size();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, cases.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace hbim
