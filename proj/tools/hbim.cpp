// hbim: command-line driver for the harmonic-bimodule library.
//
//   hbim groups
//   hbim compute <object> --group G [--measure M] [--ideal FILE] [--out PATH]
//   hbim verify --theorem T --group G [--ideal FILE|exhaustive-JE] [--measure M]
//               [--trials N] [--seed S] [--tol T] [--jobs K] [--out PATH] [--timing]
//   hbim export <kind> --group G [...] [--out PATH]
//
// Exit codes: 0 all checks pass, 1 a theorem check failed, 2 invalid
// configuration, 3 internal cross-check failure.

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hbim/hbim.hpp"

namespace {

using namespace hbim;

constexpr int kExitPass = 0;
constexpr int kExitTheorem = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct Options {
  std::vector<std::string> groups;
  std::string measure;
  std::string ideal;
  std::string theorem = "all";
  std::string object;
  std::string kind;
  std::string splits;
  std::string subset;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  double tol = kAngleTol;
  std::string out;
  std::size_t jobs = 1;
  std::size_t cap = kDefaultOrderCap;
  bool timing = false;
};

const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names{"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                                              "Klein4", "S3", "D4", "Q8", "Z2xZ4"};
  return names;
}

std::vector<std::string> expand_groups(const std::vector<std::string>& refs) {
  std::vector<std::string> out;
  for (const auto& r : refs) {
    if (r == "corpus")
      out.insert(out.end(), corpus().begin(), corpus().end());
    else
      out.push_back(r);
  }
  if (out.empty()) throw ConfigError("no group given (use --group)");
  return out;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  return out;
}

void emit(const Json& j, const std::string& out, const std::string& summary) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  write_text_file(out, j.dump(2) + "\n");
  std::cout << summary << " -> " << out << "\n";
}

// ---------------------------------------------------------------------------

int cmd_groups(const Options& o) {
  static const std::vector<std::string> listed{"trivial", "Z2",  "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                                               "Z9",      "Z10", "Z11", "Z12", "Klein4", "S3", "S4", "D4",
                                               "D5",      "D6",  "Q8",  "Z2xZ4"};
  std::printf("%-10s %6s  %s\n", "name", "order", "abelian");
  for (const auto& name : listed) {
    const FiniteGroup g = make_builtin(name, o.cap);
    std::printf("%-10s %6zu  %s\n", name.c_str(), g.order(), g.is_abelian() ? "yes" : "no");
  }
  std::printf("families: Z<n>, D<n> (order 2n), S<k>, products AxB; order cap %zu\n", o.cap);
  return kExitPass;
}

// ---------------------------------------------------------------------------

std::vector<MeasureVec> lambda_for(const Options& o, const FiniteGroup& g) {
  if (o.measure.empty()) throw ConfigError("this object needs --measure");
  std::vector<MeasureVec> out;
  std::stringstream ss(o.measure);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(measure_from_string(item, g));
  return out;
}

LeftIdeal ideal_for(const Options& o, const GroupContext& ctx) {
  if (!o.ideal.empty()) {
    const IdealSpec spec = ideal_spec_from_json(parse_json(read_text_file(o.ideal), "ideal file"), ctx.group);
    return build_ideal(ctx, spec);
  }
  if (!o.measure.empty()) return ideal_from_measures(ctx.group, lambda_for(o, ctx.group), "J_Lambda");
  throw ConfigError("this object needs --ideal or --measure");
}

int cmd_compute(const Options& o) {
  const auto names = expand_groups(o.groups);
  if (names.size() != 1) throw ConfigError("compute takes a single group");
  const FiniteGroup g = resolve_group(names[0], o.cap);
  const auto n = static_cast<Index>(g.order());
  const std::string& what = o.object;
  Json j;
  std::string summary;

  if (what == "irreps") {
    const auto irreps = decompose_regular(g, o.seed);
    j = irreps_to_json(g, irreps);
    summary = "irreps: " + std::to_string(irreps.size());
  } else if (what == "dual") {
    j = dual_group_to_json(dual_group(g));
    summary = "dual: " + std::to_string(g.order()) + " characters";
  } else if (what == "harmonic") {
    const Subspace h = harmonic_functions(g, lambda_for(o, g));
    j = subspace_to_json(h, n, 1);
    summary = "harmonic: dim " + std::to_string(h.dim());
  } else if (what == "harmonic-operators") {
    const Subspace h = harmonic_operators(g, lambda_for(o, g));
    j = subspace_to_json(h, n, n);
    summary = "harmonic-operators: dim " + std::to_string(h.dim());
  } else if (what == "ideal" || what == "ran" || what == "ran-perp" || what == "bim") {
    const GroupContext ctx(g, o.seed);
    const LeftIdeal ideal = ideal_for(o, ctx);
    Subspace s;
    if (what == "ideal")
      s = ideal.subspace;
    else if (what == "ran")
      s = ran(g, ideal).subspace;
    else if (what == "ran-perp")
      s = ran_perp(g, ideal);
    else
      s = bim(g, annihilator_ideal(ideal)).subspace;
    j = subspace_to_json(s, n, what == "ideal" ? 1 : n);
    j["ideal"] = ideal.label;
    summary = what + ": dim " + std::to_string(s.dim());
  } else if (what == "expectation") {
    const auto lambda = lambda_for(o, g);
    if (lambda.size() != 1) throw ConfigError("expectation takes a single measure");
    j = expectation_to_json(poisson_projection(g, lambda[0]));
    summary = "expectation: fixed dim " + std::to_string(j["fixed_dim"].get<long long>());
  } else if (what == "boundary") {
    const auto lambda = lambda_for(o, g);
    if (lambda.size() != 1) throw ConfigError("boundary takes a single measure");
    const BoundaryAlgebra a = boundary_algebra(g, lambda[0], poisson_projection(g, lambda[0]), o.seed);
    j = boundary_to_json(a);
    summary = "boundary: dim " + std::to_string(a.dim());
  } else if (what == "crossed-product") {
    const auto lambda = lambda_for(o, g);
    if (lambda.size() != 1) throw ConfigError("crossed-product takes a single measure");
    const CrossedProduct cp = crossed_product(g, lambda[0]);
    j = crossed_product_to_json(cp);
    summary = "crossed-product: dim " + std::to_string(cp.subspace.dim());
  } else {
    throw ConfigError("unknown object '" + what + "'");
  }
  j["group"] = g.name();
  j["object"] = what;
  j["version"] = kVersion;
  emit(j, o.out, summary);
  return kExitPass;
}

// ---------------------------------------------------------------------------

std::string shorten(const std::string& s, std::size_t width) {
  return s.size() <= width ? s : s.substr(0, width - 3) + "...";
}

void print_table(const std::vector<Report>& reports, bool timing) {
  std::printf("%-15s %-8s %-44s %-10s %s\n", "theorem", "group", "case", "angle", timing ? "pass          ms" : "pass");
  for (const auto& r : reports) {
    std::printf("%-15s %-8s %-44s %-10.2e ", r.theorem_id.c_str(), shorten(r.group, 8).c_str(),
                shorten(r.ideal_spec, 44).c_str(), r.max_principal_angle);
    if (timing)
      std::printf("%-4s %10.1f\n", r.pass ? "yes" : "NO", r.runtime_ms);
    else
      std::printf("%s\n", r.pass ? "yes" : "NO");
    if (!r.pass && !r.witness.empty()) std::printf("    witness: %s\n", r.witness.c_str());
  }
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.pass ? 1 : 0;
  std::printf("%zu/%zu cases pass\n", passed, reports.size());
}

int cmd_verify(const Options& o) {
  const auto theorems = parse_theorems(o.theorem);
  if (!(o.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (o.jobs == 0) throw ConfigError("--jobs must be at least 1");
  CorpusOptions opt;
  opt.trials = o.trials;
  opt.seed = o.seed;
  opt.verify = {kRankTol, o.tol, o.seed};

  std::vector<Case> cases;
  for (const auto& name : expand_groups(o.groups)) {
    auto ctx = std::make_shared<const GroupContext>(resolve_group(name, o.cap), o.seed);
    CorpusOptions go = opt;
    if (o.ideal == "exhaustive-JE") {
      go.exhaustive_je_only = true;
    } else if (!o.ideal.empty()) {
      go.ideal = ideal_spec_from_json(parse_json(read_text_file(o.ideal), "ideal file"), ctx->group);
    }
    if (!o.measure.empty()) go.measure = measure_from_string(o.measure, ctx->group);
    for (Theorem t : theorems) {
      // A dual-group ideal only feeds theorem21; l^1 ideals feed the rest.
      if (go.ideal && theorems.size() > 1 &&
          (go.ideal->kind == IdealSpec::Kind::Dual) != (t == Theorem::Theorem21))
        continue;
      auto more = make_cases(ctx, t, go);
      cases.insert(cases.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
  }
  const std::vector<Report> reports = run_cases(cases, o.jobs, o.timing);
  print_table(reports, o.timing);

  bool all = true;
  for (const auto& r : reports) all = all && r.pass;
  if (!o.out.empty()) {
    Json list = Json::array();
    for (const auto& r : reports) list.push_back(to_json(r));
    const Json doc{{"version", kVersion},
                   {"config",
                    {{"theorem", o.theorem},
                     {"groups", o.groups},
                     {"ideal", o.ideal},
                     {"measure", o.measure},
                     {"trials", o.trials},
                     {"seed", o.seed},
                     {"tol", o.tol}}},
                   {"pass", all},
                   {"reports", list}};
    write_text_file(o.out, doc.dump(2) + "\n");
  }
  return all ? kExitPass : kExitTheorem;
}

// ---------------------------------------------------------------------------

int cmd_export(const Options& o) {
  const auto names = expand_groups(o.groups);
  if (names.size() != 1) throw ConfigError("export takes a single group");
  const FiniteGroup g = resolve_group(names[0], o.cap);
  Json j;
  if (o.kind == "group") {
    j = group_to_json(g);
  } else if (o.kind == "measure") {
    if (o.measure.empty()) throw ConfigError("export measure needs --measure");
    j = measure_to_json(measure_from_string(o.measure, g), g.name());
  } else if (o.kind == "ideal") {
    if (!o.splits.empty()) {
      const auto s = parse_list(o.splits, "splits");
      const auto irreps = decompose_regular(g, o.seed);
      ideal_from_subspaces(g, irreps, s);  // validates the split vector
      j = {{"type", "J_E"}, {"s", s}};
    } else if (!o.subset.empty()) {
      if (!g.is_abelian()) throw ConfigError("dual-group ideals need an abelian group");
      const auto s = parse_list(o.subset, "subset");
      for (std::size_t x : s)
        if (x >= g.order()) throw ConfigError("subset element out of range");
      j = {{"type", "dual"}, {"subset", s}};
    } else if (!o.measure.empty()) {
      Json ms = Json::array();
      for (const auto& mu : lambda_for(o, g)) ms.push_back(measure_to_json(mu, g.name()));
      j = {{"type", "J_Lambda"}, {"measures", ms}};
    } else {
      throw ConfigError("export ideal needs --splits, --subset or --measure");
    }
  } else {
    throw ConfigError("unknown export kind '" + o.kind + "'");
  }
  emit(j, o.out, "export " + o.kind);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic operators and bimodule duality on finite groups"};
  app.require_subcommand(1);
  Options o;

  auto add_group = [&](CLI::App* c) {
    c->add_option("--group,-g", o.groups, "builtin name, group file (.json) or 'corpus'; repeatable")->delimiter(',');
    c->add_option("--cap", o.cap, "largest admitted group order");
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out,-o", o.out, "output file (JSON)"); };

  CLI::App* groups = app.add_subcommand("groups", "list builtin groups");
  groups->add_option("--cap", o.cap, "largest admitted group order");

  CLI::App* compute = app.add_subcommand("compute", "compute and export one object");
  compute->add_option("object", o.object,
                      "irreps | dual | harmonic | harmonic-operators | ideal | ran | ran-perp | bim | expectation | "
                      "boundary | crossed-product")
      ->required();
  add_group(compute);
  compute->add_option("--measure,-m", o.measure, "uniform, delta:k, weights a,b,..., or a measure file; ';' separates");
  compute->add_option("--ideal", o.ideal, "ideal file");
  compute->add_option("--seed", o.seed, "random seed");
  add_out(compute);

  CLI::App* verify = app.add_subcommand("verify", "run theorem verification suites");
  add_group(verify);
  verify->add_option("--theorem,-t", o.theorem,
                     "inclusion | masa-slice | main-duality | je-perp | joint-harmonic | theorem21 | lemma-psi | "
                     "cross-iso | all");
  verify->add_option("--ideal,--ideals", o.ideal, "ideal file, or exhaustive-JE");
  verify->add_option("--measure,-m", o.measure, "fixed measure for the measure-based theorems");
  verify->add_option("--trials,-n", o.trials, "random cases per theorem and group");
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--tol", o.tol, "principal-angle and residual tolerance");
  verify->add_option("--jobs,-j", o.jobs, "worker threads");
  verify->add_flag("--timing", o.timing, "record wall time per case (reports are then not reproducible)");
  add_out(verify);

  CLI::App* exp = app.add_subcommand("export", "write group, measure and ideal files");
  exp->add_option("kind", o.kind, "group | measure | ideal")->required();
  add_group(exp);
  exp->add_option("--measure,-m", o.measure, "measure (for kind measure, or a J_Lambda ideal)");
  exp->add_option("--splits", o.splits, "J(E) split vector s, e.g. 1,0,1");
  exp->add_option("--subset", o.subset, "character indices of a dual-group ideal");
  exp->add_option("--seed", o.seed, "random seed");
  add_out(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (groups->parsed()) return cmd_groups(o);
    if (compute->parsed()) return cmd_compute(o);
    if (verify->parsed()) return cmd_verify(o);
    return cmd_export(o);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ConvergenceError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
