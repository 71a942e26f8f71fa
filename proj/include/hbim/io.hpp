#pragma once

// Structured-text (JSON) formats: group files, measure and ideal files, and
// exports of matrices, subspaces and the computed objects. Complex numbers
// are [re, im] pairs; plain numbers are accepted on input as real values.

#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "hbim/fourier.hpp"
#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/linalg.hpp"
#include "hbim/poisson.hpp"
#include "hbim/rep_theory.hpp"

namespace hbim {

using Json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

/// Runs `f`, turning JSON type and key errors into ParseError.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Numbers, vectors, matrices

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline CVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("vector must be an array");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows have unequal lengths");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

/// Basis vectors reshaped as rows x cols matrices, plus the tolerance.
inline Json subspace_to_json(const Subspace& s, Index rows, Index cols) {
  Json basis = Json::array();
  for (Index k = 0; k < s.dim(); ++k)
    basis.push_back(cols == 1 ? vector_to_json(s.vector(k)) : matrix_to_json(unflatten(s.vector(k), rows, cols)));
  return {{"ambient", s.ambient_dim()}, {"dim", s.dim()}, {"shape", {rows, cols}}, {"tol", s.tol()}, {"basis", basis}};
}

// ---------------------------------------------------------------------------
// Groups

inline Json group_to_json(const FiniteGroup& g) {
  return {{"name", g.name()}, {"order", g.order()}, {"labels", g.labels()}, {"table", g.table()}};
}

/// Parses the Cayley-table format; axiom violations throw AxiomError.
inline FiniteGroup load_group(const std::string& text) {
  const Json j = parse_json(text, "group file");
  auto [table, labels, name] = guarded("group file", [&] {
    if (!j.is_object()) throw ParseError("group file must be an object");
    auto t = j.at("table").get<FiniteGroup::Table>();
    auto l = j.value("labels", std::vector<std::string>{});
    auto nm = j.value("name", std::string{});
    if (j.contains("order") && j.at("order").get<std::size_t>() != t.size())
      throw ParseError("group file: order does not match table size");
    return std::tuple{std::move(t), std::move(l), std::move(nm)};
  });
  return {std::move(table), std::move(labels), std::move(name)};
}

/// A builtin name (see make_builtin) or the path of a group file.
inline FiniteGroup resolve_group(const std::string& ref, std::size_t cap = kDefaultOrderCap) {
  if (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json") {
    FiniteGroup g = load_group(read_text_file(ref));
    if (g.order() > cap) throw SizeLimitError("group order " + std::to_string(g.order()) + " exceeds cap");
    return g;
  }
  return make_builtin(ref, cap);
}

// ---------------------------------------------------------------------------
// Measures and ideals

inline Json measure_to_json(const MeasureVec& mu, const std::string& group) {
  return {{"group", group}, {"weights", vector_to_json(mu.weights)}, {"probability", mu.probability}};
}

inline MeasureVec measure_from_json(const Json& j, const FiniteGroup& g) {
  return guarded("measure", [&] {
    MeasureVec mu;
    if (j.is_array()) {
      mu.weights = vector_from_json(j);
      mu.probability = false;
    } else {
      mu.weights = vector_from_json(j.at("weights"));
      mu.probability = j.value("probability", false);
    }
    if (static_cast<std::size_t>(mu.weights.size()) != g.order())
      throw ConfigError("measure has " + std::to_string(mu.weights.size()) + " weights for a group of order " +
                        std::to_string(g.order()));
    mu.validate();
    return mu;
  });
}

/// Named measures: "uniform", "delta:<k>", or comma-separated real weights
/// (a probability measure when they are non-negative and sum to one).
inline MeasureVec measure_from_string(const std::string& text, const FiniteGroup& g) {
  if (text == "uniform") return MeasureVec::uniform(g.order());
  if (text.rfind("delta:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(text.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse measure '" + text + "'");
    }
    if (k >= g.order()) throw ConfigError("delta measure outside the group");
    return MeasureVec::delta(g.order(), k);
  }
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json")
    return measure_from_json(parse_json(read_text_file(text), "measure file"), g);
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse measure '" + text + "'");
    }
  }
  if (w.size() != g.order()) throw ConfigError("measure needs " + std::to_string(g.order()) + " weights");
  double total = 0.0;
  bool nonneg = true;
  for (double x : w) {
    total += x;
    nonneg = nonneg && x >= 0.0;
  }
  if (nonneg && std::abs(total - 1.0) < 1e-12) return MeasureVec::from_probabilities(w);
  MeasureVec mu;
  mu.weights = CVector(static_cast<Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) mu.weights(static_cast<Index>(i)) = w[i];
  mu.probability = false;
  return mu;
}

struct IdealSpec {
  enum class Kind { Explicit, JE, JLambda, Dual } kind = Kind::Explicit;
  std::vector<CVector> basis;         // Explicit, or Dual given by a basis
  std::vector<std::size_t> splits;    // JE
  std::vector<MeasureVec> measures;   // JLambda
  std::vector<std::size_t> subset;    // Dual given by a subset
};

inline IdealSpec ideal_spec_from_json(const Json& j, const FiniteGroup& g) {
  return guarded("ideal file", [&] {
    IdealSpec s;
    const auto type = j.is_array() ? std::string("explicit") : j.at("type").get<std::string>();
    if (j.is_array()) {
      for (const auto& v : j) s.basis.push_back(vector_from_json(v));
    } else if (type == "explicit") {
      for (const auto& v : j.at("basis")) s.basis.push_back(vector_from_json(v));
    } else if (type == "J_E") {
      s.kind = IdealSpec::Kind::JE;
      s.splits = j.at("s").get<std::vector<std::size_t>>();
    } else if (type == "J_Lambda") {
      s.kind = IdealSpec::Kind::JLambda;
      for (const auto& m : j.at("measures")) s.measures.push_back(measure_from_json(m, g));
    } else if (type == "dual") {
      s.kind = IdealSpec::Kind::Dual;
      if (j.contains("subset")) s.subset = j.at("subset").get<std::vector<std::size_t>>();
      if (j.contains("basis"))
        for (const auto& v : j.at("basis")) s.basis.push_back(vector_from_json(v));
    } else {
      throw ParseError("unknown ideal type '" + type + "'");
    }
    for (const auto& v : s.basis)
      if (static_cast<std::size_t>(v.size()) != g.order()) throw ConfigError("ideal basis vector has wrong length");
    return s;
  });
}

// ---------------------------------------------------------------------------
// Exports

inline Json irreps_to_json(const FiniteGroup& g, const std::vector<Irrep>& irreps) {
  Json list = Json::array();
  for (const auto& p : irreps) {
    Json mats = Json::array();
    for (const auto& m : p.matrices) mats.push_back(matrix_to_json(m));
    list.push_back({{"dim", p.dim}, {"character", vector_to_json(p.character())}, {"matrices", mats}});
  }
  return {{"group", g.name()}, {"irreps", list}};
}

inline Json dual_group_to_json(const DualGroup& d) {
  return {{"group", d.group.name()},
          {"generators", d.generators},
          {"factor_orders", d.factor_orders},
          {"exponents", d.exponents},
          {"characters", matrix_to_json(d.values)}};
}

inline Json expectation_to_json(const ConditionalExpectation& e) {
  Json out{{"fixed_dim", e.fixed_space.dim()}, {"separation", e.separation}, {"superoperator", matrix_to_json(e.superop.matrix)}};
  if (e.peripheral_computed) {
    Json p = Json::array();
    for (cplx z : e.peripheral) p.push_back(to_json(z));
    out["peripheral_spectrum"] = p;
  }
  return out;
}

inline Json boundary_to_json(const BoundaryAlgebra& a) {
  const Index n = square_side(a.basis.ambient_dim());
  Json constants = Json::array();
  for (const auto& l : a.left_mult) constants.push_back(matrix_to_json(l));
  return {{"basis", subspace_to_json(a.basis, n, n)},
          {"structure_constants", constants},
          {"unit", vector_to_json(a.unit)},
          {"center_dim", a.center_dim},
          {"commutative", a.commutative},
          {"associativity_exhaustive", a.associativity_exhaustive},
          {"residuals", a.residuals}};
}

inline Json crossed_product_to_json(const CrossedProduct& cp) {
  Json gens = Json::array();
  for (const auto& [k, s] : cp.generators) gens.push_back({{"harmonic_index", k}, {"group_element", s}});
  const Index n2 = square_side(cp.subspace.ambient_dim());
  return {{"generators", gens}, {"basis", subspace_to_json(cp.subspace, n2, n2)}};
}

}  // namespace hbim
