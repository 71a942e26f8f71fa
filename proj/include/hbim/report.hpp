#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace hbim {

inline constexpr const char* kVersion = "1.0.0";

/// Outcome of one theorem check on one case. Reports are plain data so that
/// failed runs can be diagnosed from the emitted JSON alone.
struct Report {
  std::string theorem_id;
  std::string group;
  std::string ideal_spec;
  std::map<std::string, long long> dims;
  double max_principal_angle = 0.0;
  std::map<std::string, double> residuals;
  bool pass = false;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double runtime_ms = 0.0;
  std::vector<std::string> notes;
  std::string witness;
};

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["theorem_id"] = r.theorem_id;
  j["group"] = r.group;
  j["ideal_spec"] = r.ideal_spec;
  j["dims"] = r.dims;
  j["max_principal_angle"] = r.max_principal_angle;
  j["residuals"] = r.residuals;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["runtime_ms"] = r.runtime_ms;
  j["notes"] = r.notes;
  j["scope"] = "finite-group verification";
  j["version"] = kVersion;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.theorem_id = j.at("theorem_id").get<std::string>();
  r.group = j.at("group").get<std::string>();
  r.ideal_spec = j.at("ideal_spec").get<std::string>();
  r.dims = j.at("dims").get<std::map<std::string, long long>>();
  r.max_principal_angle = j.at("max_principal_angle").get<double>();
  if (j.contains("residuals")) r.residuals = j.at("residuals").get<std::map<std::string, double>>();
  r.pass = j.at("pass").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.tol = j.at("tol").get<double>();
  r.runtime_ms = j.at("runtime_ms").get<double>();
  if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("witness")) r.witness = j.at("witness").get<std::string>();
  return r;
}

}  // namespace hbim
