#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prox/bounds.hpp"
#include "prox/oracle.hpp"

namespace prox {

enum class Representation { Socr, Qr, Er, TwoSphere, Intersection };
const char* to_string(Representation r);

// Values known in closed form for a generated instance.
struct ClosedForm {
  std::optional<Rational> relax_exact;
  std::optional<double> relax_value;
  std::optional<Vec> relax_optimizer;
  std::optional<Rational> ig_exact;
  std::optional<double> ig_value;
};

struct Instance {
  std::string name;
  Representation representation = Representation::Qr;
  nlohmann::json data;  // payload as written
  IntVec objective;
  std::map<std::string, std::string> parameters;
  std::optional<IntBox> box;
  ClosedForm closed;

  // Parsed from data.
  std::vector<QuadricSet> sets;
  std::optional<TwoSphereInstance> two_sphere;

  std::optional<int> N() const;
  IpProblem problem() const;
};

// Schema: {"name", "representation", "data", "objective", "parameters",
// "box": {"lo","hi"}, "closed_form": {"relaxation","ig","optimizer"}}.
// Numbers are "p/q" strings (kept exact) or JSON numbers (real path).
Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::filesystem::path& file);
nlohmann::json to_json(const Instance& inst);

// Helpers for writing payloads.
nlohmann::json json_number(const Rational& q);
nlohmann::json json_vector(const RatVec& v);
nlohmann::json json_matrix(const RatMat& m);

}  // namespace prox
