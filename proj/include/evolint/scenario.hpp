#pragma once

// Scenario files: JSON describing the algebra, time frame, grids, dynamics
// and an optional conjugator. See README.md for the schema.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "evolint/lagrangian.hpp"

namespace evolint {

struct Tolerances {
  double conjugated = 1e-12;
  double computed_unitary = 1e-10;
  double dynamics = 1e-12;
};

struct LoadOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> dense_cap;
};

struct Scenario {
  nlohmann::json canonical;  // effective config after overrides
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::size_t dense_cap = 0;
  Tolerances tolerances;

  std::shared_ptr<const GridEvolutionSpace> grid;
  std::shared_ptr<const RepresentationSpace> space;

  std::string dynamics_kind;  // "lagrangian", "action_weight" or "trivial"
  std::optional<ActionTerms> terms;
  std::optional<Lagrangian> lagrangian;
  std::optional<Action> action;
  std::optional<ActionWeight> weight;
  std::optional<DenseOperator> conjugator;
};

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string fingerprint(const nlohmann::json& canonical);

/// Reads EVOLINT_DENSE_CAP if set.
std::optional<std::size_t> dense_cap_from_env();

/// Throws ParseError, SchemaError or CapExceeded.
Scenario parse_scenario(const nlohmann::json& config, const LoadOptions& options = {});
Scenario load_scenario(const std::filesystem::path& path, const LoadOptions& options = {});

/// The built-in demo: M_2, times {1,2,3} with weights (1, 0.5, 0), grid
/// sizes (2,3,2), a local Lagrangian and a Haar conjugator on N = 12.
nlohmann::json demo_scenario_json();

/// Matrices in configs: flat row-major arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index n);

}  // namespace evolint
