#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinwehrl/scenarios.hpp"

namespace spinwehrl::cli {

/// Schema or precondition violation; the message starts with the field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind {
  spontaneous_emission,
  thermal_quench,
  rotating_field,
  photon_pulse,
  custom,
  rate_curve,
};

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> scenario_from_string(std::string_view name);

struct ScenarioInfo {
  ScenarioKind kind;
  std::string_view summary;
};
const std::vector<ScenarioInfo>& scenario_catalog();

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::spontaneous_emission;
  nlohmann::json raw;

  TimeSettings time;
  int n_theta = kDefaultThetaNodes;
  int n_phi = kDefaultPhiNodes;
  std::string csv_name;
  double compare_tolerance = 1e-5;

  SpontaneousEmissionParams spontaneous;
  ThermalQuenchParams quench;
  RotatingFieldParams rotating;
  PulseParams pulse;
  RateCurveParams curve;
  CustomParams custom;
  std::optional<DensityMatrix> initial;  // custom only
};

/// Throws ConfigError. Every precondition of the scenario is checked here so
/// that a config which parses also starts running.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// --grid NxM override of the quadrature grid.
void apply_grid_override(ScenarioConfig& cfg, std::string_view spec);
/// --tol override of the integrator tolerance.
void apply_tol_override(ScenarioConfig& cfg, double tol);

/// Dissipator driving the scenario; std::nullopt for rate curves.
std::optional<DissipatorSpec> scenario_dissipator(const ScenarioConfig& cfg);
SpinQuantumNumber scenario_spin(const ScenarioConfig& cfg);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace spinwehrl::cli
